use ksqrng::extract::{expected_yield, par_von_neumann_extract, von_neumann_extract, ExtractionSummary};
use ksqrng::protocol::{run_batch, trial_at, ProtocolConfig, Symbol};
use ksqrng::readout::{classify, estimate_misclassification, IqPoint, NoiseParams, ReadoutLevel};
use ksqrng::stats::{bucket_frequency, entropy_per_byte, nist_subset};
use ksqrng::BitStream;
use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Upper Gaussian tail `Q(z)` by composite Simpson quadrature of the density
/// over `[z, z + 12]`.
fn gaussian_tail(z: f64) -> f64 {
    let n = 20_000;
    let h = 12.0 / n as f64;
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut sum = pdf(z) + pdf(z + 12.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * pdf(z + k as f64 * h);
    }
    sum * h / 3.0
}

fn random_bits(seed: u64, n: usize) -> BitStream {
    let mut bytes = vec![0u8; n.div_ceil(8)];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut bytes);
    if !n.is_multiple_of(8) {
        *bytes.last_mut().unwrap() &= (1u8 << (n % 8)) - 1;
    }
    BitStream::from_packed(bytes, n).unwrap()
}

fn biased_bits(seed: u64, n: usize, p0: f64) -> BitStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| !rng.random_bool(p0)).collect()
}

#[test]
fn gaussian_tail_oracle_sanity() {
    assert!((gaussian_tail(0.0) - 0.5).abs() < 1e-12);
    assert!((gaussian_tail(1.959963984540054) - 0.025).abs() < 1e-12);
}

#[test]
fn misclassification_matches_gaussian_tail() {
    let params = NoiseParams::default();
    // Neighbouring centers sit √2 apart; L0 and L2 have one such neighbour,
    // L1 has two; the L0–L2 pair at distance 2 contributes under 1e-7.
    let q = gaussian_tail(std::f64::consts::SQRT_2 / 2.0 / params.iq_sigma);
    let analytic = 4.0 * q / 3.0;
    let est = estimate_misclassification(&params, 100_000_000, &mut ChaCha8Rng::seed_from_u64(8));
    assert!((est - analytic).abs() < 0.1 * analytic, "estimate {est}, analytic {analytic}");
    assert!((3e-5..=1.2e-4).contains(&est), "{est}");
}

proptest! {
    #[test]
    fn classify_is_translation_invariant(
        shift in prop::array::uniform2(-50.0..50.0f64),
        pt in prop::array::uniform2(-3.0..3.0f64),
    ) {
        let base = NoiseParams::default();
        let mut moved = base;
        for c in moved.iq_centers.iter_mut() {
            *c = IqPoint::new(c.i + shift[0], c.q + shift[1]);
        }
        let p = IqPoint::new(pt[0], pt[1]);
        let q = IqPoint::new(pt[0] + shift[0], pt[1] + shift[1]);
        // skip points within roundoff of a decision boundary
        let mut d: Vec<f64> = base.iq_centers.iter().map(|c| p.distance_sqr(c)).collect();
        d.sort_by(f64::total_cmp);
        prop_assume!(d[1] - d[0] > 1e-9);
        prop_assert_eq!(classify(&p, &base), classify(&q, &moved));
    }

    #[test]
    fn centers_classify_to_themselves(sigma in 0.0..1.0f64) {
        let params = NoiseParams { iq_sigma: sigma, ..NoiseParams::default() };
        for level in ReadoutLevel::ALL {
            prop_assert_eq!(classify(&params.iq_centers[level.index()], &params), level);
        }
    }
}

#[test]
fn noisy_protocol_ten_million_trials() {
    let (stream, summary) = run_batch(&ProtocolConfig::new(10_000_000, 1)).unwrap();
    let c = stream.counts();
    let p0 = c.zero as f64 / c.binary() as f64;
    assert!((p0 - 0.536).abs() < 0.005, "p0 = {p0}");
    assert!(summary.p_discard.value < 1e-3, "discard = {}", summary.p_discard.value);
    assert!(summary.p_discard.value > 0.0);
    // spot-check indexed replay against the batch
    for i in [0u64, 1, 12_345, 9_999_999] {
        assert_eq!(trial_at(&ProtocolConfig::new(10_000_000, 1), i).symbol, stream.symbols()[i as usize]);
    }
}

#[test]
fn ideal_protocol_never_discards() {
    let (stream, _) = run_batch(&ProtocolConfig::ideal(2_000_000, 42)).unwrap();
    assert!(stream.symbols().iter().all(|&s| s != Symbol::Discard));
}

#[test]
fn biased_input_extraction() {
    let n = 10_000_000;
    let input = biased_bits(17, n, 0.7);
    let out = von_neumann_extract(&input);
    let m = out.len() as f64;
    let s = ExtractionSummary::new(&input, &out);
    assert!((s.realized_yield / expected_yield(0.7) - 1.0).abs() < 0.01, "yield {}", s.realized_yield);
    let zeros = out.count_zeros() as f64 / m;
    assert!((zeros - 0.5).abs() < 3.0 * 0.5 / m.sqrt(), "zero frequency {zeros}");
    assert_eq!(par_von_neumann_extract(&input, 4096), out);
}

fn bits_strategy() -> impl Strategy<Value = BitStream> {
    prop::collection::vec(any::<bool>(), 0..2000).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn extraction_complement_symmetry(input in bits_strategy()) {
        let flipped: BitStream = input.iter().map(|b| !b).collect();
        let a: Vec<bool> = von_neumann_extract(&input).iter().collect();
        let b: Vec<bool> = von_neumann_extract(&flipped).iter().map(|b| !b).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn extraction_halves_at_most(input in bits_strategy(), chunk in 1usize..64) {
        let out = von_neumann_extract(&input);
        prop_assert!(out.len() <= input.len() / 2);
        prop_assert_eq!(par_von_neumann_extract(&input, chunk), out);
    }

    #[test]
    fn entropy_is_permutation_invariant(bytes in prop::collection::vec(any::<u8>(), 1..4000), seed: u64) {
        let n = bytes.len() * 8;
        let mut shuffled = bytes.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let a = entropy_per_byte(&BitStream::from_packed(bytes, n).unwrap()).unwrap();
        let b = entropy_per_byte(&BitStream::from_packed(shuffled, n).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=8.0).contains(&a));
    }
}

#[test]
fn nist_subset_on_pseudorandom_streams() {
    for seed in 0..20 {
        let results = nist_subset(&random_bits(seed, 1_000_000)).unwrap();
        assert_eq!(results.len(), 5);
        let passed = results.iter().filter(|r| r.outcome.passed() == Some(true)).count();
        assert!(passed >= 4, "seed {seed}: {results:?}");
    }
}

#[test]
fn nist_subset_rejects_biased_stream() {
    let results = nist_subset(&biased_bits(3, 1_000_000, 0.536)).unwrap();
    let freq = results.iter().find(|r| r.name == "frequency").unwrap();
    assert_eq!(freq.outcome.passed(), Some(false));
}

#[test]
fn bucket_spread_tracks_binomial() {
    let n = 100_000_000;
    let b = bucket_frequency(&random_bits(99, n), 999_302).unwrap();
    assert_eq!(b.n_buckets, 100);
    let binomial = 0.5 / (999_302f64).sqrt();
    assert!((b.mean - 0.5).abs() < 3.0 * binomial / 10.0, "mean {}", b.mean);
    assert!((3.5e-4..=6.5e-4).contains(&b.std_dev), "std {} vs {binomial}", b.std_dev);
}
