fn main() {
    std::process::exit(ksqrng::cli::run_cli(std::env::args_os()));
}
