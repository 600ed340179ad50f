fn main() {
    std::process::exit(nrw::cli::run_cli(std::env::args_os()));
}
