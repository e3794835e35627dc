fn main() {
    std::process::exit(quasumb::cli::run_cli(std::env::args_os()));
}
