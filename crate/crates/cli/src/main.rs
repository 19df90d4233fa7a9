fn main() {
    std::process::exit(cbsig_cli::run(std::env::args_os()));
}
