fn main() {
    std::process::exit(ctp_cli::run(std::env::args_os()));
}
