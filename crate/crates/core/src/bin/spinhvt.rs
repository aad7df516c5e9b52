fn main() {
    std::process::exit(spinhvt::cli::run_cli(std::env::args_os()));
}
