fn main() {
    std::process::exit(stubmatch_cli::run(std::env::args_os()));
}
