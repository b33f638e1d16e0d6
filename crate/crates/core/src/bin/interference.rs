fn main() {
    std::process::exit(interference::cli::parse_and_dispatch(std::env::args_os()));
}
