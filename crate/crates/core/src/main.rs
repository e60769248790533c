fn main() {
    std::process::exit(btlab::cli::run(std::env::args_os()));
}
