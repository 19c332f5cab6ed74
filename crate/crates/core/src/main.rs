fn main() {
    std::process::exit(aelab::cli::run(std::env::args_os()));
}
