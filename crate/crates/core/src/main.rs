fn main() {
    std::process::exit(hyperbasis::cli::run(std::env::args_os()));
}
