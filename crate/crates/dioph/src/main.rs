fn main() {
    std::process::exit(dioph::cli::run(std::env::args().skip(1).collect()));
}
