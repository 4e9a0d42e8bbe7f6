fn main() {
    std::process::exit(secoff::simkit::cli::run());
}
