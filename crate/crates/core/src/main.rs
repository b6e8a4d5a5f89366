fn main() {
    std::process::exit(mvset::cli::run());
}
