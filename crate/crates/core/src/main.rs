fn main() {
    std::process::exit(lrem::cli::run());
}
