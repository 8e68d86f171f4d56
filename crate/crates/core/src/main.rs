fn main() {
    std::process::exit(fptlab::cli::run());
}
