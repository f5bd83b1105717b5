fn main() {
    std::process::exit(relayperf::run());
}
