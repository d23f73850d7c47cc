fn main() {
    std::process::exit(afdm::cli::main());
}
