fn main() {
    std::process::exit(graphon::cli::main());
}
