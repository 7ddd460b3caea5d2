fn main() {
    std::process::exit(symmap::cli::main());
}
