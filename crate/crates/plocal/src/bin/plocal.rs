fn main() {
    std::process::exit(plocal::cli::main());
}
