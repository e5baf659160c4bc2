fn main() {
    std::process::exit(incidence_lie::cli::main());
}
