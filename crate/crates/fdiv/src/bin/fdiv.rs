fn main() {
    std::process::exit(fdiv::cli::run());
}
