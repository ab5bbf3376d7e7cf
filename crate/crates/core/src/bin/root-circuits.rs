fn main() {
    std::process::exit(root_circuits::cli::run());
}
