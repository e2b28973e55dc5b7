fn main() {
    std::process::exit(stpa_cli::main_from_env());
}
