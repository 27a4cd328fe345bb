fn main() {
    std::process::exit(dce_sim::cli::run_from_env());
}
