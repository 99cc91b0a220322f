fn main() {
    std::process::exit(billiard_scars::cli::run(std::env::args_os()));
}
