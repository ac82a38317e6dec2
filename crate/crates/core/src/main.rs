fn main() {
    std::process::exit(lattes_wander::cli::run(std::env::args_os()));
}
