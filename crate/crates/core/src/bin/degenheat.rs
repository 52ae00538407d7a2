fn main() {
    std::process::exit(degenheat::cli::run(std::env::args_os()));
}
