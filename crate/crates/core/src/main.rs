fn main() {
    std::process::exit(hyproots::cli::run(std::env::args_os()));
}
