fn main() {
    std::process::exit(hypertail::cli::run(std::env::args_os()));
}
