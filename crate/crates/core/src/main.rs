fn main() {
    std::process::exit(commentbench::cli::run(std::env::args_os()));
}
