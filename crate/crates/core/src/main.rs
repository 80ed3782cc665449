fn main() {
    std::process::exit(penning::cli::run(std::env::args_os()));
}
