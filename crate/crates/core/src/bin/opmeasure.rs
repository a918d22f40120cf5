fn main() {
    std::process::exit(opmeasure::cli::run(std::env::args_os()));
}
