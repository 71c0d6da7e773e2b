fn main() {
    std::process::exit(dirac_kahler::cli::run(std::env::args_os()));
}
