fn main() {
    std::process::exit(h3_biharmonic::cli::run(std::env::args_os()));
}
