fn main() {
    std::process::exit(qlbs::cli::run(std::env::args_os()));
}
