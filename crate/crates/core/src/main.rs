fn main() {
    std::process::exit(magic_heat::cli::run(std::env::args_os()));
}
