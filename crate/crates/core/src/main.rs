fn main() {
    std::process::exit(ballvol::cli::main_with_args(std::env::args_os()));
}
