fn main() {
    std::process::exit(skewfork::cli::main_with_args(std::env::args_os()));
}
