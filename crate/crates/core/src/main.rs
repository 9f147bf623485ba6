fn main() {
    std::process::exit(toda_core::cli::main_with(std::env::args_os()));
}
