fn main() {
    std::process::exit(pfl::cli::main_from(std::env::args_os()));
}
