fn main() {
    std::process::exit(dqre::cli::main_with_args(std::env::args_os()));
}
