fn main() {
    std::process::exit(whstab::cli::main_with(std::env::args_os()));
}
