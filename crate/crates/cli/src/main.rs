fn main() {
    std::process::exit(wcslab_cli::main_entry(std::env::args_os()));
}
