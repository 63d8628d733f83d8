fn main() {
    std::process::exit(fsword::cli::run(std::env::args_os()));
}
