fn main() {
    std::process::exit(messep_lab::cli::run(std::env::args_os()));
}
