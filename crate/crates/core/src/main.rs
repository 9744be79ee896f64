fn main() {
    std::process::exit(ce_qec::cli::run(std::env::args_os()));
}
