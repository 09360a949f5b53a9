fn main() {
    std::process::exit(ofdmim::cli::run(std::env::args_os()));
}
