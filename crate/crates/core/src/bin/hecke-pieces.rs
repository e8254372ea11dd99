fn main() {
    std::process::exit(hecke_pieces::cli::run(std::env::args_os()));
}
