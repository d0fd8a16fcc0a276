fn main() {
    std::process::exit(spectral_curve::cli::run(std::env::args().collect()));
}
