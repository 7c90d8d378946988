fn main() {
    std::process::exit(ns_spectra_cli::run());
}
