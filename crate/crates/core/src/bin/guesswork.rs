fn main() {
    let code = erasure_guesswork::cli::run(
        std::env::args().collect(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
