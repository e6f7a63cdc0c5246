fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let code = mutail_cli::run(&argv, &mut stdout, &mut stderr);
    std::process::exit(code);
}
