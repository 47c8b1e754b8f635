fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(ddcalc_cli::run(&argv));
}
