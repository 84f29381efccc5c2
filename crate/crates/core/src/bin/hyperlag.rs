use std::io::{self, Write};

fn main() {
    let stdin = io::stdin();
    let code = hyperlag::cli::main_with(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    let _ = io::stdout().flush();
    std::process::exit(code);
}
