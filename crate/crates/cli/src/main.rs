use clap::Parser;

use arrtower_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let env = std::env::var("ARRTOWER_MAX_K").ok();
    let code = arrtower_cli::run(&cli, env.as_deref(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
