use clap::Parser;

use cyclefrac::cli::{self, Cli};

fn main() {
    let cli = Cli::parse();
    match cli::execute(cli) {
        Ok(result) => {
            print!("{}", result.stdout);
            std::process::exit(result.code);
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}
