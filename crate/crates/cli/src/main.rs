use clap::error::ErrorKind;
use clap::Parser;
use svoronoi_cli::{configure_threads, exit, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::SUCCESS,
                _ => exit::ERROR,
            };
            std::process::exit(code);
        }
    };
    let code = configure_threads()
        .and_then(|()| cli.into_config())
        .and_then(|config| run(&config))
        .unwrap_or_else(|e| {
            eprintln!("error: {e}");
            exit::ERROR
        });
    std::process::exit(code);
}
