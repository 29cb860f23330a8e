use clap::Parser;
use evomarket_cli::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match evomarket_cli::run(&cli.command) {
        Ok(report) => println!("{report}"),
        Err(e) => {
            eprintln!("evomarket: {e:#}");
            std::process::exit(1);
        }
    }
}
