use clap::Parser;

fn main() {
    let cli = hingeset_cli::Cli::parse();
    std::process::exit(hingeset_cli::run(&cli));
}
