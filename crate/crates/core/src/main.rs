use clap::Parser;

fn main() {
    let cli = hhcap::cli::Cli::parse();
    let outcome = hhcap::cli::run(&cli);
    print!("{}", hhcap::cli::render(&outcome.report, cli.config.format));
    std::process::exit(outcome.code);
}
