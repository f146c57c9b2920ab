use clap::Parser;

fn main() {
    let cli = suita_lab::cli::Cli::parse();
    std::process::exit(suita_lab::cli::run(&cli));
}
