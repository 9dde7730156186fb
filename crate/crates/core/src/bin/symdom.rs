use clap::Parser;

fn main() {
    let cli = symdom::cli::Cli::parse();
    std::process::exit(symdom::cli::main_with(cli));
}
