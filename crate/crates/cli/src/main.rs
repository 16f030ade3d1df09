use clap::Parser;

fn main() {
    if let Err(e) = omwa_cli::run(omwa_cli::args::Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
