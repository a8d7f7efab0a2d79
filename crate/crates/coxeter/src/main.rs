use clap::Parser;

fn main() {
    let cli = coxeter_interchange::cli::Cli::parse();
    if let Err(err) = coxeter_interchange::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
