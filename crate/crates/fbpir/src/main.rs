use clap::Parser;

fn main() {
    let cli = fbpir::cli::Cli::parse();
    let code = fbpir::cli::run(cli, &mut std::io::stdout().lock());
    std::process::exit(code);
}
