use clap::Parser;

fn main() -> std::process::ExitCode {
    ppareto_cli::main_with(&ppareto_cli::Cli::parse())
}
