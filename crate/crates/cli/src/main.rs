use std::io::Write;

fn main() {
    let env_seed = std::env::var(conrad_cli::SEED_ENV).ok();
    let outcome = conrad_cli::run_command(std::env::args_os(), env_seed.as_deref());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
