use clap::Parser;

use rfuzzy::cli::{run, Args, CliConfig};

fn main() {
    let config = CliConfig::from(Args::parse());
    // deep rule chains recurse; give evaluation room beyond the default stack
    let code = std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(move || run(&config))
        .expect("spawn evaluation thread")
        .join()
        .unwrap_or(3);
    std::process::exit(code);
}
