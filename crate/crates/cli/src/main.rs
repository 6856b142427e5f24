use clap::Parser;
use fareylab_cli::{run, Cli};
use std::io::Write;
use std::process::exit;

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // results are independent of the pool size; this only bounds it
        let _ = rayon_pool(cli.threads);
    }
    match run(cli) {
        Ok(out) => {
            if let Some(bytes) = out.artifact {
                match &out.path {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, &bytes) {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            exit(1);
                        }
                    }
                    None => {
                        std::io::stdout().write_all(&bytes).expect("stdout");
                    }
                }
            }
            exit(out.exit_code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}

fn rayon_pool(threads: usize) -> Result<(), Box<dyn std::error::Error>> {
    fareylab_core::build_thread_pool(threads)?;
    Ok(())
}
