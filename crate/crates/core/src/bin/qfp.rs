use std::io::Write;
use std::process::exit;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match qfp::cli::execute(&args).and_then(|out| {
        if let Some(text) = out.emit()? {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return Err(qfp::cli::CliError {
                    code: qfp::cli::EXIT_CONFIG,
                    message: "cannot write to standard output".into(),
                });
            }
        }
        eprintln!("{}", out.summary);
        Ok(())
    }) {
        Ok(()) => qfp::cli::EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    exit(code);
}
