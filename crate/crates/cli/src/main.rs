use std::process::ExitCode;

fn main() -> ExitCode {
    let inv = schinzel_cli::run(std::env::args_os());
    if let Some(report) = &inv.report {
        let text = serde_json::to_string_pretty(report).expect("reports always serialize");
        println!("{text}");
        if let Some(path) = &inv.out {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(schinzel_cli::EXIT_USAGE as u8);
            }
        }
    }
    if !inv.message.is_empty() {
        eprintln!("{}", inv.message.trim_end());
    }
    ExitCode::from(inv.code as u8)
}
