use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let threads = std::env::var(modgrav::THREADS_ENV).ok();
    let code = modgrav::main_with(
        std::env::args_os(),
        threads.as_deref(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
