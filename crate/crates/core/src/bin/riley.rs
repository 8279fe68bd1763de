fn main() {
    let env_eps = std::env::var(riley::cli::EPS_VAR).ok();
    let code = riley::cli::run(
        std::env::args_os(),
        env_eps.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
