fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("B2CRYSTAL_LOG")).init();
    let code = b2crystal::cli::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
