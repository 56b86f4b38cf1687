fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HOROLAB_LOG")).init();
    std::process::exit(horolab::cli::run(std::env::args_os()));
}
