use wigner_backflow::cli;

fn main() {
    if let Some(n) = cli::threads_from_env() {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("configure worker pool");
    }
    std::process::exit(cli::run_from(std::env::args_os()));
}
