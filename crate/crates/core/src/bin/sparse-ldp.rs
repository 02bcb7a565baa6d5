fn main() {
    std::process::exit(sparse_ldp::cli::dispatch(std::env::args_os()));
}
