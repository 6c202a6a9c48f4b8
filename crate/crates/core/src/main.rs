fn main() {
    std::process::exit(hermitian_srg::cli::cli_main(std::env::args_os()));
}
