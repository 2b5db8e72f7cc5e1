fn main() {
    let status = bpic_cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(status);
}
