fn main() {
    let out = unitary_forms::cli::run(std::env::args_os());
    print!("{}", out.output);
    std::process::exit(out.code);
}
