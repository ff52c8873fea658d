fn main() {
    std::process::exit(adiabatic_pointer_cli::run(std::env::args_os()));
}
