fn main() {
    std::process::exit(oilbench::run(std::env::args_os()));
}
