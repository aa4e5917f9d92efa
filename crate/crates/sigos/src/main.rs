fn main() {
    std::process::exit(sigos::run_cli());
}
