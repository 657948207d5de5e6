fn main() {
    std::process::exit(ovl::cli::run());
}
