fn main() {
    std::process::exit(compar::cli::main_entry());
}
