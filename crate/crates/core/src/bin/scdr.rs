fn main() {
    scdr_core::cli::main()
}
