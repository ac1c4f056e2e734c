fn main() -> ! {
    goeritz::cli::main()
}
