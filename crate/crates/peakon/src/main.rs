fn main() {
    peakon::cli::main_with_exit();
}
