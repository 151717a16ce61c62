fn main() {
    std::process::exit(fio_lab::lab::cli_main(std::env::args_os()));
}
