fn main() {
    std::process::exit(distinct_states::cli::main_with(std::env::args_os()));
}
