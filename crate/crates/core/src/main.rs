fn main() {
    std::process::exit(sent2vec::cli::main());
}
