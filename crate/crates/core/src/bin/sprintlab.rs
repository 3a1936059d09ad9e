fn main() {
    sprintlab::cli::main();
}
