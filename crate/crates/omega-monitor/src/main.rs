fn main() {
    // CLI wiring lands after the library surface is complete.
}
