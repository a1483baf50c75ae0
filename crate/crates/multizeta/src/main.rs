fn main() {
    // CLI filled in once the library modules land.
}
