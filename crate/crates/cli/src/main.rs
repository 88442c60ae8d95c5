fn main() {
    // filled in once the kernel is complete
}
