fn main() {
    // placeholder until the scenario driver lands
}
