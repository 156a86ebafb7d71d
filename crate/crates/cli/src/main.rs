fn main() {
    println!("resolvent");
}
