fn main() {
    println!("growdex");
}
