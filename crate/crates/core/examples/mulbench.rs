use num::BigInt;

fn main() {
    for bits in [1u64 << 20, 1 << 22, 1 << 23, 1 << 24, 3 << 23] {
        let a = (BigInt::from(7) << (bits - 3)) + 12345;
        let b = (BigInt::from(5) << (bits - 3)) + 67891;
        let t = std::time::Instant::now();
        let c: BigInt = &a * &b;
        println!(
            "mul {:>9} bits: {:?} (result bits {})",
            bits,
            t.elapsed(),
            c.bits()
        );
    }
}
