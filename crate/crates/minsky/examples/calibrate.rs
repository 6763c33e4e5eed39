// One-off calibration of the Ack size constant: size(Ack_{d,n}) / (d * 4^n).

use minsky::gadgets::{build_ack, build_ack_reduced};

fn main() {
    let mut worst = 0.0f64;
    for d in 1..=3usize {
        for n in 0..=2u64 {
            let (p, _) = build_ack(d, n).unwrap();
            let size = u64::try_from(&p.size()).unwrap();
            let denom = (d as u64) * 4u64.pow(n as u32);
            let ratio = size as f64 / denom as f64;
            worst = worst.max(ratio);
            println!(
                "ack({d},{n}): size {size:>6}  d*4^n {denom:>4}  ratio {ratio:7.2}  dim {}",
                p.dimension()
            );
        }
    }
    println!("worst ratio: {worst:.2}");
    for d in 1..=3usize {
        for n in 0..=2u64 {
            let (p, _) = build_ack_reduced(d, n).unwrap();
            println!(
                "ack_reduced({d},{n}): size {:>6}  dim {}",
                p.size(),
                p.dimension()
            );
        }
    }
}
