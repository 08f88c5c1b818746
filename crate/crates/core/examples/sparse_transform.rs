//! Lightest ring representative of every field element versus the cost of
//! its binary multiplication matrix.

use pyrit::field::FieldSpec;
use pyrit::ring::{phi1, sparse_transform, to_shift_set};

fn main() {
    for f in [FieldSpec::gf16(), FieldSpec::gf64()] {
        println!("{}:", f.id());
        println!(
            "  elem  idempotent image           sparse              rotations  bitmatrix ones"
        );
        let (mut sparse_total, mut bits_total) = (0u32, 0usize);
        for u in f.elements().skip(1) {
            let image = phi1(u, &f);
            let sparse = sparse_transform(u, &f);
            let ones = f.to_bitmatrix(u).weight();
            sparse_total += sparse.weight();
            bits_total += ones;
            println!(
                "  {:>4}  {:<25}  {:<18}  {:<9}  {ones}",
                u.0,
                image.to_string(),
                sparse.to_string(),
                format!("{:?}", to_shift_set(sparse, f.n()).shifts()),
            );
        }
        let count = (f.order() - 1) as f64;
        println!(
            "  average xors per packet: sparse {:.4}, bitmatrix {:.4}",
            sparse_total as f64 / count,
            bits_total as f64 / count / f.w() as f64
        );
    }
}
