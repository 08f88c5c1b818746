//! Field arithmetic, ring products, and the field-to-ideal isomorphism.

use pyrit::field::{FieldElem, FieldSpec};
use pyrit::ring::{idempotent_theta1, in_ideal_a1, phi1, phi1_inv, ring_mul, RingElem};

fn main() {
    for f in [FieldSpec::gf16(), FieldSpec::gf64()] {
        let n = f.n();
        let theta = idempotent_theta1(&f);
        println!("{} modulus {:#b}, ring length {n}", f.id(), f.modulus());
        println!(
            "  theta1 = {theta}, theta1^2 = {}",
            ring_mul(theta, theta, n)
        );

        let (a, b) = (FieldElem(0b0110), FieldElem(0b0011));
        let (pa, pb) = (phi1(a, &f), phi1(b, &f));
        println!("  a = {a}, b = {b}, a*b = {}", f.mul(a, b));
        println!("  phi1(a) = {pa}, phi1(b) = {pb}");
        let prod = ring_mul(pa, pb, n);
        println!(
            "  phi1(a)*phi1(b) = {prod} -> back in the field: {}",
            phi1_inv(prod, &f)
        );

        let ideal_size = (0..1u16 << n)
            .filter(|&v| in_ideal_a1(RingElem(v), &f))
            .count();
        println!("  ideal size {ideal_size} of {} ring elements", 1 << n);
    }

    // (1 + x^2)(x + x^4) in F2[x]/(x^5 + 1)
    let p = ring_mul(RingElem(0b00101), RingElem(0b10010), 5);
    println!("(1+x^2)(x+x^4) = {p}");
}
