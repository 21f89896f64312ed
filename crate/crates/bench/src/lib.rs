//! Fixtures shared by the benchmarks.

use rankgain_core::numfield::primes_above;
use rankgain_core::{Curve, PrimeIdeal, QuadElem, QuadFieldDesc};

/// `y^2 = x^3 + a x + b` over `Q(sqrt d)`.
pub fn curve(d: i64, a: i64, b: i64) -> Curve<QuadElem> {
    let k = QuadFieldDesc::new(d).expect("valid field");
    Curve::new(k.int(a), k.int(b)).expect("non-singular")
}

/// First prime of `Q(sqrt d)` above `p`.
pub fn prime(d: i64, p: u64) -> PrimeIdeal {
    primes_above(QuadFieldDesc::new(d).expect("valid field"), p).expect("odd prime")[0]
}
