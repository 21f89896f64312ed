//! Roots in `Q` and in `K = Q(sqrt d)` of polynomials with exact coefficients.
//!
//! After clearing denominators and making the polynomial monic, every root is
//! an algebraic integer whose size is bounded by the Cauchy bound. Roots are
//! found modulo a small split prime, lifted p-adically past twice that bound,
//! and each candidate is checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::Field;
use crate::numfield::{is_prime, legendre, sqrt_mod, QuadElem};
use crate::poly::Poly;

/// Squarefree part `f / gcd(f, f')` (characteristic zero).
fn squarefree_part<F: Field>(f: &Poly<F>) -> Poly<F> {
    match f.gcd(&f.derivative()) {
        Some(g) if g.degree().unwrap_or(0) > 0 => f.divrem(&g).map(|(q, _)| q).unwrap_or_else(|| f.clone()),
        _ => f.clone(),
    }
}

/// Roots of a polynomial of degree at most 2, given a square-root oracle.
pub(crate) fn low_degree_roots<F: Field>(f: &Poly<F>, sqrt: impl Fn(&F) -> Option<F>) -> Option<Vec<F>> {
    match f.degree() {
        Some(1) => {
            let c = f.coeffs();
            Some(vec![(-c[0].clone()).div(&c[1])?])
        }
        Some(2) => {
            let c = f.coeffs();
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            let disc = b.clone() * b.clone() - a.int_like(4) * a.clone() * cc.clone();
            let two_a = a.int_like(2) * a.clone();
            let Some(s) = sqrt(&disc) else { return Some(vec![]) };
            let r1 = (s.clone() - b.clone()).div(&two_a)?;
            if s.is_zero() {
                return Some(vec![r1]);
            }
            let r2 = (-s - b.clone()).div(&two_a)?;
            Some(vec![r1, r2])
        }
        Some(0) | None => Some(vec![]),
        _ => None,
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn deriv(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Roots modulo `p` by exhaustive search; `None` if the reduction is not squarefree.
fn simple_roots_mod_p(c: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let pb = BigInt::from(p);
    let cp: Vec<u64> = c.iter().map(|a| a.mod_floor(&pb).to_u64().unwrap()).collect();
    let dp = deriv(c);
    let mut roots = Vec::new();
    for x in 0..p {
        let xb = BigInt::from(x);
        let mut acc = 0u64;
        for a in cp.iter().rev() {
            acc = ((acc as u128 * x as u128 + *a as u128) % p as u128) as u64;
        }
        if acc == 0 {
            if eval_mod(&dp, &xb, &pb).is_zero() {
                return None;
            }
            roots.push(x);
        }
    }
    Some(roots)
}

/// Newton-lifts a simple root modulo `p` to a root modulo `p^k >= target`.
fn hensel_lift(c: &[BigInt], root: u64, p: u64, modulus: &BigInt) -> BigInt {
    let dc = deriv(c);
    let mut m = BigInt::from(p);
    let mut r = BigInt::from(root);
    while &m < modulus {
        m = (&m * &m).min(modulus.clone());
        let fr = eval_mod(c, &r, &m);
        let dr = eval_mod(&dc, &r, &m);
        let inv = modinv(&dr, &m).expect("simple root");
        r = (r - fr * inv).mod_floor(&m);
    }
    r
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let x = x.mod_floor(m);
    if &x * 2 > *m {
        x - m
    } else {
        x
    }
}

fn ceil_sqrt(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &r * &r < *n {
        r + 1
    } else {
        r
    }
}

fn prime_power_above(p: u64, bound: &BigInt) -> BigInt {
    let pb = BigInt::from(p);
    let mut m = pb.clone();
    while &m <= bound {
        m *= &pb;
    }
    m
}

/// Distinct rational roots.
pub fn rational_roots(f: &Poly<BigRational>) -> Vec<BigRational> {
    let g = squarefree_part(f);
    if g.degree().unwrap_or(0) <= 2 {
        return low_degree_roots(&g, crate::field::rational_sqrt).unwrap_or_default();
    }
    let den = g.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let n = ints.len() - 1;
    let lead = ints[n].clone();
    // G(X) = lead^{n-1} g(X / lead), monic with integer coefficients.
    let monic: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i == n {
                BigInt::one()
            } else {
                a * lead.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    let bound = BigInt::one() + monic[..n].iter().map(|a| a.abs()).max().unwrap_or_default();
    let target = &bound * 2 + 1;
    let mut p = 5u64;
    let roots_p = loop {
        if is_prime(p) {
            if let Some(r) = simple_roots_mod_p(&monic, p) {
                break r;
            }
        }
        p += 2;
    };
    let modulus = prime_power_above(p, &target);
    let mut out: Vec<BigRational> = Vec::new();
    for r in roots_p {
        let lifted = symmetric(&hensel_lift(&monic, r, p, &modulus), &modulus);
        if lifted.abs() > bound {
            continue;
        }
        let cand = BigRational::new(lifted, lead.clone());
        if Zero::is_zero(&g.eval(&cand)) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Distinct roots in `K`.
pub fn quad_roots(f: &Poly<QuadElem>) -> Vec<QuadElem> {
    let Some(lc) = f.lc() else { return Vec::new() };
    let field = lc.field();
    let g = squarefree_part(f);
    if g.degree().unwrap_or(0) <= 2 {
        return low_degree_roots(&g, |x: &QuadElem| x.sqrt()).unwrap_or_default();
    }
    let d = field.d();
    let den = g
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()));
    let scale = field.rational(BigRational::from_integer(den));
    let ints: Vec<QuadElem> = g.coeffs().iter().map(|c| c.clone() * scale.clone()).collect();
    let n = ints.len() - 1;
    let lead = ints[n].clone();
    let monic: Vec<QuadElem> = ints
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i == n {
                field.one()
            } else {
                a.clone() * lead.pow((n - 1 - i) as u64)
            }
        })
        .collect();
    let parts = |x: &QuadElem| (x.a.to_integer(), x.b.to_integer());
    // |G_i| <= ceil(sqrt(norm)); a root R satisfies |R| <= 1 + max |G_i| and
    // 2R = a + b sqrt(d) with |a|, |b| <= 2|R|.
    let max_abs = monic[..n]
        .iter()
        .map(|c| ceil_sqrt(&c.norm().to_integer()))
        .max()
        .unwrap_or_default();
    let coord_bound = (max_abs + 1) * 2;
    let target = &coord_bound * 2 + 1;

    let mut p = 5u64;
    let (rho, roots1, roots2) = loop {
        if is_prime(p) && (2 * d.unsigned_abs()) % p != 0 && legendre(d, p) == 1 {
            let r = sqrt_mod(d.rem_euclid(p as i64) as u64, p).unwrap();
            let at = |s: u64| -> Vec<BigInt> {
                monic
                    .iter()
                    .map(|c| {
                        let (a, b) = parts(c);
                        a + b * BigInt::from(s)
                    })
                    .collect()
            };
            if let (Some(r1), Some(r2)) = (simple_roots_mod_p(&at(r), p), simple_roots_mod_p(&at(p - r), p)) {
                break (r, r1, r2);
            }
        }
        p += 2;
    };
    let modulus = prime_power_above(p, &target);
    let rho_k = hensel_lift(&[BigInt::from(-d), BigInt::zero(), BigInt::one()], rho, p, &modulus);
    let at_k = |s: &BigInt| -> Vec<BigInt> {
        monic
            .iter()
            .map(|c| {
                let (a, b) = parts(c);
                (a + b * s).mod_floor(&modulus)
            })
            .collect()
    };
    let c1 = at_k(&rho_k);
    let c2 = at_k(&(-&rho_k));
    let lifted1: Vec<BigInt> = roots1.iter().map(|&r| hensel_lift(&c1, r, p, &modulus)).collect();
    let lifted2: Vec<BigInt> = roots2.iter().map(|&r| hensel_lift(&c2, r, p, &modulus)).collect();
    let rho_inv = modinv(&rho_k, &modulus).expect("rho is a unit");
    let gpoly = Poly::new(monic);
    let mut out: Vec<QuadElem> = Vec::new();
    for s1 in &lifted1 {
        for s2 in &lifted2 {
            let a = symmetric(&(s1 + s2), &modulus);
            let b = symmetric(&((s1 - s2) * &rho_inv), &modulus);
            if a.abs() > coord_bound || b.abs() > coord_bound {
                continue;
            }
            let two = BigInt::from(2);
            let cand = field.elem(BigRational::new(a, two.clone()), BigRational::new(b, two));
            if gpoly.eval(&cand).is_zero() {
                let root = cand.div(&lead).expect("non-zero leading coefficient");
                if !out.contains(&root) {
                    out.push(root);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::numfield::QuadFieldDesc;

    #[test]
    fn rational_cubic_roots() {
        // 6 (x - 1/2)(x + 2/3)(x - 5) = 6x^3 - 29x^2 - 7x + 10
        let f = Poly::new(vec![int(10), int(-7), int(-29), int(6)]);
        let mut r = rational_roots(&f);
        r.sort();
        assert_eq!(r, vec![rat(-2, 3), rat(1, 2), int(5)]);
        let g = Poly::new(vec![int(-1), int(-3), int(0), int(1)]);
        assert!(rational_roots(&g).is_empty());
    }

    #[test]
    fn eisenstein_cubic_roots() {
        let k = QuadFieldDesc::eisenstein();
        let w = k.elem(rat(-1, 2), rat(1, 2));
        // (x - w)(x - 3)(x + 1/2 + sqrt(-3)) expanded
        let r3 = k.int(3);
        let r4 = k.elem(rat(-1, 2), int(-1));
        let f = Poly::linear(&w) * Poly::linear(&r3) * Poly::linear(&r4);
        let roots = quad_roots(&f.scale(&k.elem(rat(7, 3), int(2))));
        assert_eq!(roots.len(), 3);
        for r in [w, r3, r4] {
            assert!(roots.contains(&r));
        }
    }

    #[test]
    fn repeated_roots_are_reported_once() {
        let k = QuadFieldDesc::gaussian();
        let i = k.sqrt_d();
        let f = Poly::linear(&i) * Poly::linear(&i) * Poly::linear(&k.int(2)) * Poly::linear(&k.int(-7));
        let roots = quad_roots(&f);
        assert_eq!(roots.len(), 3);
    }
}
