//! Discriminants, factorization types over residue fields, irreducibility over
//! `K`, and root finding inside extension rings.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtElem, ExtRing, ExtRingExt};
use crate::field::{rational_sqrt, Field};
use crate::numfield::{QuadElem, ResidueElem};
use crate::poly::{determinant, Poly};
use crate::rootfind::{low_degree_roots, quad_roots, rational_roots};

/// Characteristic-zero fields with exact square roots and root finding.
pub trait ExactField: Field {
    fn sqrt(&self) -> Option<Self>;
    /// Distinct roots of `f` in the field. Complete for `Q` and `K`.
    fn roots(f: &Poly<Self>) -> Vec<Self>;
}

impl ExactField for BigRational {
    fn sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn roots(f: &Poly<Self>) -> Vec<Self> {
        rational_roots(f)
    }
}

impl ExactField for QuadElem {
    fn sqrt(&self) -> Option<Self> {
        QuadElem::sqrt(self)
    }
    fn roots(f: &Poly<Self>) -> Vec<Self> {
        quad_roots(f)
    }
}

impl<F: ExactField> ExactField for ExtElem<F> {
    /// Square roots in `F[x]/(m)` for `m` of degree 2 or 3 irreducible.
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let ring = self.ring().clone();
        let candidate = match ring.degree() {
            2 => sqrt_quadratic_ext(self),
            3 => sqrt_cubic_ext(self),
            _ => self.as_base().and_then(|b| b.sqrt()).map(|b| ring.embed(b)),
        }?;
        (candidate.square() == *self).then_some(candidate)
    }

    /// Deterministic candidate search: roots already in the base field and
    /// the ring generator are tried and divided out, and any quadratic
    /// remainder is solved with [`ExactField::sqrt`].
    fn roots(f: &Poly<Self>) -> Vec<Self> {
        let Some(lc) = f.lc() else { return Vec::new() };
        let ring = lc.ring().clone();
        let mut candidates: Vec<Self> = Vec::new();
        if let Ok(base) = f.try_map(|c| c.as_base().ok_or(())) {
            candidates.extend(F::roots(&base).into_iter().map(|r| ring.embed(r)));
        }
        candidates.push(ring.gen());
        candidates.push(-ring.gen());

        let mut h = f.clone();
        let mut out: Vec<Self> = Vec::new();
        for c in candidates {
            while h.degree().unwrap_or(0) > 0 && h.eval(&c).is_zero() {
                if !out.contains(&c) {
                    out.push(c.clone());
                }
                match h.divrem(&Poly::linear(&c)) {
                    Some((q, _)) => h = q,
                    None => break,
                }
            }
        }
        if h.degree().unwrap_or(0) <= 2 {
            for r in low_degree_roots(&h, |x: &Self| x.sqrt()).unwrap_or_default() {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// `a = c0 + c1 x` in `F[x]/(x^2 + m1 x + m0)`: complete the square and solve
/// the norm equations in the base.
fn sqrt_quadratic_ext<F: ExactField>(a: &ExtElem<F>) -> Option<ExtElem<F>> {
    let ring = a.ring().clone();
    let m = ring.modulus().coeffs();
    let (m0, m1) = (m[0].clone(), m[1].clone());
    let c = a.coords();
    let two = m0.int_like(2);
    let half_m1 = m1.div(&two)?;
    // x = t - m1/2, t^2 = disc
    let disc = half_m1.square() - m0;
    let e0 = c[0].clone() - c[1].clone() * half_m1.clone();
    let e1 = c[1].clone();
    let from_ab = |alpha: F, beta: F| ring.with_coeffs(vec![alpha + beta.clone() * half_m1.clone(), beta]);
    if e1.is_zero() {
        if let Some(alpha) = e0.sqrt() {
            return Some(from_ab(alpha, e0.zero_like()));
        }
        let beta = e0.div(&disc)?.sqrt()?;
        return Some(from_ab(e0.zero_like(), beta));
    }
    let n = (e0.square() - disc * e1.square()).sqrt()?;
    for s in [n.clone(), -n] {
        let Some(alpha) = (e0.clone() + s).div(&two).and_then(|x| x.sqrt()) else {
            continue;
        };
        if alpha.is_zero() {
            continue;
        }
        let beta = e1.div(&(two.clone() * alpha.clone()))?;
        let z = from_ab(alpha, beta);
        if z.square() == *a {
            return Some(z);
        }
    }
    None
}

/// Square roots in a cubic extension.
///
/// If `z^2 = a` with `z` of degree 3 and minimal polynomial
/// `X^3 - s1 X^2 + s2 X - s3`, then the characteristic polynomial
/// `X^3 - e1 X^2 + e2 X - e3` of `a` satisfies `e1 = s1^2 - 2 s2`,
/// `e2 = s2^2 - 2 s1 s3`, `e3 = s3^2`, and `z = (s1 a + s3) / (a + s2)`.
fn sqrt_cubic_ext<F: ExactField>(a: &ExtElem<F>) -> Option<ExtElem<F>> {
    let ring = a.ring().clone();
    if let Some(b) = a.as_base() {
        // Odd degree: a base element is a square in the extension only if it
        // already is one in the base.
        return b.sqrt().map(|r| ring.embed(r));
    }
    let (e1, e2, e3) = char_poly3(&a.mul_matrix())?;
    let root_e3 = e3.sqrt()?;
    let two = e1.int_like(2);
    for s3 in [root_e3.clone(), -root_e3] {
        // ((s1^2 - e1)/2)^2 - 2 s3 s1 - e2 = 0, times 4:
        // s1^4 - 2 e1 s1^2 - 8 s3 s1 + e1^2 - 4 e2
        let quartic = Poly::new(vec![
            e1.square() - e1.int_like(4) * e2.clone(),
            e1.int_like(-8) * s3.clone(),
            e1.int_like(-2) * e1.clone(),
            e1.zero_like(),
            e1.one_like(),
        ]);
        for s1 in F::roots(&quartic) {
            let s2 = (s1.square() - e1.clone()).div(&two)?;
            let den = a.clone() + ring.embed(s2);
            let Some(den_inv) = den.inv() else { continue };
            let z = (a.clone() * ring.embed(s1) + ring.embed(s3.clone())) * den_inv;
            if z.square() == *a {
                return Some(z);
            }
        }
    }
    None
}

/// `(trace, sum of principal 2x2 minors, determinant)` of a 3x3 matrix.
fn char_poly3<F: Field>(m: &[Vec<F>]) -> Option<(F, F, F)> {
    let tr = m[0][0].clone() + m[1][1].clone() + m[2][2].clone();
    let minor = |i: usize, j: usize| m[i][i].clone() * m[j][j].clone() - m[i][j].clone() * m[j][i].clone();
    let e2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = determinant(m.to_vec())?;
    Some((tr, e2, det))
}

// ---------------------------------------------------------------------------

/// Discriminant of a polynomial of degree 2, 3 or 4.
pub fn discriminant<F: Field>(f: &Poly<F>) -> Result<F> {
    match f.degree() {
        Some(2..=4) => f
            .discriminant()
            .ok_or_else(|| Error::NonInvertible("leading coefficient".into())),
        d => Err(Error::InvalidInput(format!(
            "discriminant supports degrees 2-4, got {d:?}"
        ))),
    }
}

/// Factorization type over a residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitType {
    Irreducible,
    HasRoot,
    SplitsCompletely,
    Degenerate,
}

/// Exhaustive enumeration is used up to this field size; beyond it roots are
/// counted through `gcd(f, x^q - x)`.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1_000_000;

/// Number of distinct roots of `f` in its residue field.
pub fn count_roots(f: &Poly<ResidueElem>) -> usize {
    let Some(lc) = f.lc() else { return 0 };
    let k = lc.field;
    if k.order() <= EXHAUSTIVE_ROOT_LIMIT {
        return k.elements().filter(|x| f.eval(x).is_zero()).count();
    }
    let Some(monic) = f.monic() else { return 0 };
    let x = Poly::x(lc);
    let xq = x.pow_mod(k.order(), &monic).expect("monic modulus");
    let g = monic.gcd(&(xq - x)).expect("field");
    g.degree().unwrap_or(0)
}

/// Factorization type of `f` (degree 2 or 3) over its residue field.
pub fn split_type(f: &Poly<ResidueElem>) -> SplitType {
    let Some(deg) = f.degree() else {
        return SplitType::Degenerate;
    };
    if deg == 0 {
        return SplitType::Degenerate;
    }
    if !f.is_squarefree() {
        return SplitType::Degenerate;
    }
    match count_roots(f) {
        0 if deg <= 3 => SplitType::Irreducible,
        0 => SplitType::Degenerate,
        r if r == deg => SplitType::SplitsCompletely,
        _ => SplitType::HasRoot,
    }
}

/// Irreducibility over `K` (or `Q`) for degrees 2 to 4.
///
/// Degree 2 and 3: no root in the field. Degree 4: no root and no quadratic
/// factor, the latter decided through the resolvent cubic.
pub fn is_irreducible_over_k<F: ExactField>(f: &Poly<F>) -> Result<bool> {
    let deg = f.degree().unwrap_or(0);
    if !(2..=4).contains(&deg) {
        return Err(Error::InvalidInput(format!(
            "irreducibility test supports degrees 2-4, got {deg}"
        )));
    }
    if !F::roots(f).is_empty() {
        return Ok(false);
    }
    if deg < 4 {
        return Ok(true);
    }
    let g = f
        .monic()
        .ok_or_else(|| Error::NonInvertible("leading coefficient".into()))?;
    Ok(!has_quadratic_factor(&g))
}

fn has_quadratic_factor<F: ExactField>(monic: &Poly<F>) -> bool {
    let c = monic.coeffs();
    let t = c[0].clone();
    // Depress: x = y - a3/4.
    let shift = -(c[3].clone().div(&t.int_like(4)).expect("char 0"));
    let y = Poly::x(&t) + Poly::constant(shift);
    let mut dep = Poly::zero();
    for coeff in c.iter().rev() {
        dep = dep * y.clone() + Poly::constant(coeff.clone());
    }
    let get = |i: usize| dep.coeff(i).cloned().unwrap_or_else(|| t.zero_like());
    let (p, q, r) = (get(2), get(1), get(0));
    if q.is_zero() {
        // y^4 + p y^2 + r
        let inner = Poly::new(vec![r.clone(), p.clone(), t.one_like()]);
        if !F::roots(&inner).is_empty() {
            return true;
        }
        if let Some(b) = r.sqrt() {
            for b in [b.clone(), -b] {
                if (t.int_like(2) * b - p.clone()).sqrt().is_some() {
                    return true;
                }
            }
        }
        return false;
    }
    let resolvent = Poly::new(vec![
        -q.square(),
        p.square() - t.int_like(4) * r,
        t.int_like(2) * p,
        t.one_like(),
    ]);
    F::roots(&resolvent).iter().any(|z| z.sqrt().is_some())
}

/// All roots of `f` (coefficients in the base) that lie in `ring`.
pub fn roots_in_ext<F: ExactField>(f: &Poly<F>, ring: &Arc<ExtRing<F>>) -> Vec<ExtElem<F>> {
    let lifted = f.map(|c| ring.embed(c.clone()));
    ExtElem::<F>::roots(&lifted)
}

/// Outcome of adjoining a square root.
#[derive(Clone, Debug)]
pub enum SqrtAdjoined<F: Field> {
    /// The element already had a square root.
    InPlace(F),
    /// A new level `F[s]/(s^2 - a)` and its generator.
    Tower(Arc<ExtRing<F>>, ExtElem<F>),
}

pub fn adjoin_sqrt<F: ExactField>(a: &F) -> Result<SqrtAdjoined<F>> {
    if a.is_zero() {
        return Err(Error::InvalidInput("cannot adjoin the square root of zero".into()));
    }
    if let Some(z) = a.sqrt() {
        return Ok(SqrtAdjoined::InPlace(z));
    }
    let ring = ExtRing::new(Poly::new(vec![-a.clone(), a.zero_like(), a.one_like()]))?;
    let s = ring.gen();
    Ok(SqrtAdjoined::Tower(ring, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::numfield::{QuadFieldDesc, ResidueField};

    fn fp(p: u64, c: &[i64]) -> Poly<ResidueElem> {
        let k = ResidueField::prime_field(p);
        Poly::new(c.iter().map(|&x| k.int(x)).collect())
    }

    #[test]
    fn split_type_examples() {
        assert_eq!(split_type(&fp(7, &[-1, 0, 0, 1])), SplitType::SplitsCompletely);
        assert_eq!(split_type(&fp(13, &[10, 9, -1, 1])), SplitType::Irreducible);
        assert_eq!(split_type(&fp(5, &[0, 0, 1])), SplitType::Degenerate);
        assert_eq!(split_type(&fp(7, &[0, -1, 0, 1])), SplitType::SplitsCompletely);
        // x (x^2 + 1) over F_7
        assert_eq!(split_type(&fp(7, &[0, 1, 0, 1])), SplitType::HasRoot);
    }

    #[test]
    fn count_roots_large_field_uses_gcd() {
        let p = 1_000_003;
        // (x - 1)(x - 2)(x - 3)
        let f = fp(p, &[-6, 11, -6, 1]);
        assert_eq!(count_roots(&f), 3);
        assert_eq!(split_type(&f), SplitType::SplitsCompletely);
    }

    #[test]
    fn irreducible_over_k_examples() {
        let k = QuadFieldDesc::eisenstein();
        let f = Poly::new(vec![k.int(-28), k.zero(), k.one()]);
        assert!(is_irreducible_over_k(&f).unwrap());
        let g = Poly::new(vec![k.int(-1), k.zero(), k.one()]);
        assert!(!is_irreducible_over_k(&g).unwrap());
        let h = Poly::new(vec![k.rational(rat(35, 36)), k.rational(rat(1, 3)), k.int(-1), k.one()]);
        assert!(is_irreducible_over_k(&h).unwrap());
        // x^2 + 3 splits over Q(sqrt -3)
        let s = Poly::new(vec![k.int(3), k.zero(), k.one()]);
        assert!(!is_irreducible_over_k(&s).unwrap());
        assert!(is_irreducible_over_k(&Poly::new(vec![k.one(), k.one()])).is_err());
    }

    #[test]
    fn quartic_irreducibility() {
        // x^4 + 1 = (x^2 + i)(x^2 - i) over Q(i), irreducible over Q
        let x4p1 = Poly::new(vec![int(1), int(0), int(0), int(0), int(1)]);
        assert!(is_irreducible_over_k(&x4p1).unwrap());
        let g = QuadFieldDesc::gaussian();
        let x4p1_k = x4p1.map(|c| g.rational(c.clone()));
        assert!(!is_irreducible_over_k(&x4p1_k).unwrap());
        // (x^2 + x + 3)(x^2 - 2x + 5) over Q
        let a = Poly::new(vec![int(3), int(1), int(1)]);
        let b = Poly::new(vec![int(5), int(-2), int(1)]);
        assert!(!is_irreducible_over_k(&(a * b)).unwrap());
        // x^4 - 2 is irreducible over Q(sqrt -3)
        let e = QuadFieldDesc::eisenstein();
        let f = Poly::new(vec![e.int(-2), e.zero(), e.zero(), e.zero(), e.one()]);
        assert!(is_irreducible_over_k(&f).unwrap());
        // x^4 + 2x^2 + 9 = (x^2 + 2x + 3)(x^2 - 2x + 3)
        let h = Poly::new(vec![int(9), int(0), int(2), int(0), int(1)]);
        assert!(!is_irreducible_over_k(&h).unwrap());
    }

    #[test]
    fn roots_in_cyclic_and_pure_cubics() {
        let f = Poly::new(vec![int(-1), int(-3), int(0), int(1)]);
        let l = ExtRing::new(f.clone()).unwrap();
        let roots = roots_in_ext(&f, &l);
        assert_eq!(roots.len(), 3);
        let t = l.gen();
        let expect = [
            t.clone(),
            l.embed(int(2)) - t.square(),
            t.square() - t.clone() - l.embed(int(2)),
        ];
        for e in expect {
            assert!(roots.contains(&e));
        }

        let g = Poly::new(vec![int(-2), int(0), int(0), int(1)]);
        let m = ExtRing::new(g.clone()).unwrap();
        assert_eq!(roots_in_ext(&g, &m), vec![m.gen()]);

        let lin = Poly::new(vec![int(-5), int(1)]);
        assert_eq!(roots_in_ext(&lin, &l), vec![l.embed(int(5))]);
    }

    #[test]
    fn adjoin_sqrt_examples() {
        match adjoin_sqrt(&int(4)).unwrap() {
            SqrtAdjoined::InPlace(r) => assert_eq!(r.square(), int(4)),
            _ => panic!("4 is a square"),
        }
        let g = QuadFieldDesc::gaussian();
        match adjoin_sqrt(&g.rational(rat(-5, 3))).unwrap() {
            SqrtAdjoined::Tower(ring, s) => {
                assert_eq!(ring.degree(), 2);
                assert_eq!(s.square(), ring.embed(g.rational(rat(-5, 3))));
            }
            _ => panic!("-5/3 is not a square in Q(i)"),
        }
        let e = QuadFieldDesc::eisenstein();
        match adjoin_sqrt(&e.int(-3)).unwrap() {
            SqrtAdjoined::InPlace(r) => assert_eq!(r.square(), e.int(-3)),
            _ => panic!("-3 is a square in Q(sqrt -3)"),
        }
        assert!(adjoin_sqrt(&int(0)).is_err());
    }

    #[test]
    fn sqrt_in_quadratic_tower() {
        // L = Q(i)[x]/(x^2 - x + 2/3); squares of random elements have roots.
        let g = QuadFieldDesc::gaussian();
        let l = ExtRing::new(Poly::new(vec![g.rational(rat(2, 3)), g.int(-1), g.one()])).unwrap();
        let z = l.with_coeffs(vec![g.elem(rat(1, 2), int(3)), g.elem(int(-2), rat(1, 7))]);
        let s = z.square().sqrt().unwrap();
        assert!(s == z || s == -z);
        assert!(l.gen().sqrt().is_none() || l.gen().sqrt().unwrap().square() == l.gen());
    }
}
