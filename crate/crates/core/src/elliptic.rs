//! Short Weierstrass curves `y^2 = x^3 + Ax + B` over any [`Field`].

use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::numfield::reduce;
use crate::numfield::{is_prime, rational_mod, unramified_primes, PrimeIdeal, QuadElem, ResidueElem, ResidueField};
use crate::poly::Poly;
use crate::reduction::Reducible;

/// Enumeration budget for [`count_points`].
pub const POINT_COUNT_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Curve<F> {
    pub a: F,
    pub b: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CurvePoint<F> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F> CurvePoint<F> {
    pub fn affine(x: F, y: F) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn coords(&self) -> Option<(&F, &F)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> CurvePoint<G> {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: f(x), y: f(y) },
        }
    }
}

impl<F: fmt::Display> fmt::Display for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: Field> Curve<F> {
    /// Rejects singular curves (`4A^3 + 27B^2 = 0`).
    pub fn new(a: F, b: F) -> Result<Self> {
        let c = Curve { a, b };
        if c.singular_part().is_zero() {
            return Err(Error::Degenerate("4A^3 + 27B^2 = 0".into()));
        }
        Ok(c)
    }

    /// `4A^3 + 27B^2`.
    pub fn singular_part(&self) -> F {
        self.a.int_like(4) * self.a.pow(3) + self.a.int_like(27) * self.b.square()
    }

    /// `-16 (4A^3 + 27B^2)`.
    pub fn discriminant(&self) -> F {
        self.a.int_like(-16) * self.singular_part()
    }

    /// `x^3 + Ax + B`.
    pub fn rhs(&self, x: &F) -> F {
        x.pow(3) + self.a.clone() * x.clone() + self.b.clone()
    }

    pub fn rhs_poly(&self) -> Poly<F> {
        Poly::new(vec![
            self.b.clone(),
            self.a.clone(),
            self.a.zero_like(),
            self.a.one_like(),
        ])
    }

    pub fn contains(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => (y.square() - self.rhs(x)).is_zero(),
        }
    }

    /// The point `(x, y)`, checked to lie on the curve.
    pub fn point(&self, x: F, y: F) -> Result<CurvePoint<F>> {
        let p = CurvePoint::affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::InvalidInput("point is not on the curve".into()))
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Curve<G> {
        Curve {
            a: f(&self.a),
            b: f(&self.b),
        }
    }

    pub fn neg(&self, p: &CurvePoint<F>) -> CurvePoint<F> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y.clone()),
        }
    }

    /// Chord-tangent addition. Over a ring, a non-invertible denominator is
    /// reported as [`Error::NonInvertible`].
    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) = (p, q) else {
            return Ok(if p.is_infinity() { q.clone() } else { p.clone() });
        };
        let slope = if (x1.clone() - x2.clone()).is_zero() {
            if (y1.clone() + y2.clone()).is_zero() {
                return Ok(CurvePoint::Infinity);
            }
            if (y1.clone() - y2.clone()).is_zero() {
                let num = x1.int_like(3) * x1.square() + self.a.clone();
                let den = x1.int_like(2) * y1.clone();
                num.div(&den)
                    .ok_or_else(|| Error::NonInvertible("2y in doubling".into()))?
            } else {
                return Err(Error::NonInvertible(
                    "points share x but y differs by a zero divisor".into(),
                ));
            }
        } else {
            (y2.clone() - y1.clone())
                .div(&(x2.clone() - x1.clone()))
                .ok_or_else(|| Error::NonInvertible("x2 - x1 in chord".into()))?
        };
        let x3 = slope.square() - x1.clone() - x2.clone();
        let y3 = slope * (x1.clone() - x3.clone()) - y1.clone();
        Ok(CurvePoint::affine(x3, y3))
    }

    pub fn double(&self, p: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        self.add(p, p)
    }

    /// `n P` by double-and-add; negative `n` negates.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        let mut acc = CurvePoint::Infinity;
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base)?;
            }
        }
        Ok(acc)
    }

    /// Sum of a list of points.
    pub fn sum<'a>(&self, points: impl IntoIterator<Item = &'a CurvePoint<F>>) -> Result<CurvePoint<F>>
    where
        F: 'a,
    {
        points
            .into_iter()
            .try_fold(CurvePoint::Infinity, |acc, p| self.add(&acc, p))
    }

    /// The 3-division polynomial `3x^4 + 6Ax^2 + 12Bx - A^2`.
    pub fn psi3(&self) -> Poly<F> {
        let t = &self.a;
        Poly::new(vec![
            -self.a.square(),
            t.int_like(12) * self.b.clone(),
            t.int_like(6) * self.a.clone(),
            t.zero_like(),
            t.int_like(3),
        ])
    }
}

/// Reduction of a curve over `K` at a prime of good reduction.
pub fn reduce_curve(curve: &Curve<QuadElem>, prime: &PrimeIdeal) -> Result<Curve<ResidueElem>> {
    if prime.p == 2 {
        return Err(Error::InvalidInput("characteristic 2 is not supported".into()));
    }
    let a = reduce(&curve.a, prime)?;
    let b = reduce(&curve.b, prime)?;
    let reduced = Curve { a, b };
    if reduced.singular_part().is_zero() {
        return Err(Error::BadReduction(prime.p));
    }
    Ok(reduced)
}

/// Reduction of a curve over `Q` modulo an odd prime of good reduction.
pub fn reduce_curve_rational(curve: &Curve<BigRational>, p: u64) -> Result<Curve<ResidueElem>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let k = ResidueField::prime_field(p);
    let a = rational_mod(&curve.a, p).ok_or(Error::BadReduction(p))?;
    let b = rational_mod(&curve.b, p).ok_or(Error::BadReduction(p))?;
    let reduced = Curve {
        a: k.elem(a, 0),
        b: k.elem(b, 0),
    };
    if reduced.singular_part().is_zero() {
        return Err(Error::BadReduction(p));
    }
    Ok(reduced)
}

/// `#E(F_q)` including the point at infinity, by enumeration.
pub fn count_points(curve: &Curve<ResidueElem>) -> Result<u64> {
    let k = curve.a.field;
    let q = k.order();
    if q > POINT_COUNT_LIMIT {
        return Err(Error::Resource(format!(
            "field of size {q} exceeds the enumeration budget"
        )));
    }
    let squares = k.square_table();
    let mut n = 1u64;
    for x in k.elements() {
        let v = curve.rhs(&x);
        n += if v.is_zero() {
            1
        } else if squares[k.index(&v) as usize] {
            2
        } else {
            0
        };
    }
    let dev = (n as i128 - q as i128 - 1).unsigned_abs();
    if dev * dev > 4 * q as u128 {
        return Err(Error::Internal(format!(
            "count {n} violates the Hasse bound for q = {q}"
        )));
    }
    Ok(n)
}

/// Multiple of the order of every torsion point of `E(L)`, where `L` is the
/// field of `template`.
///
/// Uses the first `count` odd unramified primes of good reduction that have a
/// degree-one prime in `L`; reduction there is injective on torsion.
pub fn torsion_bound<L: Reducible>(curve: &Curve<QuadElem>, template: &L, count: usize) -> Result<u64> {
    torsion_bound_with_primes(curve, template, count).map(|(t, _)| t)
}

/// [`torsion_bound`] together with the primes of `K` it used.
pub fn torsion_bound_with_primes<L: Reducible>(
    curve: &Curve<QuadElem>,
    template: &L,
    count: usize,
) -> Result<(u64, Vec<PrimeIdeal>)> {
    if count == 0 {
        return Err(Error::Resource("torsion bound needs at least one prime".into()));
    }
    let field = curve.a.field();
    let mut t = 0u64;
    let mut used = Vec::new();
    for prime in unramified_primes(field, 3) {
        if prime.norm() > POINT_COUNT_LIMIT {
            break;
        }
        let Ok(reduced) = reduce_curve(curve, &prime) else {
            continue;
        };
        if L::degree_one_chain(template, &prime).is_none() {
            continue;
        }
        t = t.gcd(&count_points(&reduced)?);
        used.push(prime);
        if used.len() == count {
            return Ok((t, used));
        }
    }
    Err(Error::Resource(format!(
        "found only {} of {count} usable primes within the enumeration budget",
        used.len()
    )))
}

/// Same as [`torsion_bound`] for a curve over `Q` and points over `Q`.
pub fn torsion_bound_rational(curve: &Curve<BigRational>, count: usize) -> Result<u64> {
    if count == 0 {
        return Err(Error::Resource("torsion bound needs at least one prime".into()));
    }
    let mut t = 0u64;
    let mut used = 0;
    for p in (3..POINT_COUNT_LIMIT).filter(|&p| is_prime(p)) {
        let Ok(reduced) = reduce_curve_rational(curve, p) else {
            continue;
        };
        t = t.gcd(&count_points(&reduced)?);
        used += 1;
        if used == count {
            return Ok(t);
        }
    }
    Err(Error::Resource(format!("found only {used} of {count} usable primes")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;
    use crate::numfield::{primes_above, QuadFieldDesc};

    fn e01() -> Curve<BigRational> {
        Curve::new(int(0), int(1)).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let e = e01();
        let p = e.point(int(2), int(3)).unwrap();
        assert_eq!(e.add(&p, &p).unwrap(), CurvePoint::affine(int(0), int(1)));
        assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
        assert_eq!(e.scalar_mul(6, &p).unwrap(), CurvePoint::Infinity);
        for k in 1..6 {
            assert!(!e.scalar_mul(k, &p).unwrap().is_infinity());
        }
        assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.scalar_mul(-2, &p).unwrap(), e.neg(&e.scalar_mul(2, &p).unwrap()));
        assert!(Curve::new(int(-3), int(2)).is_err());
    }

    #[test]
    fn psi3_examples() {
        assert_eq!(e01().psi3(), Poly::new(vec![int(0), int(12), int(0), int(0), int(3)]));
        let e10 = Curve::new(int(1), int(0)).unwrap();
        assert_eq!(e10.psi3(), Poly::new(vec![int(-1), int(0), int(6), int(0), int(3)]));
        let roots = crate::rootfind::rational_roots(&e01().psi3());
        assert_eq!(roots, vec![int(0)]);
        let e = e01();
        let p = e.point(int(0), int(1)).unwrap();
        assert_eq!(e.double(&p).unwrap(), CurvePoint::affine(int(0), int(-1)));
        assert!(e.scalar_mul(3, &p).unwrap().is_infinity());
    }

    #[test]
    fn reduction_and_counts() {
        let k = QuadFieldDesc::eisenstein();
        let e = Curve::new(k.int(0), k.int(1)).unwrap();
        let p7 = primes_above(k, 7).unwrap()[0];
        let r = reduce_curve(&e, &p7).unwrap();
        assert_eq!(r.a.c0, 0);
        assert_eq!(r.b.c0, 1);
        assert_eq!(count_points(&r).unwrap(), 12);
        let p3 = primes_above(k, 3).unwrap()[0];
        assert_eq!(reduce_curve(&e, &p3), Err(Error::BadReduction(3)));
        assert_eq!(count_points(&reduce_curve_rational(&e01(), 5).unwrap()).unwrap(), 6);
        assert_eq!(count_points(&reduce_curve_rational(&e01(), 7).unwrap()).unwrap(), 12);
        let p5 = primes_above(k, 5).unwrap()[0];
        assert_eq!(count_points(&reduce_curve(&e, &p5).unwrap()).unwrap(), 36);
        assert!(reduce_curve_rational(&e01(), 2).is_err());
    }

    #[test]
    fn torsion_bounds() {
        assert_eq!(torsion_bound_rational(&e01(), 2).unwrap(), 6);
        let k = QuadFieldDesc::eisenstein();
        let e = Curve::new(k.int(0), k.int(1)).unwrap();
        assert_eq!(torsion_bound(&e, &k.one(), 2).unwrap(), 12);
        assert!(matches!(torsion_bound(&e, &k.one(), 0), Err(Error::Resource(_))));
        let p = e01().point(int(2), int(3)).unwrap();
        assert!(e01().scalar_mul(6, &p).unwrap().is_infinity());
    }
}
