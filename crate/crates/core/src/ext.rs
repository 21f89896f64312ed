//! Quotient rings `F[x]/(m(x))`, towers of them, and ring automorphisms that
//! fix the bottom field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::numfield::QuadElem;
use crate::poly::Poly;

/// `F[x]/(m)` with `m` monic of degree at least 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtRing<F> {
    modulus: Poly<F>,
}

impl<F: Field> ExtRing<F> {
    pub fn new(modulus: Poly<F>) -> Result<Arc<Self>> {
        match modulus.degree() {
            None | Some(0) => Err(Error::InvalidInput("modulus must have positive degree".into())),
            Some(_) => {
                let modulus = modulus
                    .monic()
                    .ok_or_else(|| Error::NonInvertible("leading coefficient of modulus".into()))?;
                Ok(Arc::new(ExtRing { modulus }))
            }
        }
    }

    pub fn modulus(&self) -> &Poly<F> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("non-constant modulus")
    }

    fn template(&self) -> &F {
        self.modulus.lc().expect("non-zero modulus")
    }
}

/// Element of an [`ExtRing`], represented by its remainder modulo the modulus.
#[derive(Clone)]
pub struct ExtElem<F> {
    rep: Poly<F>,
    ring: Arc<ExtRing<F>>,
}

pub trait ExtRingExt<F> {
    fn gen(&self) -> ExtElem<F>;
    fn embed(&self, c: F) -> ExtElem<F>;
    fn elem(&self, rep: Poly<F>) -> ExtElem<F>;
    fn with_coeffs(&self, coeffs: Vec<F>) -> ExtElem<F>;
}

impl<F: Field> ExtRingExt<F> for Arc<ExtRing<F>> {
    /// The class of `x`.
    fn gen(&self) -> ExtElem<F> {
        self.elem(Poly::x(self.template()))
    }

    fn embed(&self, c: F) -> ExtElem<F> {
        ExtElem {
            rep: Poly::constant(c),
            ring: self.clone(),
        }
    }

    fn elem(&self, rep: Poly<F>) -> ExtElem<F> {
        let rep = rep.rem(&self.modulus).expect("monic modulus");
        ExtElem {
            rep,
            ring: self.clone(),
        }
    }

    fn with_coeffs(&self, coeffs: Vec<F>) -> ExtElem<F> {
        self.elem(Poly::new(coeffs))
    }
}

impl<F: Field> ExtElem<F> {
    pub fn ring(&self) -> &Arc<ExtRing<F>> {
        &self.ring
    }

    pub fn rep(&self) -> &Poly<F> {
        &self.rep
    }

    /// Coordinates in the power basis, padded to the ring degree.
    pub fn coords(&self) -> Vec<F> {
        let t = self.ring.template().zero_like();
        (0..self.ring.degree())
            .map(|i| self.rep.coeff(i).cloned().unwrap_or_else(|| t.clone()))
            .collect()
    }

    /// The element as a base-field value, when it lies in the base.
    pub fn as_base(&self) -> Option<F> {
        match self.rep.degree() {
            None => Some(self.ring.template().zero_like()),
            Some(0) => Some(self.rep.coeffs()[0].clone()),
            _ => None,
        }
    }

    /// Matrix of multiplication by `self` on the power basis (column j = self * x^j).
    pub fn mul_matrix(&self) -> Vec<Vec<F>> {
        let n = self.ring.degree();
        let x = self.ring.gen();
        let mut col = self.clone();
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            cols.push(col.coords());
            col = col * x.clone();
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    fn same_ring(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring
    }
}

impl<F: Field> PartialEq for ExtElem<F> {
    fn eq(&self, o: &Self) -> bool {
        self.same_ring(o) && self.rep == o.rep
    }
}

impl<F: Field> fmt::Debug for ExtElem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rep.coeffs())
    }
}

impl<F: Field> Add for ExtElem<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert!(self.same_ring(&o));
        ExtElem {
            rep: self.rep + o.rep,
            ring: self.ring,
        }
    }
}

impl<F: Field> Sub for ExtElem<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert!(self.same_ring(&o));
        ExtElem {
            rep: self.rep - o.rep,
            ring: self.ring,
        }
    }
}

impl<F: Field> Mul for ExtElem<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert!(self.same_ring(&o));
        let ring = self.ring;
        ring.elem(self.rep * o.rep)
    }
}

impl<F: Field> Neg for ExtElem<F> {
    type Output = Self;
    fn neg(self) -> Self {
        ExtElem {
            rep: -self.rep,
            ring: self.ring,
        }
    }
}

impl<F: Field> Field for ExtElem<F> {
    fn zero_like(&self) -> Self {
        ExtElem {
            rep: Poly::zero(),
            ring: self.ring.clone(),
        }
    }
    fn one_like(&self) -> Self {
        self.ring.embed(self.ring.template().one_like())
    }
    fn int_like(&self, n: i64) -> Self {
        self.ring.embed(self.ring.template().int_like(n))
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        let (g, s) = self.rep.gcd_with_cofactor(&self.ring.modulus)?;
        if g.degree() != Some(0) {
            return None;
        }
        Some(self.ring.elem(s))
    }
}

/// Ring automorphisms fixing the bottom field of a tower.
pub trait Conjugable: Field {
    type Hom: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn apply(&self, h: &Self::Hom) -> Self;
    /// The identity, built from the context carried by `self`.
    fn identity_hom(&self) -> Self::Hom;
    /// `f` after `g`.
    fn compose(f: &Self::Hom, g: &Self::Hom) -> Self::Hom;
}

impl Conjugable for QuadElem {
    type Hom = ();
    fn apply(&self, _: &()) -> Self {
        self.clone()
    }
    fn identity_hom(&self) {}
    fn compose(_: &(), _: &()) {}
}

impl Conjugable for BigRational {
    type Hom = ();
    fn apply(&self, _: &()) -> Self {
        self.clone()
    }
    fn identity_hom(&self) {}
    fn compose(_: &(), _: &()) {}
}

/// A homomorphism of `F[x]/(m)`: a map on `F` together with the image of `x`.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtHom<F: Conjugable> {
    pub base: F::Hom,
    pub image: ExtElem<F>,
}

impl<F: Conjugable> Conjugable for ExtElem<F> {
    type Hom = ExtHom<F>;

    fn apply(&self, h: &ExtHom<F>) -> Self {
        let ring = h.image.ring().clone();
        let mut acc = h.image.zero_like();
        for c in self.rep.coeffs().iter().rev() {
            acc = acc * h.image.clone() + ring.embed(c.apply(&h.base));
        }
        acc
    }

    fn identity_hom(&self) -> ExtHom<F> {
        ExtHom {
            base: self.ring.template().identity_hom(),
            image: self.ring.gen(),
        }
    }

    fn compose(f: &ExtHom<F>, g: &ExtHom<F>) -> ExtHom<F> {
        ExtHom {
            base: F::compose(&f.base, &g.base),
            image: g.image.apply(f),
        }
    }
}

/// Order of `h` in the automorphism group, up to `cap`.
pub fn hom_order<F: Conjugable>(template: &F, h: &F::Hom, cap: usize) -> Option<usize> {
    let id = template.identity_hom();
    let mut cur = h.clone();
    for k in 1..=cap {
        if cur == id {
            return Some(k);
        }
        cur = F::compose(h, &cur);
    }
    None
}

/// Whether `h` is a well-defined ring map: the image of `x` is a root of the
/// modulus with `h` applied to its coefficients.
pub fn is_valid_hom<F: Conjugable>(ring: &Arc<ExtRing<F>>, h: &ExtHom<F>) -> bool {
    let mapped = ring.modulus().map(|c| h.image.ring().embed(c.apply(&h.base)));
    mapped.eval(&h.image).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn cubic() -> Arc<ExtRing<BigRational>> {
        // x^3 - 3x - 1
        ExtRing::new(Poly::new(vec![int(-1), int(-3), int(0), int(1)])).unwrap()
    }

    #[test]
    fn conjugate_root_of_cyclic_cubic() {
        let l = cubic();
        let t = l.gen();
        let r = l.embed(int(2)) - t.clone() * t.clone();
        assert!(l.modulus().map(|c| l.embed(c.clone())).eval(&r).is_zero());
        let h = ExtHom { base: (), image: r };
        assert!(is_valid_hom(&l, &h));
        assert_eq!(hom_order(&t, &h, 6), Some(3));
    }

    #[test]
    fn inverse_in_field() {
        let l = cubic();
        let a = l.gen() + l.embed(int(5));
        let i = a.inv().unwrap();
        assert!((a * i).is_one());
    }

    #[test]
    fn zero_divisor_has_no_inverse() {
        // x^2 - 1 = (x - 1)(x + 1)
        let r = ExtRing::new(Poly::new(vec![int(-1), int(0), int(1)])).unwrap();
        let z = r.gen() - r.embed(int(1));
        assert!(z.inv().is_none());
    }
}
