//! Dense univariate polynomials over any [`Field`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Field;

/// Coefficients stored lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`, using `template` only for its field context.
    pub fn x(template: &F) -> Self {
        Poly::new(vec![template.zero_like(), template.one_like()])
    }

    /// `x - r`.
    pub fn linear(r: &F) -> Self {
        Poly::new(vec![-r.clone(), r.one_like()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`, `None` above the degree.
    pub fn coeff(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.lc()?.inv()?;
        Some(self.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * c.int_like(i as i64))
                .collect(),
        )
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Poly<G>, E> {
        Ok(Poly::new(self.coeffs.iter().map(f).collect::<Result<_, _>>()?))
    }

    /// Division with remainder; `None` if the divisor is zero or its leading
    /// coefficient is not invertible.
    pub fn divrem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.lc()?.inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let template = lc_inv.zero_like();
        let mut quot = vec![template; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lc_inv.clone();
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Option<Self> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Some(a)
        } else {
            a.monic()
        }
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s * self = g mod m`.
    pub fn gcd_with_cofactor(&self, m: &Self) -> Option<(Self, Self)> {
        let template = m.lc()?.clone();
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(template.one_like()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0 - q * s1.clone();
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let inv = r0.lc()?.inv()?;
        Some((r0.scale(&inv), s0.scale(&inv)))
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Option<Self> {
        let template = m.lc()?.clone();
        let mut base = self.rem(m)?;
        let mut acc = Poly::constant(template.one_like()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc * base.clone()).rem(m)?;
            }
            base = (base.clone() * base).rem(m)?;
            e >>= 1;
        }
        Some(acc)
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &Self) -> Option<F> {
        sylvester_resultant(self, self.degree()?, other, other.degree()?)
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`, with `f'` taken at
    /// its formal degree `n - 1` so that characteristic `p | n` is handled.
    pub fn discriminant(&self) -> Option<F> {
        let n = self.degree()?;
        let lc_inv = self.lc()?.inv()?;
        if n == 0 {
            return None;
        }
        let res = sylvester_resultant(self, n, &self.derivative(), n - 1)?;
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        Some(res * lc_inv.int_like(sign) * lc_inv)
    }

    /// Whether `gcd(f, f') = 1`.
    pub fn is_squarefree(&self) -> bool {
        match self.gcd(&self.derivative()) {
            Some(g) => g.degree() == Some(0),
            None => false,
        }
    }
}

/// Sylvester resultant of `f` and `g` viewed as polynomials of formal
/// degrees `m` and `n`.
fn sylvester_resultant<F: Field>(f: &Poly<F>, m: usize, g: &Poly<F>, n: usize) -> Option<F> {
    let template = f.lc()?.clone();
    if m == 0 && n == 0 {
        return Some(template.one_like());
    }
    let zero = template.zero_like();
    let coeff = |p: &Poly<F>, i: usize| p.coeff(i).cloned().unwrap_or_else(|| zero.clone());
    let size = m + n;
    let mut rows = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            rows[i][i + j] = coeff(f, m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            rows[n + i][i + j] = coeff(g, n - j);
        }
    }
    determinant(rows)
}

/// Determinant by Gaussian elimination with pivot search.
pub fn determinant<F: Field>(mut m: Vec<Vec<F>>) -> Option<F> {
    let n = m.len();
    let template = m.first()?.first()?.clone();
    let mut det = template.one_like();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col].inv().is_some());
        let Some(pr) = pivot else {
            // Over a field a column of non-units below the diagonal is all zero.
            if (col..n).all(|r| m[r][col].is_zero()) {
                return Some(template.zero_like());
            }
            return None;
        };
        if pr != col {
            m.swap(pr, col);
            det = -det;
        }
        let inv = m[col][col].inv()?;
        det = det * m[col][col].clone();
        for r in col + 1..n {
            let factor = m[r][col].clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (x, v) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = x.clone() - factor.clone() * v.clone();
            }
        }
    }
    Some(det)
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        let (mut long, short) = if self.coeffs.len() >= o.coeffs.len() {
            (self.coeffs, o.coeffs)
        } else {
            (o.coeffs, self.coeffs)
        };
        for (i, c) in short.into_iter().enumerate() {
            long[i] = long[i].clone() + c;
        }
        Poly::new(long)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        self + (-o)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let template = self.coeffs[0].zero_like();
        let mut out = vec![template; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}
