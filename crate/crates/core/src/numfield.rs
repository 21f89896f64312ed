//! Exact arithmetic in imaginary quadratic fields `K = Q(sqrt d)`, their primes,
//! residue fields and the Chinese remainder theorem.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{parse_rational, rational_sqrt, rational_to_string, Field};

/// Descriptor of `K = Q(sqrt d)` with `d` squarefree and negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadFieldDesc {
    d: i64,
}

impl QuadFieldDesc {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidInput(format!(
                "d = {d} does not define a quadratic field"
            )));
        }
        if d > 0 {
            return Err(Error::InvalidInput(format!(
                "only imaginary quadratic fields are supported, got d = {d}"
            )));
        }
        let m = d.unsigned_abs();
        let mut f = 2u64;
        while f * f <= m {
            if m.is_multiple_of(f * f) {
                return Err(Error::InvalidInput(format!("d = {d} is not squarefree")));
            }
            f += 1;
        }
        Ok(QuadFieldDesc { d })
    }

    pub fn gaussian() -> Self {
        QuadFieldDesc { d: -1 }
    }

    pub fn eisenstein() -> Self {
        QuadFieldDesc { d: -3 }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn elem(&self, a: BigRational, b: BigRational) -> QuadElem {
        QuadElem { a, b, d: self.d }
    }

    pub fn rational(&self, a: BigRational) -> QuadElem {
        self.elem(a, BigRational::zero())
    }

    pub fn int(&self, n: i64) -> QuadElem {
        self.rational(BigRational::from_integer(n.into()))
    }

    pub fn zero(&self) -> QuadElem {
        self.int(0)
    }

    /// Parses `a`, `b*sqrt`, `a+b*sqrt` and the [`Display`](fmt::Display)
    /// form `a + b*sqrt(d)`, with `a`, `b` rationals like `-3/4`.
    pub fn parse_elem(&self, s: &str) -> Result<QuadElem> {
        let bad = || Error::InvalidInput(format!("cannot parse {s:?} as an element of Q(sqrt({}))", self.d));
        let mut text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let tagged = format!("sqrt({})", self.d);
        text = text.replace(&tagged, "sqrt");
        if text.is_empty() || text.contains("sqrt(") {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for i in 1..bytes.len() {
            if matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'*' | b'/') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let (mut a, mut b) = (BigRational::zero(), BigRational::zero());
        for term in terms {
            let body = term.trim_start_matches(['+', '-']);
            let negative = term[..term.len() - body.len()].matches('-').count() % 2 == 1;
            let (on_sqrt, coeff) = match body.strip_suffix("sqrt") {
                Some(c) => (true, c.strip_suffix('*').unwrap_or(c)),
                None => (false, body),
            };
            let mut value = if on_sqrt && coeff.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff).ok_or_else(bad)?
            };
            if negative {
                value = -value;
            }
            if on_sqrt {
                b += value;
            } else {
                a += value;
            }
        }
        Ok(self.elem(a, b))
    }

    pub fn one(&self) -> QuadElem {
        self.int(1)
    }

    pub fn sqrt_d(&self) -> QuadElem {
        self.elem(BigRational::zero(), BigRational::one())
    }

    /// Whether K contains a primitive n-th root of unity, n in {2,3,4,6}.
    pub fn has_roots_of_unity(&self, n: u32) -> bool {
        match n {
            1 | 2 => true,
            3 | 6 => self.d == -3,
            4 => self.d == -1,
            _ => false,
        }
    }
}

/// `a + b sqrt(d)` with exact rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
    d: i64,
}

impl QuadElem {
    pub fn field(&self) -> QuadFieldDesc {
        QuadFieldDesc { d: self.d }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// Exact square root in K, if one exists.
    ///
    /// Solves `x^2 + d y^2 = a`, `2xy = b` through the rational norm.
    pub fn sqrt(&self) -> Option<QuadElem> {
        let f = self.field();
        let dq = BigRational::from_integer(self.d.into());
        if self.is_zero_elem() {
            return Some(self.clone());
        }
        if Zero::is_zero(&self.b) {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(f.rational(r));
            }
            // a = d y^2
            return rational_sqrt(&(&self.a / &dq)).map(|y| f.elem(BigRational::zero(), y));
        }
        let n = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for s in [n.clone(), -n] {
            let x2 = (&self.a + &s) / &two;
            if let Some(x) = rational_sqrt(&x2) {
                if Zero::is_zero(&x) {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let z = f.elem(x, y);
                if z.clone() * z.clone() == *self {
                    return Some(z);
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    /// Least common denominator of both rational coordinates.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", rational_to_string(&self.a))
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt({})", rational_to_string(&self.b), self.d)
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                rational_to_string(&self.a),
                rational_to_string(&self.b),
                self.d
            )
        }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem {
            a: self.a + o.a,
            b: self.b + o.b,
            d: self.d,
        }
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem {
            a: self.a - o.a,
            b: self.b - o.b,
            d: self.d,
        }
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        let dq = BigRational::from_integer(self.d.into());
        QuadElem {
            a: &self.a * &o.a + dq * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Field for QuadElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field().int(n)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_elem()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let c = self.conj();
        Some(QuadElem {
            a: c.a / &n,
            b: c.b / &n,
            d: self.d,
        })
    }
}

// ---------------------------------------------------------------------------
// Rational primes and modular helpers.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Legendre symbol for odd prime `p`: 0, 1 or -1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks square root of a quadratic residue modulo an odd prime.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Reduces a rational modulo `p`; `None` when `p` divides the denominator.
pub fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

// ---------------------------------------------------------------------------
// Primes of O_K.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

/// A prime of `O_K` over an odd rational prime `p`.
///
/// For split and ramified primes `root` is the image of `sqrt d` in `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub kind: PrimeKind,
    pub root: Option<u64>,
    d: i64,
}

impl PrimeIdeal {
    pub fn d(&self) -> i64 {
        self.d
    }

    /// `q_P = |k_P|`.
    pub fn norm(&self) -> u64 {
        match self.kind {
            PrimeKind::Inert => self.p * self.p,
            _ => self.p,
        }
    }

    pub fn residue_field(&self) -> ResidueField {
        let dp = self.d.rem_euclid(self.p as i64) as u64;
        ResidueField {
            p: self.p,
            inert: self.kind == PrimeKind::Inert,
            d: dp,
        }
    }

    /// The prime with the given root (split) or the unique prime over `p`.
    pub fn with_root(d: i64, p: u64, root: Option<u64>) -> Result<Self> {
        let field = QuadFieldDesc::new(d)?;
        let primes = primes_above(field, p)?;
        match root {
            None => Ok(primes[0]),
            Some(r) => primes
                .into_iter()
                .find(|q| q.root == Some(r % p))
                .ok_or_else(|| Error::InvalidInput(format!("{r} is not a square root of {d} mod {p}"))),
        }
    }

    /// `"p"` for the unique prime over `p`, `"p/r"` for the split prime with `sqrt d = r`.
    pub fn label(&self) -> String {
        match (self.kind, self.root) {
            (PrimeKind::Split, Some(r)) => format!("{}/{}", self.p, r),
            _ => self.p.to_string(),
        }
    }

    /// Inverse of [`PrimeIdeal::label`].
    pub fn parse(d: i64, s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse prime {s:?}; expected p or p/root"));
        let (p, root) = match s.trim().split_once('/') {
            Some((p, r)) => (
                p.trim().parse().map_err(|_| bad())?,
                Some(r.trim().parse().map_err(|_| bad())?),
            ),
            None => (s.trim().parse().map_err(|_| bad())?, None),
        };
        Self::with_root(d, p, root)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.root) {
            (PrimeKind::Inert, _) => write!(f, "({}) inert", self.p),
            (k, Some(r)) => write!(f, "({}, sqrt({}) - {}) {:?}", self.p, self.d, r, k),
            (k, None) => write!(f, "({}) {:?}", self.p, k),
        }
    }
}

/// The primes of `O_K` above the odd rational prime `p`.
pub fn primes_above(field: QuadFieldDesc, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::InvalidInput(
            "residue fields of characteristic 2 are not supported".into(),
        ));
    }
    let d = field.d();
    let prime = |kind, root| PrimeIdeal { p, kind, root, d };
    Ok(match legendre(d, p) {
        0 => vec![prime(PrimeKind::Ramified, Some(0))],
        -1 => vec![prime(PrimeKind::Inert, None)],
        _ => {
            let r = sqrt_mod(d.rem_euclid(p as i64) as u64, p).expect("residue has a root");
            let (r1, r2) = if r < p - r { (r, p - r) } else { (p - r, r) };
            vec![prime(PrimeKind::Split, Some(r1)), prime(PrimeKind::Split, Some(r2))]
        }
    })
}

/// Odd primes of `O_K` unramified in K, in order of the rational prime below.
pub fn unramified_primes(field: QuadFieldDesc, start: u64) -> impl Iterator<Item = PrimeIdeal> {
    (start.max(3)..)
        .filter(|&p| is_prime(p))
        .flat_map(move |p| primes_above(field, p).expect("odd prime"))
        .filter(|q| q.kind != PrimeKind::Ramified)
}

// ---------------------------------------------------------------------------
// Residue fields.

/// `F_p`, or `F_p[s]/(s^2 - d)` for inert primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    pub p: u64,
    pub inert: bool,
    d: u64,
}

impl ResidueField {
    pub fn prime_field(p: u64) -> Self {
        ResidueField { p, inert: false, d: 0 }
    }

    pub fn order(&self) -> u64 {
        if self.inert {
            self.p * self.p
        } else {
            self.p
        }
    }

    pub fn elem(&self, c0: u64, c1: u64) -> ResidueElem {
        let c1 = if self.inert { c1 % self.p } else { 0 };
        ResidueElem {
            c0: c0 % self.p,
            c1,
            field: *self,
        }
    }

    pub fn int(&self, n: i64) -> ResidueElem {
        self.elem(n.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn zero(&self) -> ResidueElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> ResidueElem {
        self.elem(1, 0)
    }

    /// Element with index `i` in `0..order()`; a bijection used by enumerations.
    pub fn element(&self, i: u64) -> ResidueElem {
        self.elem(i % self.p, i / self.p)
    }

    pub fn index(&self, x: &ResidueElem) -> u64 {
        x.c0 + x.c1 * self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Table of `is_square` indexed by `index`.
    pub fn square_table(&self) -> Vec<bool> {
        let mut t = vec![false; self.order() as usize];
        for x in self.elements() {
            let s = x * x;
            t[self.index(&s) as usize] = true;
        }
        t
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElem {
    pub c0: u64,
    pub c1: u64,
    pub field: ResidueField,
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.inert {
            write!(f, "{}+{}s mod {}", self.c0, self.c1, self.field.p)
        } else {
            write!(f, "{} mod {}", self.c0, self.field.p)
        }
    }
}

impl Add for ResidueElem {
    type Output = ResidueElem;
    fn add(self, o: ResidueElem) -> ResidueElem {
        let p = self.field.p;
        ResidueElem {
            c0: (self.c0 + o.c0) % p,
            c1: (self.c1 + o.c1) % p,
            field: self.field,
        }
    }
}

impl Sub for ResidueElem {
    type Output = ResidueElem;
    fn sub(self, o: ResidueElem) -> ResidueElem {
        let p = self.field.p;
        ResidueElem {
            c0: (self.c0 + p - o.c0) % p,
            c1: (self.c1 + p - o.c1) % p,
            field: self.field,
        }
    }
}

impl Mul for ResidueElem {
    type Output = ResidueElem;
    fn mul(self, o: ResidueElem) -> ResidueElem {
        let p = self.field.p;
        if !self.field.inert {
            return ResidueElem {
                c0: mul_mod(self.c0, o.c0, p),
                c1: 0,
                field: self.field,
            };
        }
        let c0 = (mul_mod(self.c0, o.c0, p) + mul_mod(mul_mod(self.c1, o.c1, p), self.field.d, p)) % p;
        let c1 = (mul_mod(self.c0, o.c1, p) + mul_mod(self.c1, o.c0, p)) % p;
        ResidueElem {
            c0,
            c1,
            field: self.field,
        }
    }
}

impl Neg for ResidueElem {
    type Output = ResidueElem;
    fn neg(self) -> ResidueElem {
        let p = self.field.p;
        ResidueElem {
            c0: (p - self.c0) % p,
            c1: (p - self.c1) % p,
            field: self.field,
        }
    }
}

impl Field for ResidueElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field.int(n)
    }
    fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
    fn inv(&self) -> Option<Self> {
        let p = self.field.p;
        if self.is_zero() {
            return None;
        }
        if !self.field.inert {
            return Some(self.field.elem(pow_mod(self.c0, p - 2, p), 0));
        }
        let norm = (mul_mod(self.c0, self.c0, p) + p - mul_mod(mul_mod(self.c1, self.c1, p), self.field.d, p)) % p;
        let ni = pow_mod(norm, p - 2, p);
        Some(
            self.field
                .elem(mul_mod(self.c0, ni, p), mul_mod((p - self.c1) % p, ni, p)),
        )
    }
}

/// Reduction `O_{K,(P)} -> k_P`.
///
/// At a split prime an element can be integral at `P` while its coordinates
/// have `p` in their denominators (the inverse of an element of the conjugate
/// prime, say). Those are handled by multiplying with powers of
/// `sqrt d + r`, which is a unit at `P` and lies in the conjugate prime.
pub fn reduce(x: &QuadElem, prime: &PrimeIdeal) -> Result<ResidueElem> {
    if let Some(r) = reduce_coordinates(x, prime) {
        return Ok(r);
    }
    let (Some(root), PrimeKind::Split) = (prime.root, prime.kind) else {
        return Err(Error::BadReduction(prime.p));
    };
    let field = x.field();
    let unit = field.elem(BigRational::from_integer(root.into()), BigRational::one());
    let unit_r = reduce_coordinates(&unit, prime).expect("integral");
    let depth = p_valuation(x.a.denom(), prime.p).max(p_valuation(x.b.denom(), prime.p));
    let mut y = x.clone();
    let mut scale = unit_r.one_like();
    for _ in 0..depth {
        y = y * unit.clone();
        scale = scale * unit_r;
        if let Some(r) = reduce_coordinates(&y, prime) {
            return Ok(r * scale.inv().expect("unit at P"));
        }
    }
    Err(Error::BadReduction(prime.p))
}

fn reduce_coordinates(x: &QuadElem, prime: &PrimeIdeal) -> Option<ResidueElem> {
    let p = prime.p;
    let a = rational_mod(&x.a, p)?;
    let b = rational_mod(&x.b, p)?;
    let k = prime.residue_field();
    Some(match prime.root {
        Some(r) => k.elem((a + mul_mod(b, r, p)) % p, 0),
        None => k.elem(a, b),
    })
}

fn p_valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// Whether `x` is an n-th power in its residue field (0 counts).
pub fn is_nth_power_residue(x: &ResidueElem, n: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    let q1 = x.field.order() - 1;
    let g = n.gcd(&q1);
    x.pow(q1 / g).is_one()
}

/// Smallest non-negative solution of `x = r_i mod m_i` for pairwise coprime moduli.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in congruences {
        if !mi.is_positive() {
            return Err(Error::InvalidInput(format!("modulus {mi} is not positive")));
        }
        let g = m.extended_gcd(mi);
        if !g.gcd.is_one() {
            return Err(Error::InvalidInput(format!("moduli {m} and {mi} are not coprime")));
        }
        // x + m * t = r mod mi  =>  t = (r - x) * m^{-1} mod mi
        let t = ((r - &x) * &g.x).mod_floor(mi);
        x += &m * t;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn k3() -> QuadFieldDesc {
        QuadFieldDesc::eisenstein()
    }

    #[test]
    fn primes_above_examples() {
        let ps = primes_above(k3(), 7).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].root, Some(2));
        assert_eq!(ps[1].root, Some(5));
        assert!(ps.iter().all(|q| q.kind == PrimeKind::Split && q.norm() == 7));

        let ps = primes_above(k3(), 5).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].kind, PrimeKind::Inert);
        assert_eq!(ps[0].norm(), 25);

        let ps = primes_above(k3(), 3).unwrap();
        assert_eq!(ps[0].kind, PrimeKind::Ramified);

        assert!(matches!(primes_above(k3(), 9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inverses_of_conjugate_prime_elements_reduce() {
        let k = k3();
        // norm 3 * 79 / 4: a unit at one prime above 79, in the other
        let l = k.elem(rat(15, 2), rat(1, 1));
        let inv = l.inv().unwrap();
        for prime in primes_above(k, 79).unwrap() {
            let lr = reduce(&l, &prime).unwrap();
            match reduce(&inv, &prime) {
                Ok(ir) => assert!((lr * ir).is_one()),
                Err(Error::BadReduction(79)) => assert!(lr.is_zero()),
                Err(e) => panic!("{e}"),
            }
        }
        let inert = primes_above(k, 5).unwrap()[0];
        assert!(reduce(&k.rational(rat(1, 5)), &inert).is_err());
    }

    #[test]
    fn element_literals() {
        let k = k3();
        let cases = [
            ("3", k.int(3)),
            ("-1/2", k.rational(rat(-1, 2))),
            ("1/2+3*sqrt", k.elem(rat(1, 2), rat(3, 1))),
            ("-sqrt", k.elem(rat(0, 1), rat(-1, 1))),
            ("2 - 2/3*sqrt", k.elem(rat(2, 1), rat(-2, 3))),
            ("15/2 + -1*sqrt(-3)", k.elem(rat(15, 2), rat(-1, 1))),
        ];
        for (text, want) in cases {
            assert_eq!(k.parse_elem(text).unwrap(), want, "{text}");
        }
        let x = k.elem(rat(-7, 3), rat(5, 2));
        assert_eq!(k.parse_elem(&x.to_string()).unwrap(), x);
        for bad in ["", "1+", "x", "1/0", "sqrt(-1)", "2**sqrt"] {
            assert!(k.parse_elem(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn reduce_examples() {
        let p7 = primes_above(k3(), 7).unwrap()[0];
        assert_eq!(reduce(&k3().sqrt_d(), &p7).unwrap(), p7.residue_field().int(2));
        assert_eq!(reduce(&k3().one(), &p7).unwrap(), p7.residue_field().one());
        assert_eq!(reduce(&k3().rational(rat(1, 7)), &p7), Err(Error::BadReduction(7)));
    }

    #[test]
    fn nth_power_examples() {
        let f7 = ResidueField::prime_field(7);
        assert!(is_nth_power_residue(&f7.int(2), 2));
        assert!(!is_nth_power_residue(&f7.int(2), 3));
        assert!(is_nth_power_residue(&f7.zero(), 3));
        assert!(is_nth_power_residue(&f7.zero(), 2));
    }

    #[test]
    fn crt_examples() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(crt(&[(b(1), b(7)), (b(2), b(11))]).unwrap(), b(57));
        assert_eq!(crt(&[(b(0), b(7))]).unwrap(), b(0));
        assert!(matches!(
            crt(&[(b(1), b(6)), (b(1), b(4))]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn power_residue_counts_small_primes() {
        for p in (3..100u64).filter(|&p| is_prime(p)) {
            let f = ResidueField::prime_field(p);
            let squares = (1..p).filter(|&x| is_nth_power_residue(&f.int(x as i64), 2)).count() as u64;
            assert_eq!(squares, (p - 1) / 2, "p = {p}");
            if p % 3 == 1 {
                let cubes = (1..p).filter(|&x| is_nth_power_residue(&f.int(x as i64), 3)).count() as u64;
                assert_eq!(cubes, (p - 1) / 3, "p = {p}");
            }
        }
    }

    #[test]
    fn inert_residue_field_is_a_field() {
        let q5 = primes_above(k3(), 5).unwrap()[0];
        let k = q5.residue_field();
        assert_eq!(k.order(), 25);
        for x in k.elements().skip(1) {
            assert!((x * x.inv().unwrap()).is_one());
        }
        let squares = k.elements().skip(1).filter(|x| is_nth_power_residue(x, 2)).count();
        assert_eq!(squares, 12);
    }

    #[test]
    fn quad_sqrt() {
        let k = k3();
        let x = k.elem(rat(1, 2), rat(3, 1));
        assert_eq!(
            x.clone() * x.clone(),
            (x.clone() * x.clone()).sqrt().map(|r| r.clone() * r).unwrap()
        );
        assert!(!k.int(28).is_square());
        assert!(!k.int(2).is_square());
        assert_eq!(k.int(-3).sqrt().map(|r| r.clone() * r), Some(k.int(-3)));
        let g = QuadFieldDesc::gaussian();
        assert!(!g.rational(rat(-5, 3)).is_square());
        assert!(g.rational(rat(-100, 81)).is_square());
    }

    #[test]
    fn field_descriptor_validation() {
        assert!(QuadFieldDesc::new(-4).is_err());
        assert!(QuadFieldDesc::new(0).is_err());
        assert!(QuadFieldDesc::new(1).is_err());
        assert!(QuadFieldDesc::new(-7).is_ok());
    }
}
