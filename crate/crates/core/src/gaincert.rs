//! Cyclic extensions `L/K` of degree `n`, points of `E(L)` built from a
//! parameter, and certificates that `E` gains rank over `L`.
//!
//! The Galois group is found constructively: every embedding of the tower
//! into itself is enumerated by root search, and one of exact order `n` is
//! kept. A point whose `n` conjugates are distinct, sum to `O`, and which is
//! not torsion witnesses the rank gain.

use std::thread;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elliptic::{count_points, reduce_curve, torsion_bound_with_primes, Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::ext::{hom_order, is_valid_hom, Conjugable, ExtElem, ExtHom, ExtRing, ExtRingExt};
use crate::families::{lift_discriminant, lift_is_rational, quartic_point, LiftParam};
use crate::field::{parse_rational, Field};
use crate::numfield::{primes_above, unramified_primes, PrimeIdeal, PrimeKind, QuadElem, QuadFieldDesc};
use crate::polyalg::{adjoin_sqrt, is_irreducible_over_k, ExactField, SqrtAdjoined};
use crate::reduction::Reducible;
use crate::search::{candidate_params, check_admissible, param_poly, Behavior, SplitConstraint};

pub const CERT_VERSION: &str = "rankgain-cert/1";

/// Number of primes feeding the torsion bound.
pub const DEFAULT_TORSION_PRIMES: usize = 2;

/// Primes tried when looking for a reduction that shows `T P != O`.
const WITNESS_PRIMES: usize = 64;

/// `K[x]/(m)`.
pub type Level1 = ExtElem<QuadElem>;
/// `K[x]/(m1)[s]/(m2)`.
pub type Level2 = ExtElem<Level1>;

/// The field `K` has to be for each degree; `None` means any.
pub fn required_d(n: u32) -> Option<i64> {
    match n {
        3 | 6 => Some(-3),
        4 => Some(-1),
        _ => None,
    }
}

fn check_field(curve: &Curve<QuadElem>, n: u32) -> Result<()> {
    if !matches!(n, 2 | 3 | 4 | 6) {
        return Err(Error::InvalidInput(format!("n must be one of 2, 3, 4, 6; got {n}")));
    }
    match required_d(n) {
        Some(d) if curve.a.d() != d => Err(Error::InvalidInput(format!("n={n} requires d={d}"))),
        _ => Ok(()),
    }
}

fn frac(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn malformed(what: impl Into<String>) -> Error {
    Error::Malformed(what.into())
}

pub fn quad_to_json(x: &QuadElem) -> Value {
    json!({ "a": frac(&x.a), "b": frac(&x.b) })
}

pub fn quad_from_json(field: QuadFieldDesc, v: &Value) -> Result<QuadElem> {
    let part = |k: &str| {
        v.get(k)
            .and_then(Value::as_str)
            .and_then(parse_rational)
            .ok_or_else(|| malformed(format!("expected rational string at {k:?} in {v}")))
    };
    Ok(field.elem(part("a")?, part("b")?))
}

/// Fields in a tower over `K` that the certificate machinery can build,
/// serialize and reduce.
pub trait TowerElem: ExactField + Conjugable + Reducible + Send + Sync {
    fn from_k(template: &Self, c: &QuadElem) -> Self;
    /// `[L : K]`.
    fn tower_degree(template: &Self) -> usize;
    /// Moduli of every level, bottom first.
    fn moduli_json(template: &Self) -> Vec<Value>;
    fn to_json(&self) -> Value;
    fn from_json(template: &Self, v: &Value) -> Result<Self>;
    /// Image of every level's generator, bottom first.
    fn hom_to_json(h: &Self::Hom) -> Vec<Value>;
    fn hom_from_json(template: &Self, v: &[Value]) -> Result<Self::Hom>;
    /// Whether `h` is a well-defined endomorphism of the whole tower over `K`.
    fn hom_is_valid(template: &Self, h: &Self::Hom) -> bool;
    /// Every endomorphism of the tower over `K`, found by root search.
    fn all_homs(template: &Self) -> Vec<Self::Hom>;
}

impl TowerElem for QuadElem {
    fn from_k(_: &Self, c: &QuadElem) -> Self {
        c.clone()
    }
    fn tower_degree(_: &Self) -> usize {
        1
    }
    fn moduli_json(_: &Self) -> Vec<Value> {
        Vec::new()
    }
    fn to_json(&self) -> Value {
        quad_to_json(self)
    }
    fn from_json(template: &Self, v: &Value) -> Result<Self> {
        quad_from_json(template.field(), v)
    }
    fn hom_to_json(_: &()) -> Vec<Value> {
        Vec::new()
    }
    fn hom_from_json(_: &Self, v: &[Value]) -> Result<()> {
        if v.is_empty() {
            Ok(())
        } else {
            Err(malformed("automorphism has more levels than the tower"))
        }
    }
    fn hom_is_valid(_: &Self, _: &()) -> bool {
        true
    }
    fn all_homs(_: &Self) -> Vec<()> {
        vec![()]
    }
}

fn base_template<F: Field>(t: &ExtElem<F>) -> F {
    t.ring().modulus().lc().expect("non-zero modulus").clone()
}

impl<F: TowerElem> TowerElem for ExtElem<F> {
    fn from_k(template: &Self, c: &QuadElem) -> Self {
        template.ring().embed(F::from_k(&base_template(template), c))
    }

    fn tower_degree(template: &Self) -> usize {
        template.ring().degree() * F::tower_degree(&base_template(template))
    }

    fn moduli_json(template: &Self) -> Vec<Value> {
        let mut out = F::moduli_json(&base_template(template));
        out.push(Value::Array(
            template.ring().modulus().coeffs().iter().map(F::to_json).collect(),
        ));
        out
    }

    fn to_json(&self) -> Value {
        Value::Array(self.coords().iter().map(F::to_json).collect())
    }

    fn from_json(template: &Self, v: &Value) -> Result<Self> {
        let ring = template.ring();
        let arr = v
            .as_array()
            .ok_or_else(|| malformed(format!("expected coordinate array, got {v}")))?;
        if arr.len() != ring.degree() {
            return Err(malformed(format!(
                "expected {} coordinates, got {}",
                ring.degree(),
                arr.len()
            )));
        }
        let bt = base_template(template);
        let coords = arr.iter().map(|c| F::from_json(&bt, c)).collect::<Result<Vec<_>>>()?;
        Ok(ring.with_coeffs(coords))
    }

    fn hom_to_json(h: &ExtHom<F>) -> Vec<Value> {
        let mut out = F::hom_to_json(&h.base);
        out.push(h.image.to_json());
        out
    }

    fn hom_from_json(template: &Self, v: &[Value]) -> Result<ExtHom<F>> {
        let (last, rest) = v
            .split_last()
            .ok_or_else(|| malformed("automorphism has fewer levels than the tower"))?;
        Ok(ExtHom {
            base: F::hom_from_json(&base_template(template), rest)?,
            image: Self::from_json(template, last)?,
        })
    }

    fn hom_is_valid(template: &Self, h: &ExtHom<F>) -> bool {
        F::hom_is_valid(&base_template(template), &h.base)
            && h.image.ring().modulus() == template.ring().modulus()
            && is_valid_hom(template.ring(), h)
    }

    fn all_homs(template: &Self) -> Vec<ExtHom<F>> {
        let ring = template.ring();
        let mut out = Vec::new();
        for base in F::all_homs(&base_template(template)) {
            let mapped = ring.modulus().map(|c| ring.embed(c.apply(&base)));
            for image in Self::roots(&mapped) {
                out.push(ExtHom {
                    base: base.clone(),
                    image,
                });
            }
        }
        out
    }
}

fn point_to_json<L: TowerElem>(p: &CurvePoint<L>) -> Value {
    match p {
        CurvePoint::Infinity => Value::String("infinity".into()),
        CurvePoint::Affine { x, y } => json!({ "x": x.to_json(), "y": y.to_json() }),
    }
}

fn point_from_json<L: TowerElem>(template: &L, v: &Value) -> Result<CurvePoint<L>> {
    if v.as_str() == Some("infinity") {
        return Ok(CurvePoint::Infinity);
    }
    let coord = |k: &str| {
        L::from_json(
            template,
            v.get(k).ok_or_else(|| malformed(format!("point lacks {k:?}")))?,
        )
    };
    Ok(CurvePoint::affine(coord("x")?, coord("y")?))
}

/// A cyclic extension of `K` of degree `n` with a generator of its Galois group.
#[derive(Clone, Debug)]
pub struct CyclicExtension<L: Conjugable> {
    pub n: u32,
    /// Generator of the top level; its ring carries the whole tower.
    pub generator: L,
    pub automorphism: L::Hom,
}

impl<L: TowerElem> CyclicExtension<L> {
    pub fn degree(&self) -> usize {
        L::tower_degree(&self.generator)
    }

    /// `x, s(x), ..., s^(n-1)(x)` for the stored automorphism `s`.
    pub fn conjugates(&self, x: &L) -> Vec<L> {
        let mut out = vec![x.clone()];
        for _ in 1..self.n {
            let next = out.last().expect("non-empty").apply(&self.automorphism);
            out.push(next);
        }
        out
    }

    pub fn embed(&self, c: &QuadElem) -> L {
        L::from_k(&self.generator, c)
    }

    pub fn curve(&self, curve: &Curve<QuadElem>) -> Curve<L> {
        curve.map(|c| self.embed(c))
    }

    pub fn order_is_exact(&self) -> bool {
        L::hom_is_valid(&self.generator, &self.automorphism)
            && hom_order(&self.generator, &self.automorphism, self.n as usize) == Some(self.n as usize)
    }
}

/// A point of `E(L)` together with its extension.
#[derive(Clone, Debug)]
pub struct ExtPoint<L: Conjugable> {
    pub extension: CyclicExtension<L>,
    pub curve: Curve<L>,
    pub point: CurvePoint<L>,
    /// For `n = 4`, the second point of the pair, and the sign applied to the
    /// square root of `Omega` to obtain it.
    pub partner: Option<(CurvePoint<L>, i8)>,
}

impl<L: TowerElem> ExtPoint<L> {
    /// `P, s(P), ..., s^(n-1)(P)`.
    pub fn conjugates(&self) -> Vec<CurvePoint<L>> {
        let mut out = vec![self.point.clone()];
        for _ in 1..self.extension.n {
            let next = out
                .last()
                .expect("non-empty")
                .map(|c| c.apply(&self.extension.automorphism));
            out.push(next);
        }
        out
    }

    /// For `n = 4`: the partner or its negative is a conjugate of the point.
    pub fn partner_in_orbit(&self) -> bool {
        let Some((q, _)) = &self.partner else { return true };
        let minus_q = self.curve.neg(q);
        self.curve.contains(q) && self.conjugates().iter().any(|c| c == q || *c == minus_q)
    }
}

/// Top generator of the tower for one degree.
#[derive(Clone, Debug)]
pub enum Tower {
    Single(Level1),
    Double(Level2),
}

/// Builds the tower for `(E, n, param)` without searching for automorphisms.
/// Fails with [`Error::NotIrreducible`] when `L` would not be a field of degree `n`.
pub fn build_tower(curve: &Curve<QuadElem>, n: u32, param: &QuadElem) -> Result<Tower> {
    check_field(curve, n)?;
    check_admissible(curve, n, param)?;
    match n {
        2 | 3 => {
            let f = param_poly(curve, n, param)?;
            if !is_irreducible_over_k(&f)? {
                return Err(Error::NotIrreducible);
            }
            Ok(Tower::Single(ExtRing::new(f)?.gen()))
        }
        4 => {
            let q = param_poly(curve, 4, param)?;
            if !is_irreducible_over_k(&q)? {
                return Err(Error::NotIrreducible);
            }
            let inner = ExtRing::new(q)?;
            let x = inner.gen();
            let fx = curve.map(|c| inner.embed(c.clone())).rhs(&x);
            match adjoin_sqrt(&fx)? {
                SqrtAdjoined::InPlace(_) => Err(Error::NotIrreducible),
                SqrtAdjoined::Tower(_, s) => Ok(Tower::Double(s)),
            }
        }
        _ => {
            let cubic = param_poly(curve, 6, param)?;
            if !is_irreducible_over_k(&cubic)? {
                return Err(Error::NotIrreducible);
            }
            let inner = ExtRing::new(cubic)?;
            match adjoin_sqrt(&inner.embed(param.clone()))? {
                SqrtAdjoined::InPlace(_) => Err(Error::NotIrreducible),
                SqrtAdjoined::Tower(_, s) => Ok(Tower::Double(s)),
            }
        }
    }
}

/// An automorphism of exact order `n`, found among all embeddings of the tower.
pub fn cyclic_generator<L: TowerElem>(template: &L, n: u32) -> Result<L::Hom> {
    let homs = L::all_homs(template);
    if homs.len() < n as usize {
        return Err(Error::NotGalois {
            found: homs.len(),
            expected: n as usize,
        });
    }
    homs.into_iter()
        .find(|h| hom_order(template, h, n as usize) == Some(n as usize))
        .ok_or(Error::NotCyclic(n as usize))
}

/// A cyclic extension of either tower height.
#[derive(Clone, Debug)]
pub enum AnyExtension {
    Single(CyclicExtension<Level1>),
    Double(CyclicExtension<Level2>),
}

/// A point over either tower height.
#[derive(Clone, Debug)]
pub enum AnyPoint {
    Single(ExtPoint<Level1>),
    Double(ExtPoint<Level2>),
}

pub fn build_extension(curve: &Curve<QuadElem>, n: u32, param: &QuadElem) -> Result<AnyExtension> {
    Ok(match build_tower(curve, n, param)? {
        Tower::Single(g) => AnyExtension::Single(CyclicExtension {
            n,
            automorphism: cyclic_generator(&g, n)?,
            generator: g,
        }),
        Tower::Double(g) => AnyExtension::Double(CyclicExtension {
            n,
            automorphism: cyclic_generator(&g, n)?,
            generator: g,
        }),
    })
}

/// The point of `E(L)` attached to the parameter:
///
/// * `n = 2`: `(l, y)` with `y^2 = l^3 + A l + B`
/// * `n = 3`: `(t, -(a t + c)/b)` on the line `[a : b : c]` at `l`, `t` a root of its cubic
/// * `n = 4`: `(x, s)` with `x` a root of `x^2 - u x + v` and `s^2 = f(x)`
/// * `n = 6`: as `n = 3` at `l = sqrt(w)`
pub fn build_point(curve: &Curve<QuadElem>, n: u32, param: &QuadElem, ext: &AnyExtension) -> Result<AnyPoint> {
    match (n, ext) {
        (2 | 3, AnyExtension::Single(e)) if e.n == n => {
            let t = e.generator.clone();
            let (x, y) = if n == 2 {
                (e.embed(param), t)
            } else {
                let line = quartic_point(curve, param)?;
                let (a, b, c) = (e.embed(&line.a), e.embed(&line.b), e.embed(&line.c));
                let y = -(a * t.clone() + c)
                    .div(&b)
                    .ok_or_else(|| Error::Internal("line is vertical".into()))?;
                (t, y)
            };
            let curve_l = e.curve(curve);
            let point = curve_l.point(x, y)?;
            Ok(AnyPoint::Single(ExtPoint {
                extension: e.clone(),
                curve: curve_l,
                point,
                partner: None,
            }))
        }
        (4, AnyExtension::Double(e)) if e.n == 4 => build_point_4(curve, param, e).map(AnyPoint::Double),
        (6, AnyExtension::Double(e)) if e.n == 6 => {
            let s = e.generator.clone();
            let theta = s.ring().embed(base_template(&s).ring().gen());
            let k = |m: i64| e.embed(&param.int_like(m));
            let w = e.embed(param);
            let a_coef = e.embed(&curve.a);
            let num = k(6) * w.clone() * theta.clone() + k(3) * a_coef * w.square() - k(1);
            let den = k(6) * w * s;
            let y = -num
                .div(&den)
                .ok_or_else(|| Error::Internal("6 w sqrt(w) is not invertible".into()))?;
            let curve_l = e.curve(curve);
            let point = curve_l.point(theta, y)?;
            Ok(AnyPoint::Double(ExtPoint {
                extension: e.clone(),
                curve: curve_l,
                point,
                partner: None,
            }))
        }
        _ => Err(Error::InvalidInput(format!("extension was not built for n={n}"))),
    }
}

fn build_point_4(curve: &Curve<QuadElem>, lambda: &QuadElem, e: &CyclicExtension<Level2>) -> Result<ExtPoint<Level2>> {
    let omega0 = lift_is_rational(curve, &LiftParam::new(4, lambda.clone())?)?
        .ok_or_else(|| Error::Internal("Omega is not a square in K".into()))?;
    let s = e.generator.clone();
    let x = s.ring().embed(base_template(&s).ring().gen());
    let curve_l = e.curve(curve);
    let point = curve_l.point(x.clone(), s.clone())?;
    let xq = e.embed(lambda) - x.clone();
    let denom = s * (x - xq.clone());
    for sign in [1i8, -1] {
        let w = e.embed(&omega0) * e.embed(&lambda.int_like(sign as i64));
        let yq = w
            .div(&denom)
            .ok_or_else(|| Error::Internal("partner ordinate is undefined".into()))?;
        let q = CurvePoint::affine(xq.clone(), yq);
        if curve_l.contains(&q) {
            return Ok(ExtPoint {
                extension: e.clone(),
                curve: curve_l,
                point,
                partner: Some((q, sign)),
            });
        }
    }
    Err(Error::Internal(
        "neither sign of the Omega witness puts the partner on the curve".into(),
    ))
}

/// Outcome of [`conjugate_sum_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCheck {
    /// The `n` conjugates are pairwise distinct.
    pub transitive: bool,
    pub sum_is_zero: bool,
}

pub fn conjugate_sum_check<L: TowerElem>(pt: &ExtPoint<L>) -> Result<OrbitCheck> {
    let conj = pt.conjugates();
    let transitive = conj.iter().enumerate().all(|(i, p)| conj[..i].iter().all(|q| q != p));
    let sum = pt
        .curve
        .sum(conj.iter())
        .map_err(|e| Error::Internal(format!("summing conjugates: {e}")))?;
    Ok(OrbitCheck {
        transitive,
        sum_is_zero: sum.is_infinity(),
    })
}

/// Outcome of [`non_torsion_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCheck {
    pub non_torsion: bool,
    /// Multiple of the order of every torsion point of `E(L)`.
    pub bound: u64,
    pub primes: Vec<PrimeIdeal>,
    /// A prime where the reduction of `bound * P` is not `O`. `None` when the
    /// verdict came from exact multiplication.
    pub witness: Option<PrimeIdeal>,
}

/// `bound * P != O` after reduction at a degree-one prime of `L` above `prime`.
fn reduction_witnesses<L: TowerElem>(
    curve: &Curve<QuadElem>,
    point: &CurvePoint<L>,
    template: &L,
    bound: u64,
    prime: &PrimeIdeal,
) -> bool {
    let Some((x, y)) = point.coords() else { return false };
    let Ok(reduced) = reduce_curve(curve, prime) else {
        return false;
    };
    let Some(chain) = L::degree_one_chain(template, prime) else {
        return false;
    };
    let (Some(xr), Some(yr)) = (x.reduce_at(&chain), y.reduce_at(&chain)) else {
        return false;
    };
    let pr = CurvePoint::affine(xr, yr);
    if !reduced.contains(&pr) {
        return false;
    }
    match i64::try_from(bound).ok().map(|b| reduced.scalar_mul(b, &pr)) {
        Some(Ok(q)) => !q.is_infinity(),
        _ => false,
    }
}

/// Whether `P` has infinite order, decided against the torsion bound from
/// `count` primes. A reduction witness settles it when one exists among the
/// first few usable primes; otherwise `bound * P` is computed exactly.
pub fn non_torsion_check<L: TowerElem>(
    curve: &Curve<QuadElem>,
    point: &CurvePoint<L>,
    template: &L,
    count: usize,
) -> Result<TorsionCheck> {
    let (bound, primes) = torsion_bound_with_primes(curve, template, count)?;
    if point.is_infinity() {
        return Ok(TorsionCheck {
            non_torsion: false,
            bound,
            primes,
            witness: None,
        });
    }
    let witness = unramified_primes(curve.a.field(), 3)
        .take(WITNESS_PRIMES)
        .find(|prime| reduction_witnesses(curve, point, template, bound, prime));
    if witness.is_some() {
        return Ok(TorsionCheck {
            non_torsion: true,
            bound,
            primes,
            witness,
        });
    }
    let non_torsion = !exact_multiple_is_zero(curve, point, template, bound)?;
    Ok(TorsionCheck {
        non_torsion,
        bound,
        primes,
        witness: None,
    })
}

fn exact_multiple_is_zero<L: TowerElem>(
    curve: &Curve<QuadElem>,
    point: &CurvePoint<L>,
    template: &L,
    bound: u64,
) -> Result<bool> {
    let curve_l = curve.map(|c| L::from_k(template, c));
    let m = i64::try_from(bound).map_err(|_| Error::Resource(format!("torsion bound {bound} too large")))?;
    Ok(curve_l.scalar_mul(m, point)?.is_infinity())
}

/// Gcd of `#E(k_P)` over the given primes, each of which must be of good
/// reduction with a degree-one prime above it in `L`.
fn torsion_bound_from_primes<L: TowerElem>(
    curve: &Curve<QuadElem>,
    template: &L,
    primes: &[PrimeIdeal],
) -> Result<u64> {
    if primes.is_empty() {
        return Err(malformed("no torsion primes recorded"));
    }
    let mut t = 0u64;
    for prime in primes {
        let reduced = reduce_curve(curve, prime)?;
        if L::degree_one_chain(template, prime).is_none() {
            return Err(malformed(format!(
                "prime {} has no degree-one prime above it in L",
                prime.label()
            )));
        }
        t = num_integer::gcd(t, count_points(&reduced)?);
    }
    Ok(t)
}

/// Outcome of each certification stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub lift_rational: bool,
    pub irreducible: bool,
    pub degree_ok: bool,
    pub cyclic_ok: bool,
    pub on_curve: bool,
    /// For `n = 4`: the partner point lies in the orbit of `±P`.
    pub partner_ok: bool,
    pub transitive_ok: bool,
    pub conjugate_sum_zero: bool,
    pub non_torsion: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.first_failure().is_none()
    }

    /// Name of the first stage that did not pass.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.lift_rational, "lift_rational"),
            (self.irreducible, "irreducible"),
            (self.degree_ok, "degree_ok"),
            (self.cyclic_ok, "cyclic_ok"),
            (self.on_curve, "on_curve"),
            (self.partner_ok, "partner_ok"),
            (self.transitive_ok, "transitive_ok"),
            (self.conjugate_sum_zero, "conjugate_sum_zero"),
            (self.non_torsion, "non_torsion"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

/// Serialized chain of witnesses that `E` gains rank over a cyclic extension.
///
/// Field elements are `{"a": "n/d", "b": "n/d"}` for `a + b sqrt d`; tower
/// elements are arrays of their coordinates in the power basis. Primes are
/// labelled `p` or `p/r` as in [`PrimeIdeal::label`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankGainCertificate {
    pub version: String,
    pub field_d: i64,
    #[serde(rename = "A")]
    pub a: Value,
    #[serde(rename = "B")]
    pub b: Value,
    pub n: u32,
    /// `lambda`, or `omega_param` for `n = 6`.
    pub param_name: String,
    pub param: Value,
    /// Square root in `K` of the lift discriminant (`n = 3, 4, 6`).
    pub lift_witness: Option<Value>,
    /// Sign applied to `lift_witness` to reach the partner point (`n = 4`).
    pub witness_sign: Option<i8>,
    /// Monic moduli of the tower, bottom first.
    pub tower: Vec<Value>,
    /// Images of the tower generators under the Galois generator, bottom first.
    pub automorphism: Vec<Value>,
    pub point: Option<Value>,
    pub partner: Option<Value>,
    pub torsion_bound: Option<u64>,
    pub torsion_primes: Vec<String>,
    pub non_torsion_witness: Option<String>,
    pub verdicts: Verdicts,
    pub failure: Option<String>,
}

impl RankGainCertificate {
    fn skeleton(curve: &Curve<QuadElem>, n: u32, param: &QuadElem) -> Self {
        RankGainCertificate {
            version: CERT_VERSION.into(),
            field_d: curve.a.d(),
            a: quad_to_json(&curve.a),
            b: quad_to_json(&curve.b),
            n,
            param_name: param_name(n).into(),
            param: quad_to_json(param),
            lift_witness: None,
            witness_sign: None,
            tower: Vec::new(),
            automorphism: Vec::new(),
            point: None,
            partner: None,
            torsion_bound: None,
            torsion_primes: Vec::new(),
            non_torsion_witness: None,
            verdicts: Verdicts::default(),
            failure: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.failure.is_none() && self.verdicts.all()
    }

    pub fn field(&self) -> Result<QuadFieldDesc> {
        QuadFieldDesc::new(self.field_d)
    }

    pub fn curve(&self) -> Result<Curve<QuadElem>> {
        let k = self.field()?;
        Curve::new(quad_from_json(k, &self.a)?, quad_from_json(k, &self.b)?)
    }

    pub fn param_value(&self) -> Result<QuadElem> {
        quad_from_json(self.field()?, &self.param)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| malformed(e.to_string()))
    }
}

fn param_name(n: u32) -> &'static str {
    if n == 6 {
        "omega_param"
    } else {
        "lambda"
    }
}

fn fail(mut cert: RankGainCertificate, reason: impl Into<String>) -> RankGainCertificate {
    cert.failure = Some(reason.into());
    cert
}

/// Runs every stage for `(E, n, param)` and records the outcome. Stage
/// failures land in the certificate; only unusable input is an error.
pub fn make_certificate(curve: &Curve<QuadElem>, n: u32, param: &QuadElem) -> Result<RankGainCertificate> {
    check_field(curve, n)?;
    check_admissible(curve, n, param)?;
    let mut cert = RankGainCertificate::skeleton(curve, n, param);

    if n == 2 {
        cert.verdicts.lift_rational = true;
    } else {
        match lift_is_rational(curve, &LiftParam::new(n, param.clone())?)? {
            Some(w) => {
                cert.lift_witness = Some(quad_to_json(&w));
                cert.verdicts.lift_rational = true;
            }
            None => return Ok(fail(cert, "lift discriminant is not a square in K")),
        }
    }

    let tower = match build_tower(curve, n, param) {
        Ok(t) => t,
        Err(Error::NotIrreducible) => return Ok(fail(cert, Error::NotIrreducible.to_string())),
        Err(e) => return Err(e),
    };
    cert.verdicts.irreducible = true;
    match tower {
        Tower::Single(g) => certify_over(curve, n, param, g, cert),
        Tower::Double(g) => certify_over(curve, n, param, g, cert),
    }
}

fn certify_over<L: TowerElem>(
    curve: &Curve<QuadElem>,
    n: u32,
    param: &QuadElem,
    generator: L,
    mut cert: RankGainCertificate,
) -> Result<RankGainCertificate>
where
    AnyExtension: From<CyclicExtension<L>>,
    ExtPoint<L>: TryFrom<AnyPoint, Error = Error>,
{
    cert.tower = L::moduli_json(&generator);
    cert.verdicts.degree_ok = L::tower_degree(&generator) == n as usize;
    if !cert.verdicts.degree_ok {
        return Ok(fail(
            cert,
            format!("tower has degree {} over K", L::tower_degree(&generator)),
        ));
    }
    let automorphism = match cyclic_generator(&generator, n) {
        Ok(h) => h,
        Err(e @ (Error::NotGalois { .. } | Error::NotCyclic(_))) => return Ok(fail(cert, e.to_string())),
        Err(e) => return Err(e),
    };
    cert.automorphism = L::hom_to_json(&automorphism);
    let ext = CyclicExtension {
        n,
        generator,
        automorphism,
    };
    cert.verdicts.cyclic_ok = ext.order_is_exact();

    let pt: ExtPoint<L> = build_point(curve, n, param, &ext.clone().into())?.try_into()?;
    cert.point = Some(point_to_json(&pt.point));
    if let Some((q, sign)) = &pt.partner {
        cert.partner = Some(point_to_json(q));
        cert.witness_sign = Some(*sign);
    }
    cert.verdicts.on_curve = pt.curve.contains(&pt.point);
    cert.verdicts.partner_ok = pt.partner_in_orbit();

    let orbit = conjugate_sum_check(&pt)?;
    cert.verdicts.transitive_ok = orbit.transitive;
    cert.verdicts.conjugate_sum_zero = orbit.sum_is_zero;

    let torsion = non_torsion_check(curve, &pt.point, &ext.generator, DEFAULT_TORSION_PRIMES)?;
    cert.torsion_bound = Some(torsion.bound);
    cert.torsion_primes = torsion.primes.iter().map(PrimeIdeal::label).collect();
    cert.non_torsion_witness = torsion.witness.as_ref().map(PrimeIdeal::label);
    cert.verdicts.non_torsion = torsion.non_torsion;

    cert.failure = cert.verdicts.first_failure().map(|s| format!("stage {s} failed"));
    Ok(cert)
}

impl From<CyclicExtension<Level1>> for AnyExtension {
    fn from(e: CyclicExtension<Level1>) -> Self {
        AnyExtension::Single(e)
    }
}

impl From<CyclicExtension<Level2>> for AnyExtension {
    fn from(e: CyclicExtension<Level2>) -> Self {
        AnyExtension::Double(e)
    }
}

impl TryFrom<AnyPoint> for ExtPoint<Level1> {
    type Error = Error;
    fn try_from(p: AnyPoint) -> Result<Self> {
        match p {
            AnyPoint::Single(p) => Ok(p),
            AnyPoint::Double(_) => Err(Error::Internal("expected a point over a one-level tower".into())),
        }
    }
}

impl TryFrom<AnyPoint> for ExtPoint<Level2> {
    type Error = Error;
    fn try_from(p: AnyPoint) -> Result<Self> {
        match p {
            AnyPoint::Double(p) => Ok(p),
            AnyPoint::Single(_) => Err(Error::Internal("expected a point over a two-level tower".into())),
        }
    }
}

/// Recomputes every verdict from the serialized data. The tower is rebuilt
/// from the parameter and compared; the automorphism, point and torsion
/// primes are taken from the certificate and checked, not searched for.
pub fn check_certificate(cert: &RankGainCertificate) -> Result<Verdicts> {
    if cert.version != CERT_VERSION {
        return Err(malformed(format!("unknown version {:?}", cert.version)));
    }
    let curve = cert.curve()?;
    let n = cert.n;
    check_field(&curve, n)?;
    if cert.param_name != param_name(n) {
        return Err(malformed(format!("parameter for n={n} is named {:?}", param_name(n))));
    }
    let param = cert.param_value()?;
    check_admissible(&curve, n, &param)?;

    let mut v = Verdicts::default();
    if n == 2 {
        v.lift_rational = cert.lift_witness.is_none();
    } else {
        let disc = lift_discriminant(&curve, &LiftParam::new(n, param.clone())?)?;
        v.lift_rational = match &cert.lift_witness {
            Some(w) => quad_from_json(curve.a.field(), w)?.square() == disc,
            None => false,
        };
    }
    let tower = match build_tower(&curve, n, &param) {
        Ok(t) => t,
        Err(Error::NotIrreducible) => return Ok(v),
        Err(e) => return Err(e),
    };
    v.irreducible = true;
    match tower {
        Tower::Single(g) => check_over(cert, &curve, &param, g, v),
        Tower::Double(g) => check_over(cert, &curve, &param, g, v),
    }
}

fn check_over<L: TowerElem>(
    cert: &RankGainCertificate,
    curve: &Curve<QuadElem>,
    param: &QuadElem,
    generator: L,
    mut v: Verdicts,
) -> Result<Verdicts> {
    let n = cert.n;
    if L::moduli_json(&generator) != cert.tower {
        return Ok(v);
    }
    v.degree_ok = L::tower_degree(&generator) == n as usize;
    let automorphism = L::hom_from_json(&generator, &cert.automorphism)?;
    let ext = CyclicExtension {
        n,
        generator,
        automorphism,
    };
    v.cyclic_ok = ext.order_is_exact();
    if !v.cyclic_ok {
        return Ok(v);
    }

    let curve_l = ext.curve(curve);
    let point_json = cert
        .point
        .as_ref()
        .ok_or_else(|| malformed("certificate has no point"))?;
    let point = point_from_json(&ext.generator, point_json)?;
    let partner = match (&cert.partner, cert.witness_sign, n) {
        (Some(q), Some(sign), 4) => {
            let q = point_from_json(&ext.generator, q)?;
            let w = cert
                .lift_witness
                .as_ref()
                .ok_or_else(|| malformed("n=4 certificate lacks the witness"))?;
            let w = quad_from_json(curve.a.field(), w)? * param.int_like(sign as i64);
            let ok = match (point.coords(), q.coords()) {
                (Some((xp, yp)), Some((xq, yq))) => {
                    *xq == ext.embed(param) - xp.clone()
                        && yp.clone() * yq.clone() * (xp.clone() - xq.clone()) == ext.embed(&w)
                }
                _ => false,
            };
            ok.then_some((q, sign))
        }
        (None, None, m) if m != 4 => None,
        _ => return Ok(v),
    };
    let needs_partner = n == 4;
    let pt = ExtPoint {
        extension: ext,
        curve: curve_l,
        point,
        partner,
    };
    v.on_curve = !pt.point.is_infinity() && pt.curve.contains(&pt.point);
    v.partner_ok = pt.partner.is_some() == needs_partner && pt.partner_in_orbit();
    let orbit = conjugate_sum_check(&pt)?;
    v.transitive_ok = orbit.transitive;
    v.conjugate_sum_zero = orbit.sum_is_zero;

    let primes = cert
        .torsion_primes
        .iter()
        .map(|s| PrimeIdeal::parse(cert.field_d, s))
        .collect::<Result<Vec<_>>>()?;
    let bound = torsion_bound_from_primes(curve, &pt.extension.generator, &primes)?;
    if cert.torsion_bound != Some(bound) || pt.point.is_infinity() {
        return Ok(v);
    }
    v.non_torsion = match &cert.non_torsion_witness {
        Some(s) => {
            let prime = PrimeIdeal::parse(cert.field_d, s)?;
            reduction_witnesses(curve, &pt.point, &pt.extension.generator, bound, &prime)
        }
        None => !exact_multiple_is_zero(curve, &pt.point, &pt.extension.generator, bound)?,
    };
    Ok(v)
}

/// Whether the certificate is well formed, internally consistent and every
/// recomputed verdict passes.
pub fn verify_certificate(cert: &RankGainCertificate) -> bool {
    cert.failure.is_none() && matches!(check_certificate(cert), Ok(v) if v.all() && v == cert.verdicts)
}

/// Certificates for `count` pairwise non-isomorphic extensions. Extension `i`
/// is inert at `primes[i]` while every other one splits there.
#[derive(Clone, Debug)]
pub struct DistinctFamily {
    pub certificates: Vec<RankGainCertificate>,
    pub primes: Vec<PrimeIdeal>,
}

impl DistinctFamily {
    /// Distinguishing prime for each pair `(i, j)` with `i < j`, as labels.
    pub fn pairwise_witnesses(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        for i in 0..self.certificates.len() {
            for j in i + 1..self.certificates.len() {
                out.push((i, j, self.primes[i].label()));
            }
        }
        out
    }
}

/// Split primes of good reduction, one per rational prime, at which integer
/// parameters can realise both behaviours.
fn distinguishing_primes(curve: &Curve<QuadElem>, n: u32, count: usize) -> Vec<PrimeIdeal> {
    let reachable = |p: &PrimeIdeal| {
        [Behavior::Irreducible, Behavior::Split].into_iter().all(|b| {
            let c = [SplitConstraint::new(*p, b)];
            let ok = candidate_params(curve, n, &c, p.p).is_ok();
            ok
        })
    };
    unramified_primes(curve.a.field(), 5)
        .filter(|p| p.kind == PrimeKind::Split && reduce_curve(curve, p).is_ok())
        .filter(|p| {
            primes_above(curve.a.field(), p.p)
                .map(|ps| ps[0] == *p)
                .unwrap_or(false)
        })
        .filter(reachable)
        .take(count)
        .collect()
}

/// First valid certificate among parameters in `[1, bound]` satisfying the constraints.
fn first_certificate(
    curve: &Curve<QuadElem>,
    n: u32,
    constraints: &[SplitConstraint],
    bound: u64,
) -> Result<RankGainCertificate> {
    for param in candidate_params(curve, n, constraints, bound)? {
        let cert = make_certificate(curve, n, &param)?;
        if cert.is_valid() {
            return Ok(cert);
        }
    }
    Err(Error::NotFound(bound))
}

/// `count` valid certificates over pairwise distinct extensions, built
/// concurrently. Parameters are searched in `[1, bound]`.
pub fn distinct_extensions(curve: &Curve<QuadElem>, n: u32, count: usize, bound: u64) -> Result<DistinctFamily> {
    check_field(curve, n)?;
    if count == 0 {
        return Err(Error::InvalidInput("count must be positive".into()));
    }
    if count == 1 {
        return Ok(DistinctFamily {
            certificates: vec![first_certificate(curve, n, &[], bound)?],
            primes: Vec::new(),
        });
    }
    let primes = distinguishing_primes(curve, n, count);
    let constraint_sets: Vec<Vec<SplitConstraint>> = (0..count)
        .map(|i| {
            primes
                .iter()
                .enumerate()
                .map(|(j, p)| SplitConstraint::new(*p, if i == j { Behavior::Irreducible } else { Behavior::Split }))
                .collect()
        })
        .collect();
    let certificates = thread::scope(|scope| {
        let handles: Vec<_> = constraint_sets
            .iter()
            .map(|cs| scope.spawn(move || first_certificate(curve, n, cs, bound)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .map_err(|_| Error::Internal("certificate worker panicked".into()))?
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(DistinctFamily { certificates, primes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn curve(k: QuadFieldDesc, a: i64, b: i64) -> Curve<QuadElem> {
        Curve::new(k.int(a), k.int(b)).unwrap()
    }

    fn full_check(e: &Curve<QuadElem>, n: u32, param: QuadElem) {
        let ext = build_extension(e, n, &param).unwrap();
        let pt = build_point(e, n, &param, &ext).unwrap();
        match pt {
            AnyPoint::Single(p) => {
                assert!(p.extension.order_is_exact());
                let o = conjugate_sum_check(&p).unwrap();
                assert!(o.transitive && o.sum_is_zero, "{o:?}");
                let t = non_torsion_check(e, &p.point, &p.extension.generator, 2).unwrap();
                assert!(t.non_torsion, "{t:?}");
            }
            AnyPoint::Double(p) => {
                assert!(p.extension.order_is_exact());
                assert!(p.partner_in_orbit());
                let o = conjugate_sum_check(&p).unwrap();
                assert!(o.transitive && o.sum_is_zero, "{o:?}");
                let t = non_torsion_check(e, &p.point, &p.extension.generator, 2).unwrap();
                assert!(t.non_torsion, "{t:?}");
            }
        }
    }

    #[test]
    fn constructions_smoke() {
        let k = QuadFieldDesc::eisenstein();
        full_check(&curve(k, 0, 1), 2, k.int(3));
        full_check(&curve(k, 0, 1), 3, k.int(1));
        full_check(&curve(k, 0, 1), 6, k.int(2));
        let g = QuadFieldDesc::gaussian();
        full_check(&curve(g, 1, 0), 4, g.int(1));
    }

    #[test]
    fn cubic_example_tower_and_point() {
        let k = QuadFieldDesc::eisenstein();
        let e = curve(k, 0, 1);
        let Tower::Single(g) = build_tower(&e, 3, &k.int(1)).unwrap() else {
            panic!("one level")
        };
        let r = |n, d| k.rational(crate::field::rat(n, d));
        let expected = Poly::new(vec![r(35, 36), r(1, 3), r(-1, 1), r(1, 1)]);
        assert_eq!(g.ring().modulus(), &expected);
        let AnyPoint::Single(p) = build_point(&e, 3, &k.int(1), &build_extension(&e, 3, &k.int(1)).unwrap()).unwrap()
        else {
            panic!("one level")
        };
        let (x, y) = p.point.coords().unwrap();
        assert_eq!(
            y.clone() * p.extension.embed(&k.int(6)),
            p.extension.embed(&k.int(1)) - x.clone() * p.extension.embed(&k.int(6))
        );
    }

    #[test]
    fn quartic_example_witness() {
        let g = QuadFieldDesc::gaussian();
        let e = curve(g, 1, 0);
        let w = lift_is_rational(&e, &LiftParam::new(4, g.int(1)).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w.square(), g.rational(crate::field::rat(-100, 81)));
        let cert = make_certificate(&e, 4, &g.int(1)).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.failure);
        assert!(cert.witness_sign.is_some() && cert.partner.is_some());
    }

    #[test]
    fn torsion_points_are_rejected() {
        let k = QuadFieldDesc::eisenstein();
        let e = curve(k, 0, 1);
        let p = CurvePoint::affine(k.int(2), k.int(3));
        let t = non_torsion_check(&e, &p, &k.one(), 2).unwrap();
        assert!(!t.non_torsion);
        assert_eq!(t.bound % 6, 0);
        let o: CurvePoint<QuadElem> = CurvePoint::Infinity;
        assert!(!non_torsion_check(&e, &o, &k.one(), 2).unwrap().non_torsion);
        let ring = ExtRing::new(param_poly(&e, 3, &k.int(1)).unwrap()).unwrap();
        let lifted = CurvePoint::affine(ring.embed(k.int(0)), ring.embed(k.int(1)));
        assert!(!non_torsion_check(&e, &lifted, &ring.gen(), 2).unwrap().non_torsion);
    }

    #[test]
    fn reducible_cubic_is_recorded() {
        let k = QuadFieldDesc::eisenstein();
        let e = Curve::new(k.int(0), k.rational(crate::field::rat(1, 36))).unwrap();
        let cert = make_certificate(&e, 3, &k.int(1)).unwrap();
        assert!(!cert.is_valid());
        assert!(!cert.verdicts.irreducible);
        assert_eq!(
            cert.failure.as_deref(),
            Some(Error::NotIrreducible.to_string().as_str())
        );
    }

    #[test]
    fn certificates_round_trip_and_detect_tampering() {
        let k = QuadFieldDesc::eisenstein();
        let e = curve(k, 0, 1);
        let cert = make_certificate(&e, 3, &k.int(1)).unwrap();
        assert!(cert.is_valid(), "{:?}", cert.failure);
        let text = cert.to_json_string();
        let back = RankGainCertificate::from_json_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&back));

        let mut bad = cert.clone();
        let x = &mut bad.point.as_mut().unwrap()["x"][1]["a"];
        assert_eq!(x.as_str(), Some("1/1"));
        *x = Value::String("2/1".into());
        assert!(!verify_certificate(&bad));

        let mut bad = cert.clone();
        bad.torsion_bound = bad.torsion_bound.map(|t| t * 2);
        assert!(!verify_certificate(&bad));

        let mut bad = cert;
        bad.automorphism[0][0]["a"] = Value::String("0/1".into());
        assert!(!verify_certificate(&bad));
    }

    #[test]
    fn wrong_field_is_invalid_input() {
        let g = QuadFieldDesc::gaussian();
        let err = make_certificate(&curve(g, 0, 1), 3, &g.int(1)).unwrap_err();
        assert_eq!(err, Error::InvalidInput("n=3 requires d=-3".into()));
    }

    #[test]
    fn distinct_quadratic_extensions() {
        let k = QuadFieldDesc::eisenstein();
        let e = curve(k, 0, 1);
        let fam = distinct_extensions(&e, 2, 3, 10_000).unwrap();
        assert_eq!(fam.certificates.len(), 3);
        for (i, c) in fam.certificates.iter().enumerate() {
            assert!(verify_certificate(c));
            for (j, p) in fam.primes.iter().enumerate() {
                let v = crate::search::split_type_at(&e, 2, &c.param_value().unwrap(), p).unwrap();
                let want = if i == j {
                    crate::search::SplitVerdict::Irreducible
                } else {
                    crate::search::SplitVerdict::Split
                };
                assert_eq!(v, want);
            }
        }
    }
}
