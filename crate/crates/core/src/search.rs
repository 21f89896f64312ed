//! Splitting behaviour of the parameter polynomials at primes of `K`:
//! factorization oracle, closed-form fast paths, density scans, and
//! parameter search under prescribed splitting.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::elliptic::{reduce_curve, Curve, POINT_COUNT_LIMIT};
use crate::error::{Error, Result};
use crate::families::{omega_lambda, p_lambda_squared, quartic_disc_factor};
use crate::field::{rational_to_string, Field};
use crate::numfield::{
    crt, is_nth_power_residue, reduce, unramified_primes, PrimeIdeal, QuadElem, QuadFieldDesc, ResidueElem,
};
use crate::poly::Poly;
use crate::polyalg::{split_type, SplitType};

/// Degrees of cyclic extensions handled by the search layer.
pub const DEGREES: [u32; 4] = [2, 3, 4, 6];

fn check_degree(n: u32) -> Result<()> {
    if DEGREES.contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("n must be one of 2, 3, 4, 6; got {n}")))
    }
}

/// The polynomial whose irreducibility decides the Galois orbit of the
/// constructed point:
///
/// * `n = 2`: `y^2 - (l^3 + A l + B)`
/// * `n = 3`: the cubic cut out by the line at `l`
/// * `n = 4`: `3 l x^2 - 3 l^2 x + (l^3 + A l + 2B)`
/// * `n = 6`: the `n = 3` cubic at `l = sqrt(w)`, which has coefficients in the base.
///
/// Rejects parameters on the branch locus.
pub fn param_poly<F: Field>(curve: &Curve<F>, n: u32, param: &F) -> Result<Poly<F>> {
    check_degree(n)?;
    let (a, b) = (&curve.a, &curve.b);
    let k = |m: i64| param.int_like(m);
    if n == 2 {
        let v = param.pow(3) + a.clone() * param.clone() + b.clone();
        if v.is_zero() {
            return Err(Error::InvalidParam("l^3 + A l + B = 0".into()));
        }
        return Ok(Poly::new(vec![-v, k(0), k(1)]));
    }
    if param.is_zero() {
        return Err(Error::InvalidParam("parameter must be non-zero".into()));
    }
    match n {
        3 | 6 => {
            let w = if n == 3 { param.square() } else { param.clone() };
            if quartic_disc_factor(curve, &w).is_zero() {
                return Err(Error::RamifiedParam("27A^2 w^4 - 108B w^3 - 18A w^2 - 1 = 0".into()));
            }
            p_lambda_squared(curve, &w)
        }
        _ => {
            if omega_lambda(curve, param)?.is_zero() {
                return Err(Error::RamifiedParam("Omega vanishes".into()));
            }
            let l = param;
            Ok(Poly::new(vec![
                l.pow(3) + a.clone() * l.clone() + k(2) * b.clone(),
                k(-3) * l.square(),
                k(3) * l.clone(),
            ]))
        }
    }
}

/// Admissibility over `K`: [`param_poly`] is defined and, for `n = 6`, the
/// parameter is not a square.
pub fn check_admissible(curve: &Curve<QuadElem>, n: u32, param: &QuadElem) -> Result<()> {
    param_poly(curve, n, param)?;
    if n == 6 && param.is_square() {
        return Err(Error::InvalidParam(format!("{param} is a square in K")));
    }
    Ok(())
}

/// Behaviour of the parameter polynomial modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitVerdict {
    Irreducible,
    /// Has a non-trivial factor.
    Split,
    /// Repeated roots, or the parameter does not reduce.
    Degenerate,
}

impl From<SplitType> for SplitVerdict {
    fn from(t: SplitType) -> Self {
        match t {
            SplitType::Irreducible => SplitVerdict::Irreducible,
            SplitType::HasRoot | SplitType::SplitsCompletely => SplitVerdict::Split,
            SplitType::Degenerate => SplitVerdict::Degenerate,
        }
    }
}

/// For `n = 6` the extension is inert exactly when both the cubic and `y^2 - w` are.
fn combine(cubic: SplitVerdict, quadratic: SplitVerdict) -> SplitVerdict {
    use SplitVerdict::*;
    match (cubic, quadratic) {
        (Degenerate, _) | (_, Degenerate) => Degenerate,
        (Irreducible, Irreducible) => Irreducible,
        _ => Split,
    }
}

/// Oracle over the residue field itself, for a parameter already in `k_P`.
pub fn verdict_in_residue_field(curve: &Curve<ResidueElem>, n: u32, param: &ResidueElem) -> SplitVerdict {
    let Ok(f) = param_poly(curve, n, param) else {
        return SplitVerdict::Degenerate;
    };
    let main = SplitVerdict::from(split_type(&f));
    if n != 6 {
        return main;
    }
    let quad = Poly::new(vec![-*param, param.zero_like(), param.one_like()]);
    combine(main, split_type(&quad).into())
}

fn reduce_monic(f: &Poly<QuadElem>, prime: &PrimeIdeal) -> Option<Poly<ResidueElem>> {
    let m = f.monic()?;
    m.try_map(|c| reduce(c, prime)).ok()
}

/// Factorization oracle: reduce the (monic) parameter polynomial at `P` and
/// count roots in `k_P`.
pub fn split_type_at(curve: &Curve<QuadElem>, n: u32, param: &QuadElem, prime: &PrimeIdeal) -> Result<SplitVerdict> {
    reduce_curve(curve, prime)?;
    let f = param_poly(curve, n, param)?;
    let Some(fr) = reduce_monic(&f, prime) else {
        return Ok(SplitVerdict::Degenerate);
    };
    let main = SplitVerdict::from(split_type(&fr));
    if n != 6 {
        return Ok(main);
    }
    let quad = Poly::new(vec![-param.clone(), param.zero_like(), param.one_like()]);
    let Some(qr) = reduce_monic(&quad, prime) else {
        return Ok(SplitVerdict::Degenerate);
    };
    Ok(combine(main, split_type(&qr).into()))
}

/// Which cube class of `D'` makes the cubic irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubeDirection {
    CubeMeansIrreducible,
    NoncubeMeansIrreducible,
}

/// Outcome of comparing the cube criterion against the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FastPathCalibration {
    pub n: u32,
    pub direction: CubeDirection,
    pub samples: usize,
}

static CALIBRATION: OnceLock<std::result::Result<FastPathCalibration, Error>> = OnceLock::new();

/// Minimum number of non-degenerate samples used by [`calibrate`].
pub const CALIBRATION_SAMPLES: usize = 500;

/// Runs the calibration once per process and returns the stored result.
pub fn calibrate() -> Result<&'static FastPathCalibration> {
    CALIBRATION.get_or_init(run_calibration).as_ref().map_err(Clone::clone)
}

/// The stored calibration, if [`calibrate`] has run successfully.
pub fn calibration() -> Option<&'static FastPathCalibration> {
    CALIBRATION.get().and_then(|r| r.as_ref().ok())
}

fn run_calibration() -> Result<FastPathCalibration> {
    let k = QuadFieldDesc::eisenstein();
    let curves = [(0, 1), (1, 0), (-7, 3), (2, -5), (3, 7), (-1, 1)];
    let primes: Vec<PrimeIdeal> = unramified_primes(k, 5)
        .take_while(|p| p.norm() <= 2000)
        .take(24)
        .collect();
    let (mut cube_irr, mut noncube_irr, mut samples) = (0usize, 0usize, 0usize);
    let mut lambda = 0i64;
    while samples < CALIBRATION_SAMPLES {
        lambda += 1;
        if lambda > 100_000 {
            return Err(Error::CalibrationInconsistent(
                "not enough non-degenerate samples".into(),
            ));
        }
        let (a, b) = curves[lambda as usize % curves.len()];
        let prime = primes[(lambda as usize / curves.len()) % primes.len()];
        let curve = Curve {
            a: k.int(a),
            b: k.int(b),
        };
        let Ok(reduced) = reduce_curve(&curve, &prime) else {
            continue;
        };
        let Ok(lr) = reduce(&k.int(lambda), &prime) else {
            continue;
        };
        let verdict = verdict_in_residue_field(&reduced, 3, &lr);
        if verdict == SplitVerdict::Degenerate {
            continue;
        }
        let d = quartic_disc_factor(&reduced, &lr.square()) * lr.int_like(4).inv().expect("odd characteristic");
        let cube = is_nth_power_residue(&d, 3);
        let irreducible = verdict == SplitVerdict::Irreducible;
        samples += 1;
        if cube == irreducible {
            cube_irr += 1;
        } else {
            noncube_irr += 1;
        }
    }
    let direction = match (cube_irr, noncube_irr) {
        (s, 0) if s == samples => CubeDirection::CubeMeansIrreducible,
        (0, s) if s == samples => CubeDirection::NoncubeMeansIrreducible,
        (c, nc) => {
            return Err(Error::CalibrationInconsistent(format!(
                "cube criterion matched {c} samples one way and {nc} the other"
            )))
        }
    };
    Ok(FastPathCalibration {
        n: 3,
        direction,
        samples,
    })
}

fn cubic_fast(d_prime: &ResidueElem, direction: CubeDirection) -> SplitVerdict {
    if d_prime.is_zero() {
        return SplitVerdict::Degenerate;
    }
    let cube = is_nth_power_residue(d_prime, 3);
    let irreducible = match direction {
        CubeDirection::CubeMeansIrreducible => cube,
        CubeDirection::NoncubeMeansIrreducible => !cube,
    };
    if irreducible {
        SplitVerdict::Irreducible
    } else {
        SplitVerdict::Split
    }
}

fn residue_test(v: &ResidueElem) -> SplitVerdict {
    if v.is_zero() {
        SplitVerdict::Degenerate
    } else if is_nth_power_residue(v, 2) {
        SplitVerdict::Split
    } else {
        SplitVerdict::Irreducible
    }
}

/// Closed-form criteria on a residue-field parameter (characteristic not 3):
///
/// * `n = 2`: quadratic character of `l^3 + A l + B`
/// * `n = 3`: cube class of `D' = (27A^2 l^8 - 108B l^6 - 18A l^4 - 1)/4`
/// * `n = 4`: quadratic character of `disc(q_l) = -3 l (l^3 + 4A l + 8B)`
/// * `n = 6`: cube class of `D'` at `w` together with the quadratic character of `w`
pub fn fast_verdict_in_residue_field(
    curve: &Curve<ResidueElem>,
    n: u32,
    param: &ResidueElem,
    direction: CubeDirection,
) -> SplitVerdict {
    let (a, b) = (&curve.a, &curve.b);
    let l = param;
    let k = |m: i64| l.int_like(m);
    if n == 2 {
        return residue_test(&(l.pow(3) + *a * *l + *b));
    }
    if l.is_zero() {
        return SplitVerdict::Degenerate;
    }
    let quarter = k(4).inv().expect("odd characteristic");
    match n {
        3 => cubic_fast(&(quartic_disc_factor(curve, &l.square()) * quarter), direction),
        6 => {
            let cubic = cubic_fast(&(quartic_disc_factor(curve, l) * quarter), direction);
            combine(cubic, residue_test(l))
        }
        _ => residue_test(&(k(-3) * *l * (l.pow(3) + k(4) * *a * *l + k(8) * *b))),
    }
}

/// Fast path equivalent to [`split_type_at`]. Parameters that are not
/// integral at `P`, characteristic 3 for `n > 2`, and residue fields without
/// cube roots of unity for `n = 3, 6` go to the oracle.
pub fn fast_split_test(curve: &Curve<QuadElem>, n: u32, param: &QuadElem, prime: &PrimeIdeal) -> Result<SplitVerdict> {
    check_degree(n)?;
    let direction = match n {
        3 | 6 => calibration().ok_or(Error::NotCalibrated)?.direction,
        _ => CubeDirection::NoncubeMeansIrreducible,
    };
    let reduced = reduce_curve(curve, prime)?;
    param_poly(curve, n, param)?;
    let cube_test_applies = prime.norm() % 3 == 1;
    let lr = match reduce(param, prime) {
        Ok(lr) if n == 2 || (prime.p != 3 && (n == 4 || cube_test_applies)) => lr,
        _ => return split_type_at(curve, n, param, prime),
    };
    Ok(fast_verdict_in_residue_field(&reduced, n, &lr, direction))
}

fn serialize_fraction<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub prime: String,
    pub q: u64,
    pub n: u32,
    pub total: u64,
    pub irreducible_count: u64,
    pub degenerate_count: u64,
    #[serde(serialize_with = "serialize_fraction")]
    pub fraction: BigRational,
}

impl DensityReport {
    pub fn fraction_f64(&self) -> f64 {
        self.fraction.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact oracle counts over every parameter of `k_P`: non-zero `l` for
/// `n = 2, 3, 4`, quadratic non-residues `w` for `n = 6`.
pub fn density_scan(curve: &Curve<QuadElem>, n: u32, prime: &PrimeIdeal, workers: usize) -> Result<DensityReport> {
    check_degree(n)?;
    let q = prime.norm();
    if q > POINT_COUNT_LIMIT {
        return Err(Error::Resource(format!(
            "residue field of size {q} exceeds the enumeration budget"
        )));
    }
    let reduced = reduce_curve(curve, prime)?;
    let field = prime.residue_field();
    let workers = workers.clamp(1, 64) as u64;
    let chunk = (q - 1).div_ceil(workers);
    let counts: Vec<(u64, u64, u64)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let reduced = &reduced;
                s.spawn(move || {
                    let (mut total, mut irr, mut deg) = (0u64, 0u64, 0u64);
                    let start = 1 + w * chunk;
                    for i in start..(start + chunk).min(q) {
                        let x = field.element(i);
                        if n == 6 && is_nth_power_residue(&x, 2) {
                            continue;
                        }
                        total += 1;
                        match verdict_in_residue_field(reduced, n, &x) {
                            SplitVerdict::Irreducible => irr += 1,
                            SplitVerdict::Degenerate => deg += 1,
                            SplitVerdict::Split => {}
                        }
                    }
                    (total, irr, deg)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("density worker")).collect()
    });
    let (total, irr, deg) = counts
        .into_iter()
        .fold((0, 0, 0), |a, c| (a.0 + c.0, a.1 + c.1, a.2 + c.2));
    let fraction = if total == 0 {
        BigRational::zero()
    } else {
        BigRational::new(irr.into(), total.into())
    };
    Ok(DensityReport {
        prime: prime.to_string(),
        q,
        n,
        total,
        irreducible_count: irr,
        degenerate_count: deg,
        fraction,
    })
}

/// Prescribed behaviour at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Behavior {
    Irreducible,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitConstraint {
    pub prime: PrimeIdeal,
    pub behavior: Behavior,
}

impl SplitConstraint {
    pub fn new(prime: PrimeIdeal, behavior: Behavior) -> Self {
        SplitConstraint { prime, behavior }
    }

    fn accepts(&self, v: SplitVerdict) -> bool {
        matches!(
            (self.behavior, v),
            (Behavior::Irreducible, SplitVerdict::Irreducible) | (Behavior::Split, SplitVerdict::Split)
        )
    }
}

/// Above this many CRT classes the candidates are sieved instead of listed.
const MAX_CRT_CLASSES: usize = 1 << 16;

/// Residues `c mod p` for which every constraint above `p` holds at `l = c`.
fn good_classes(curve: &Curve<QuadElem>, n: u32, p: u64, constraints: &[SplitConstraint]) -> Result<Vec<bool>> {
    let mut table = vec![true; p as usize];
    for c in constraints {
        let reduced = reduce_curve(curve, &c.prime)?;
        let k = c.prime.residue_field();
        for (r, ok) in table.iter_mut().enumerate() {
            if *ok {
                *ok = c.accepts(verdict_in_residue_field(&reduced, n, &k.int(r as i64)));
            }
        }
    }
    Ok(table)
}

/// Integer parameters in `[1, bound]`, ascending, that are admissible and
/// satisfy every constraint according to the oracle.
pub fn candidate_params<'a>(
    curve: &'a Curve<QuadElem>,
    n: u32,
    constraints: &'a [SplitConstraint],
    bound: u64,
) -> Result<impl Iterator<Item = QuadElem> + 'a> {
    check_degree(n)?;
    let mut by_p: BTreeMap<u64, Vec<SplitConstraint>> = BTreeMap::new();
    for c in constraints {
        if c.prime.d() != curve.a.d() {
            return Err(Error::InvalidInput(format!("prime {} is not a prime of K", c.prime)));
        }
        by_p.entry(c.prime.p).or_default().push(*c);
    }
    let mut tables: Vec<(u64, Vec<bool>)> = Vec::new();
    for (p, cs) in &by_p {
        let t = good_classes(curve, n, *p, cs)?;
        if !t.iter().any(|&x| x) {
            return Err(Error::Unsatisfiable(format!(
                "no residue class mod {p} meets the constraints"
            )));
        }
        tables.push((*p, t));
    }
    let class_count: usize = tables
        .iter()
        .map(|(_, t)| t.iter().filter(|&&x| x).count())
        .try_fold(1usize, |acc, c| acc.checked_mul(c))
        .unwrap_or(usize::MAX);

    let field = curve.a.field();
    let verify = move |l: u64| -> Option<QuadElem> {
        let param = field.int(l as i64);
        check_admissible(curve, n, &param).ok()?;
        constraints
            .iter()
            .all(|c| {
                split_type_at(curve, n, &param, &c.prime)
                    .map(|v| c.accepts(v))
                    .unwrap_or(false)
            })
            .then_some(param)
    };

    let candidates: Box<dyn Iterator<Item = u64> + 'a> = if class_count <= MAX_CRT_CLASSES {
        let (residues, modulus) = crt_classes(&tables)?;
        Box::new(
            (0u64..)
                .map(move |block| block.saturating_mul(modulus))
                .take_while(move |&base| base <= bound)
                .flat_map(move |base| residues.clone().into_iter().map(move |r| base + r))
                .filter(move |&l| (1..=bound).contains(&l)),
        )
    } else {
        Box::new((1..=bound).filter(move |&l| tables.iter().all(|(p, t)| t[(l % p) as usize])))
    };
    Ok(candidates.filter_map(verify))
}

/// All CRT combinations of the good classes, sorted, with their modulus.
fn crt_classes(tables: &[(u64, Vec<bool>)]) -> Result<(Vec<u64>, u64)> {
    let mut residues = vec![BigInt::zero()];
    let mut modulus = BigInt::one();
    for (p, t) in tables {
        let pb = BigInt::from(*p);
        let mut next = Vec::new();
        for r in &residues {
            for (c, _) in t.iter().enumerate().filter(|(_, &ok)| ok) {
                next.push(crt(&[(r.clone(), modulus.clone()), (BigInt::from(c), pb.clone())])?);
            }
        }
        residues = next;
        modulus *= pb;
    }
    let modulus = modulus
        .to_u64()
        .ok_or_else(|| Error::Resource("product of constraint primes exceeds 64 bits".into()))?;
    let mut out: Vec<u64> = residues
        .iter()
        .map(|r| r.to_u64().expect("residue below modulus"))
        .collect();
    out.sort_unstable();
    Ok((out, modulus))
}

/// Smallest admissible integer parameter in `[1, bound]` meeting every
/// constraint, re-verified by the oracle.
pub fn find_param(curve: &Curve<QuadElem>, n: u32, constraints: &[SplitConstraint], bound: u64) -> Result<QuadElem> {
    candidate_params(curve, n, constraints, bound)?
        .next()
        .ok_or(Error::NotFound(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};
    use crate::numfield::primes_above;

    fn e01(k: QuadFieldDesc) -> Curve<QuadElem> {
        Curve::new(k.int(0), k.int(1)).unwrap()
    }

    #[test]
    fn param_poly_examples() {
        let k = QuadFieldDesc::eisenstein();
        let e = e01(k);
        assert_eq!(
            param_poly(&e, 2, &k.int(3)).unwrap(),
            Poly::new(vec![k.int(-28), k.zero(), k.one()])
        );
        let p3 = param_poly(&e, 3, &k.int(1)).unwrap();
        let expect = Poly::new(vec![rat(35, 36), rat(1, 3), int(-1), int(1)]).map(|c| k.rational(c.clone()));
        assert_eq!(p3, expect);
        let g = QuadFieldDesc::gaussian();
        let q = param_poly(&e01(g), 4, &g.int(2)).unwrap();
        assert_eq!(q, Poly::new(vec![g.int(10), g.int(-12), g.int(6)]));
        assert!(param_poly(&e, 3, &k.zero()).is_err());
        assert!(matches!(
            param_poly(&e01(g), 4, &g.int(1)),
            Err(Error::RamifiedParam(_))
        ));
        assert!(check_admissible(&e, 6, &k.int(4)).is_err());
    }

    #[test]
    fn oracle_examples() {
        let k = QuadFieldDesc::eisenstein();
        let e = e01(k);
        let p7 = primes_above(k, 7).unwrap()[0];
        let p13 = primes_above(k, 13).unwrap()[0];
        assert_eq!(split_type_at(&e, 3, &k.int(1), &p7).unwrap(), SplitVerdict::Split);
        assert_eq!(
            split_type_at(&e, 3, &k.int(1), &p13).unwrap(),
            SplitVerdict::Irreducible
        );
        let g = QuadFieldDesc::gaussian();
        let p5 = primes_above(g, 5).unwrap()[0];
        assert_eq!(
            split_type_at(&e01(g), 2, &g.int(3), &p5).unwrap(),
            SplitVerdict::Irreducible
        );
        let p3 = primes_above(k, 3).unwrap()[0];
        assert_eq!(split_type_at(&e, 3, &k.int(1), &p3), Err(Error::BadReduction(3)));
    }

    #[test]
    fn calibration_finds_noncube_direction() {
        let cal = calibrate().unwrap();
        assert_eq!(cal.direction, CubeDirection::NoncubeMeansIrreducible);
        assert!(cal.samples >= CALIBRATION_SAMPLES);
    }

    #[test]
    fn fast_path_matches_oracle_on_examples() {
        calibrate().unwrap();
        let g = QuadFieldDesc::gaussian();
        let p13 = primes_above(g, 13).unwrap()[0];
        let e = e01(g);
        let fast = fast_split_test(&e, 4, &g.int(2), &p13).unwrap();
        assert_eq!(fast, split_type_at(&e, 4, &g.int(2), &p13).unwrap());
        let p5 = primes_above(g, 5).unwrap()[0];
        assert_eq!(
            fast_split_test(&e, 2, &g.int(3), &p5).unwrap(),
            SplitVerdict::Irreducible
        );
        let k = QuadFieldDesc::eisenstein();
        for p in [7, 13, 19, 5, 11] {
            for prime in primes_above(k, p).unwrap() {
                for l in 1..30 {
                    for n in [2, 3, 6] {
                        let param = k.int(l);
                        if check_admissible(&e01(k), n, &param).is_err() {
                            continue;
                        }
                        assert_eq!(
                            fast_split_test(&e01(k), n, &param, &prime).unwrap(),
                            split_type_at(&e01(k), n, &param, &prime).unwrap(),
                            "n={n} l={l} {prime}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let k = QuadFieldDesc::eisenstein();
        let e = e01(k);
        let p13 = primes_above(k, 13).unwrap()[0];
        let r = density_scan(&e, 3, &p13, 2).unwrap();
        assert_eq!(r.total, 12);
        let serial = density_scan(&e, 3, &p13, 1).unwrap();
        assert_eq!(r, serial);
        let g = QuadFieldDesc::gaussian();
        let p101 = primes_above(g, 101).unwrap()[0];
        let r2 = density_scan(&e01(g), 2, &p101, 3).unwrap();
        assert!((r2.fraction_f64() - 0.5).abs() <= 0.15, "{r2:?}");
    }

    #[test]
    fn find_param_examples() {
        let k = QuadFieldDesc::eisenstein();
        let e = e01(k);
        let p13 = primes_above(k, 13).unwrap()[0];
        let p7 = primes_above(k, 7).unwrap()[0];
        let irr13 = [SplitConstraint::new(p13, Behavior::Irreducible)];
        assert_eq!(find_param(&e, 3, &irr13, 100).unwrap(), k.int(1));
        let split7 = [SplitConstraint::new(p7, Behavior::Split)];
        assert_eq!(find_param(&e, 3, &split7, 100).unwrap(), k.int(1));

        let g = QuadFieldDesc::gaussian();
        let e = e01(g);
        let p5 = primes_above(g, 5).unwrap()[0];
        let q7 = primes_above(g, 7).unwrap()[0];
        let cs = [
            SplitConstraint::new(p5, Behavior::Irreducible),
            SplitConstraint::new(q7, Behavior::Split),
        ];
        let l = find_param(&e, 2, &cs, 1000).unwrap();
        let li = l.a.to_integer();
        // l^3 + 1 is a non-residue mod 5 for l = 1, 3
        assert!([BigInt::from(1), BigInt::from(3)].contains(&(li % 5)));
        for c in &cs {
            assert!(c.accepts(split_type_at(&e, 2, &l, &c.prime).unwrap()));
        }
        // an integer parameter is a square in F_25, so it never stays irreducible at 5 in Q(sqrt -3)
        let p5k = primes_above(k, 5).unwrap()[0];
        let inert = [SplitConstraint::new(p5k, Behavior::Irreducible)];
        assert!(matches!(
            find_param(&e01(k), 2, &inert, 100),
            Err(Error::Unsatisfiable(_))
        ));
        assert_eq!(find_param(&e01(k), 3, &irr13, 0), Err(Error::NotFound(0)));
    }
}
