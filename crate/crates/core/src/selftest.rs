//! Seeded randomized checks of the exact identities behind the constructions.
//! Shared by the test suites and the `selftest` command.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elliptic::{Curve, CurvePoint};
use crate::families::{cubic_form, cubic_point, p_lambda, quartic_form, quartic_point, verify_incidence_lemmas};
use crate::field::{rat, Field};
use crate::geometry::{
    act, cyclic_orbit, delta, line_through, omega_fn, orbit, p_line, phi4, psi_uv, DihedralGroup, GroupElement,
    PairPoint, UVClass,
};
use crate::numfield::{sqrt_mod, ResidueElem, ResidueField};

/// Primes for the finite-field samples.
const SAMPLE_PRIMES: [u64; 4] = [101, 211, 1009, 7919];

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures.is_empty()
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(-50..=50), rng.gen_range(1..=50))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let x = small_rational(rng);
        if !Field::is_zero(&x) {
            return x;
        }
    }
}

fn rational_curve(rng: &mut ChaCha8Rng, b_nonzero: bool) -> Curve<BigRational> {
    loop {
        let b = if b_nonzero {
            nonzero_rational(rng)
        } else {
            small_rational(rng)
        };
        if let Ok(c) = Curve::new(small_rational(rng), b) {
            return c;
        }
    }
}

fn residue_curve(rng: &mut ChaCha8Rng, k: ResidueField) -> Curve<ResidueElem> {
    loop {
        let p = k.order() as i64;
        if let Ok(c) = Curve::new(k.int(rng.gen_range(0..p)), k.int(rng.gen_range(0..p))) {
            return c;
        }
    }
}

fn residue_point(rng: &mut ChaCha8Rng, curve: &Curve<ResidueElem>, k: ResidueField) -> CurvePoint<ResidueElem> {
    loop {
        let x = k.int(rng.gen_range(0..k.order() as i64));
        let rhs = curve.rhs(&x);
        if let Some(y) = sqrt_mod(rhs.c0, k.order()) {
            let y = k.int(y as i64);
            return CurvePoint::affine(x, if rng.gen() { y } else { -y });
        }
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Curve<ResidueElem>, PairPoint<ResidueElem>) {
    let k = ResidueField::prime_field(SAMPLE_PRIMES[rng.gen_range(0..SAMPLE_PRIMES.len())]);
    let curve = residue_curve(rng, k);
    let p = residue_point(rng, &curve, k);
    let q = residue_point(rng, &curve, k);
    (curve, PairPoint::new(p, q))
}

/// `disc(36 l^3 p_l) = -3888 (27A^2 l^8 - 108B l^6 - 18A l^4 - 1)^2`, the `Omega` closed form, the `Q_E` and
/// `C_E` parametrizations over `Q`, and `omega^2 = psi (u^2 - 4v)` over
/// finite fields.
pub fn identity_suite(seed: u64, samples: usize) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disc = SuiteReport::new("quartic discriminant");
    let mut omega = SuiteReport::new("Omega closed form");
    let mut param = SuiteReport::new("Q_E and C_E parametrizations");
    let mut omega_sq = SuiteReport::new("omega squared");

    for _ in 0..samples {
        let curve = rational_curve(&mut rng, false);
        let (a, b) = (curve.a.clone(), curve.b.clone());
        let l = nonzero_rational(&mut rng);
        let n = |k: i64| rat(k, 1);

        let lhs = p_lambda(&curve, &l)
            .ok()
            .and_then(|f| f.discriminant())
            .map(|d| (n(36) * l.pow(3)).pow(4) * d);
        let inner = n(27) * a.square() * l.pow(8) - n(108) * b.clone() * l.pow(6) - n(18) * a.clone() * l.pow(4) - n(1);
        let rhs = n(-3888) * inner.square();
        disc.record(lhs.as_ref() == Some(&rhs), || format!("A={a} B={b} l={l}"));

        let ok = match cubic_point(&curve, &l) {
            UVClass::Affine { u, v } => {
                let got = psi_uv(&curve, &u, &v) * (u.square() - n(4) * v);
                let f1 = l.pow(3) + a.clone() * l.clone() - b.clone();
                let f2 = l.pow(3) + n(4) * a.clone() * l.clone() + n(8) * b.clone();
                got == -(f1.square() * f2.square()) / (n(81) * l.pow(4))
            }
            UVClass::AtInfinity { .. } => false,
        };
        omega.record(ok, || format!("A={a} B={b} l={l}"));

        let on_q = quartic_point(&curve, &l)
            .map(|d| Field::is_zero(&quartic_form(&curve, &d)))
            .unwrap_or(false);
        let on_c = match cubic_point(&curve, &l) {
            UVClass::Affine { u, v } => Field::is_zero(&cubic_form(&curve, &u, &v, &n(1))),
            UVClass::AtInfinity { .. } => false,
        };
        param.record(on_q && on_c, || format!("A={a} B={b} l={l}"));

        let (fc, pq) = random_pair(&mut rng);
        let (p, q) = (&pq.first, &pq.second);
        let ok = match (phi4(p, q, &fc.a), omega_fn(p, q)) {
            (UVClass::Affine { u, v }, Ok(w)) => w.square() == psi_uv(&fc, &u, &v) * (u.square() - u.int_like(4) * v),
            _ => false,
        };
        omega_sq.record(ok, || {
            format!("{:?} {:?} on y^2 = x^3 + {:?} x + {:?}", p, q, fc.a, fc.b)
        });
    }
    vec![disc, omega, param, omega_sq]
}

/// The incidence lemmas for random curves with `B != 0`.
pub fn incidence_suite(seed: u64, curves: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("incidence lemmas");
    for _ in 0..curves {
        let curve = rational_curve(&mut rng, true);
        let r = verify_incidence_lemmas(&curve);
        report.record(r.all_hold(), || format!("A={} B={}: {r:?}", curve.a, curve.b));
    }
    report
}

fn rotations(
    curve: &Curve<ResidueElem>,
    g: DihedralGroup,
    k: u32,
    pq: &PairPoint<ResidueElem>,
) -> Option<PairPoint<ResidueElem>> {
    let r = GroupElement::r(g);
    let mut cur = pq.clone();
    for _ in 0..k {
        cur = act(curve, r, &cur).ok()?;
    }
    Some(cur)
}

fn is_generic(curve: &Curve<ResidueElem>, pq: &PairPoint<ResidueElem>) -> bool {
    let (p, q) = (&pq.first, &pq.second);
    let two_torsion = |x: &CurvePoint<ResidueElem>| x.coords().map(|(_, y)| y.is_zero()).unwrap_or(true);
    !two_torsion(p) && !two_torsion(q) && p != q && *p != curve.neg(q)
}

/// Dihedral action axioms and orbit invariants over finite fields.
pub fn action_suite(seed: u64, samples: usize) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axioms = SuiteReport::new("dihedral relations");
    let mut restriction = SuiteReport::new("D3 inside D6");
    let mut d4_orbit = SuiteReport::new("generic D4 orbit size 8");
    let mut lines = SuiteReport::new("Z/3 orbit line invariance");
    let mut omega = SuiteReport::new("omega under r and s");
    let mut classes = SuiteReport::new("phi4 and psi on D4 orbits");
    let mut cubic = SuiteReport::new("line cubic roots and delta");

    for _ in 0..samples {
        let (curve, pq) = random_pair(&mut rng);
        let show = || format!("{:?} on y^2 = x^3 + {:?} x + {:?}", pq, curve.a, curve.b);

        for g in [DihedralGroup::D3, DihedralGroup::D4, DihedralGroup::D6] {
            let n = g.rotation_order();
            let s = GroupElement::s(g);
            let id = rotations(&curve, g, n, &pq).as_ref() == Some(&pq);
            let ss = act(&curve, s, &pq).and_then(|x| act(&curve, s, &x)).ok().as_ref() == Some(&pq);
            let srs = act(&curve, s, &pq)
                .and_then(|x| act(&curve, GroupElement::r(g), &x))
                .and_then(|x| act(&curve, s, &x))
                .ok();
            let r_inv = rotations(&curve, g, n - 1, &pq);
            axioms.record(id && ss && srs.is_some() && srs == r_inv, || {
                format!("{g:?}: {}", show())
            });
        }

        let d3r = act(&curve, GroupElement::r(DihedralGroup::D3), &pq).ok();
        let d6r2 = rotations(&curve, DihedralGroup::D6, 2, &pq);
        let d3s = act(&curve, GroupElement::s(DihedralGroup::D3), &pq).ok();
        let d6s = act(&curve, GroupElement::s(DihedralGroup::D6), &pq).ok();
        restriction.record(d3r.is_some() && d3r == d6r2 && d3s.is_some() && d3s == d6s, show);

        if !is_generic(&curve, &pq) {
            continue;
        }
        let orb = orbit(&curve, DihedralGroup::D4, &pq);
        d4_orbit.record(matches!(&orb, Ok(o) if o.len() == 8), show);

        if let Ok(tri) = cyclic_orbit(&curve, DihedralGroup::D3, &pq) {
            let ls: Vec<_> = tri
                .iter()
                .map(|x| line_through(&curve, &x.first, &x.second).ok())
                .collect();
            lines.record(ls[0].is_some() && ls.iter().all(|l| *l == ls[0]), show);
        }

        let w = omega_fn(&pq.first, &pq.second).ok();
        let after = |g: GroupElement| {
            act(&curve, g, &pq)
                .ok()
                .and_then(|x| omega_fn(&x.first, &x.second).ok())
        };
        let ws = after(GroupElement::s(DihedralGroup::D4));
        let wr = after(GroupElement::r(DihedralGroup::D4));
        omega.record(w.is_some() && ws == w.map(|x| -x) && wr == w, show);

        if let Ok(o) = &orb {
            let cls: Vec<_> = o.iter().map(|x| phi4(&x.first, &x.second, &curve.a)).collect();
            let psi: Vec<_> = cls
                .iter()
                .map(|c| match c {
                    UVClass::Affine { u, v } => Some(psi_uv(&curve, u, v)),
                    UVClass::AtInfinity { .. } => None,
                })
                .collect();
            classes.record(
                cls.iter().all(|c| *c == cls[0]) && psi[0].is_some() && psi.iter().all(|c| *c == psi[0]),
                show,
            );
        }

        if let Ok(dl) = delta(&curve, &pq.first, &pq.second) {
            let third = curve.add(&pq.first, &pq.second).map(|x| curve.neg(&x));
            let ok = match (
                line_through(&curve, &pq.first, &pq.second).and_then(|l| p_line(&curve, &l)),
                third,
            ) {
                (Ok(f), Ok(r)) => {
                    let xs = [&pq.first, &pq.second, &r].map(|pt| pt.coords().map(|(x, _)| *x));
                    f.discriminant() == Some(dl.square())
                        && xs.iter().all(|x| x.map(|x| f.eval(&x).is_zero()).unwrap_or(false))
                }
                _ => false,
            };
            cubic.record(ok, show);
        }
    }
    vec![axioms, restriction, d4_orbit, lines, omega, classes, cubic]
}

/// Every suite at the given sample size.
pub fn run_all(seed: u64, samples: usize) -> Vec<SuiteReport> {
    let mut out = identity_suite(seed, samples);
    out.push(incidence_suite(seed, samples.div_ceil(5).max(20)));
    out.extend(action_suite(seed, samples));
    out
}
