//! The rational curves of lines `Q_E` and of `D4`-classes `C_E`, their
//! parametrizations, and the discriminants that decide whether a parameter
//! lifts to the cyclic quotient.

use serde::Serialize;

use crate::elliptic::Curve;
use crate::error::{Error, Result};
use crate::ext::{ExtRing, ExtRingExt};
use crate::field::Field;
use crate::geometry::{p_line, DualPoint, UVClass};
use crate::numfield::QuadElem;
use crate::poly::Poly;

/// `a^4 - 3A b^4 + 6 a b^2 c`.
pub fn quartic_form<F: Field>(curve: &Curve<F>, l: &DualPoint<F>) -> F {
    eval_quartic(&curve.a, &l.a, &l.b, &l.c)
}

fn eval_quartic<F: Field>(a_coef: &F, a: &F, b: &F, c: &F) -> F {
    let b2 = b.square();
    a.pow(4) - a.int_like(3) * a_coef.clone() * b2.square() + a.int_like(6) * a.clone() * b2 * c.clone()
}

/// `U^3 - 3UVW + A U W^2 + 2B W^3`.
pub fn cubic_form<F: Field>(curve: &Curve<F>, u: &F, v: &F, w: &F) -> F {
    u.pow(3) - u.int_like(3) * u.clone() * v.clone() * w.clone()
        + curve.a.clone() * u.clone() * w.square()
        + u.int_like(2) * curve.b.clone() * w.pow(3)
}

fn nonzero<F: Field>(lambda: &F) -> Result<()> {
    if lambda.is_zero() {
        Err(Error::InvalidParam("parameter must be non-zero".into()))
    } else {
        Ok(())
    }
}

/// `[6 l^2 : 6 l^3 : 3A l^4 - 1]`.
pub fn quartic_point<F: Field>(curve: &Curve<F>, lambda: &F) -> Result<DualPoint<F>> {
    nonzero(lambda)?;
    let l2 = lambda.square();
    DualPoint::new(
        lambda.int_like(6) * l2.clone(),
        lambda.int_like(6) * l2.clone() * lambda.clone(),
        lambda.int_like(3) * curve.a.clone() * l2.square() - lambda.one_like(),
    )
}

/// The cubic whose roots are the abscissae cut out by `quartic_point(l)`.
pub fn p_lambda<F: Field>(curve: &Curve<F>, lambda: &F) -> Result<Poly<F>> {
    p_line(curve, &quartic_point(curve, lambda)?)
}

/// [`p_lambda`] written in terms of `w = l^2`:
/// `x^3 - (6 w x + 3A w^2 - 1)^2 / (36 w^3) + A x + B`.
pub fn p_lambda_squared<F: Field>(curve: &Curve<F>, w: &F) -> Result<Poly<F>> {
    nonzero(w)?;
    let den = (w.int_like(36) * w.pow(3))
        .inv()
        .ok_or_else(|| Error::NonInvertible("36 w^3".into()))?;
    let lin = Poly::new(vec![
        w.int_like(3) * curve.a.clone() * w.square() - w.one_like(),
        w.int_like(6) * w.clone(),
    ]);
    Ok(curve.rhs_poly() - (lin.clone() * lin).scale(&den))
}

/// `27 A^2 w^4 - 108 B w^3 - 18 A w^2 - 1` at `w = l^2`.
pub fn quartic_disc_factor<F: Field>(curve: &Curve<F>, w: &F) -> F {
    let n = |k: i64| w.int_like(k);
    n(27) * curve.a.square() * w.pow(4)
        - n(108) * curve.b.clone() * w.pow(3)
        - n(18) * curve.a.clone() * w.square()
        - w.one_like()
}

/// `-3888 (27 A^2 l^8 - 108 B l^6 - 18 A l^4 - 1)^2`, the discriminant of `36 l^3 p_l`.
pub fn delta_lambda<F: Field>(curve: &Curve<F>, lambda: &F) -> Result<F> {
    nonzero(lambda)?;
    Ok(lambda.int_like(-3888) * quartic_disc_factor(curve, &lambda.square()).square())
}

/// `[l : (l^3 + A l + 2B)/(3 l) : 1]`, and `[0 : 1 : 0]` at `l = 0`.
pub fn cubic_point<F: Field>(curve: &Curve<F>, lambda: &F) -> UVClass<F> {
    let Some(inv) = (lambda.int_like(3) * lambda.clone()).inv() else {
        return UVClass::AtInfinity {
            a: lambda.zero_like(),
            b: lambda.one_like(),
        };
    };
    let v = (lambda.pow(3) + curve.a.clone() * lambda.clone() + lambda.int_like(2) * curve.b.clone()) * inv;
    UVClass::Affine { u: lambda.clone(), v }
}

/// `x^2 - u x + v`, whose roots are the abscissae of a pair in the class.
pub fn q_uv<F: Field>(u: &F, v: &F) -> Poly<F> {
    Poly::new(vec![v.clone(), -u.clone(), u.one_like()])
}

/// `-(l^3 + A l - B)^2 (l^3 + 4A l + 8B)^2 / (81 l^4)`.
pub fn omega_lambda<F: Field>(curve: &Curve<F>, lambda: &F) -> Result<F> {
    nonzero(lambda)?;
    let (a, b) = (&curve.a, &curve.b);
    let l3 = lambda.pow(3);
    let f1 = l3.clone() + a.clone() * lambda.clone() - b.clone();
    let f2 = l3 + lambda.int_like(4) * a.clone() * lambda.clone() + lambda.int_like(8) * b.clone();
    let den = lambda.int_like(81) * lambda.pow(4);
    (-(f1.square() * f2.square()))
        .div(&den)
        .ok_or_else(|| Error::NonInvertible("81 l^4".into()))
}

/// Parameter of a cyclic lift: `l` for `n = 3, 4`, and `w` with `l = sqrt(w)`
/// for `n = 6`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftParam {
    pub n: u32,
    pub value: QuadElem,
}

impl LiftParam {
    pub fn new(n: u32, value: QuadElem) -> Result<Self> {
        if !matches!(n, 3 | 4 | 6) {
            return Err(Error::InvalidInput(format!("lifts exist for n = 3, 4, 6, not {n}")));
        }
        if value.is_zero() {
            return Err(Error::InvalidParam("parameter must be non-zero".into()));
        }
        if n == 6 && value.is_square() {
            return Err(Error::InvalidParam(format!("{value} is a square in K")));
        }
        Ok(LiftParam { n, value })
    }
}

/// The discriminant whose squareness in `K` decides [`lift_is_rational`].
pub fn lift_discriminant(curve: &Curve<QuadElem>, param: &LiftParam) -> Result<QuadElem> {
    let d = curve.a.d();
    let needed = if param.n == 4 { -1 } else { -3 };
    if d != needed {
        return Err(Error::InvalidInput(format!(
            "n = {} needs K = Q(sqrt {needed}), got d = {d}",
            param.n
        )));
    }
    let disc = match param.n {
        3 => delta_lambda(curve, &param.value)?,
        4 => omega_lambda(curve, &param.value)?,
        _ => param.value.int_like(-3888) * quartic_disc_factor(curve, &param.value).square(),
    };
    if disc.is_zero() {
        return Err(Error::RamifiedParam(format!(
            "discriminant vanishes at {}",
            param.value
        )));
    }
    Ok(disc)
}

/// Whether the parameter's point on the dihedral quotient lifts to a
/// `K`-point of the cyclic quotient. Returns the square root of the relevant
/// discriminant when it does.
pub fn lift_is_rational(curve: &Curve<QuadElem>, param: &LiftParam) -> Result<Option<QuadElem>> {
    let disc = lift_discriminant(curve, param)?;
    if param.n == 6 && param.value.is_square() {
        return Ok(None);
    }
    Ok(disc.sqrt())
}

/// Outcome of [`verify_incidence_lemmas`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceReport {
    pub tangent_quartic_is_psi3_squared: bool,
    pub cubic_at_origin_pair: bool,
    pub cubic_at_doubled_two_torsion: bool,
    pub cubic_at_mixed_two_torsion: bool,
}

impl IncidenceReport {
    pub fn all_hold(&self) -> bool {
        self.tangent_quartic_is_psi3_squared
            && self.cubic_at_origin_pair
            && self.cubic_at_doubled_two_torsion
            && self.cubic_at_mixed_two_torsion
    }
}

/// `p0(u) + p1(u) v` modulo `v^2 = u^3 + A u + B`.
#[derive(Clone)]
struct CurveFunction<F> {
    p0: Poly<F>,
    p1: Poly<F>,
    f: Poly<F>,
}

impl<F: Field> CurveFunction<F> {
    fn new(p0: Poly<F>, p1: Poly<F>, f: &Poly<F>) -> Self {
        CurveFunction { p0, p1, f: f.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        let p0 = self.p0.clone() * o.p0.clone() + self.p1.clone() * o.p1.clone() * self.f.clone();
        let p1 = self.p0.clone() * o.p1.clone() + self.p1.clone() * o.p0.clone();
        CurveFunction {
            p0,
            p1,
            f: self.f.clone(),
        }
    }
    fn add(&self, o: &Self) -> Self {
        CurveFunction {
            p0: self.p0.clone() + o.p0.clone(),
            p1: self.p1.clone() + o.p1.clone(),
            f: self.f.clone(),
        }
    }
    fn scale(&self, c: &F) -> Self {
        CurveFunction {
            p0: self.p0.scale(c),
            p1: self.p1.scale(c),
            f: self.f.clone(),
        }
    }
}

/// Checks, as polynomial identities on the curve, that the tangent lines lie
/// on the quartic with `Q_E(tangent at (u, v)) = psi3(u)^2`, and that the
/// images of the pairs of two-torsion points lie on the cubic.
pub fn verify_incidence_lemmas<F: Field>(curve: &Curve<F>) -> IncidenceReport {
    let t = &curve.a;
    let n = |k: i64| t.int_like(k);
    let f = curve.rhs_poly();
    let c = |v: Vec<F>| Poly::new(v);
    let func = |p0: Poly<F>, p1: Poly<F>| CurveFunction::new(p0, p1, &f);
    // [3u^2 + A : -2v : -3u^3 - Au + 2v^2]
    let a = func(c(vec![curve.a.clone(), n(0), n(3)]), Poly::zero());
    let b = func(Poly::zero(), c(vec![n(-2)]));
    let cc = func(c(vec![n(0), -curve.a.clone(), n(0), n(-3)]), Poly::zero()).add(
        &func(Poly::zero(), c(vec![n(1)]))
            .mul(&func(Poly::zero(), c(vec![n(1)])))
            .scale(&n(2)),
    );
    let b2 = b.mul(&b);
    let a2 = a.mul(&a);
    let q = a2
        .mul(&a2)
        .add(&b2.mul(&b2).scale(&(n(-3) * curve.a.clone())))
        .add(&a.mul(&b2).mul(&cc).scale(&n(6)));
    let psi3 = curve.psi3();
    let tangent = q.p1.is_zero() && q.p0 == psi3.clone() * psi3;

    let origin = cubic_form(curve, &n(0), &n(1), &n(0)).is_zero();
    let (doubled, mixed) = match ExtRing::new(f.clone()) {
        Ok(ring) => {
            let e = curve.map(|x| ring.embed(x.clone()));
            let alpha = ring.gen();
            let one = ring.embed(n(1));
            let doubled = cubic_form(&e, &(ring.embed(n(2)) * alpha.clone()), &alpha.square(), &one).is_zero();
            // B / alpha = -(alpha^2 + A), which also covers alpha = 0 when B = 0.
            let v = alpha.square() + ring.embed(curve.a.clone());
            let mixed = cubic_form(&e, &(-alpha), &v, &one).is_zero();
            (doubled, mixed)
        }
        Err(_) => (false, false),
    };
    IncidenceReport {
        tangent_quartic_is_psi3_squared: tangent,
        cubic_at_origin_pair: origin,
        cubic_at_doubled_two_torsion: doubled,
        cubic_at_mixed_two_torsion: mixed,
    }
}
