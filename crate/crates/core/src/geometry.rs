//! Dihedral actions on `E x E`, their orbits, and the quotient maps and
//! invariants used to build rational points on the quotients.

use serde::{Deserialize, Serialize};

use crate::elliptic::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct PairPoint<F> {
    pub first: CurvePoint<F>,
    pub second: CurvePoint<F>,
}

impl<F> PairPoint<F> {
    pub fn new(first: CurvePoint<F>, second: CurvePoint<F>) -> Self {
        PairPoint { first, second }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DihedralGroup {
    D3,
    D4,
    D6,
}

impl DihedralGroup {
    /// Order of the rotation `r`.
    pub fn rotation_order(self) -> u32 {
        match self {
            DihedralGroup::D3 => 3,
            DihedralGroup::D4 => 4,
            DihedralGroup::D6 => 6,
        }
    }

    pub fn for_degree(n: u32) -> Option<Self> {
        match n {
            3 => Some(DihedralGroup::D3),
            4 => Some(DihedralGroup::D4),
            6 => Some(DihedralGroup::D6),
            _ => None,
        }
    }

    pub fn elements(self) -> impl Iterator<Item = GroupElement> {
        let n = self.rotation_order();
        (0..2).flat_map(move |j| {
            (0..n).map(move |i| GroupElement {
                group: self,
                rot: i,
                refl: j,
            })
        })
    }
}

/// `r^rot s^refl`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub group: DihedralGroup,
    pub rot: u32,
    pub refl: u32,
}

impl GroupElement {
    pub fn new(group: DihedralGroup, rot: i64, refl: u32) -> Self {
        let n = group.rotation_order() as i64;
        GroupElement {
            group,
            rot: rot.rem_euclid(n) as u32,
            refl: refl % 2,
        }
    }

    pub fn identity(group: DihedralGroup) -> Self {
        Self::new(group, 0, 0)
    }

    pub fn r(group: DihedralGroup) -> Self {
        Self::new(group, 1, 0)
    }

    pub fn s(group: DihedralGroup) -> Self {
        Self::new(group, 0, 1)
    }

    /// `self * other`, normalized with `s r = r^-1 s`.
    pub fn compose(self, other: GroupElement) -> GroupElement {
        assert_eq!(self.group, other.group, "elements of different groups");
        let k = if self.refl == 1 {
            -(other.rot as i64)
        } else {
            other.rot as i64
        };
        Self::new(self.group, self.rot as i64 + k, self.refl + other.refl)
    }

    pub fn inverse(self) -> GroupElement {
        if self.refl == 1 {
            self
        } else {
            Self::new(self.group, -(self.rot as i64), 0)
        }
    }

    pub fn pow(self, e: u32) -> GroupElement {
        (0..e).fold(Self::identity(self.group), |acc, _| acc.compose(self))
    }
}

fn rotate<F: Field>(curve: &Curve<F>, group: DihedralGroup, pq: &PairPoint<F>) -> Result<PairPoint<F>> {
    let (p, q) = (&pq.first, &pq.second);
    Ok(match group {
        DihedralGroup::D3 => PairPoint::new(q.clone(), curve.neg(&curve.add(p, q)?)),
        DihedralGroup::D6 => PairPoint::new(curve.add(p, q)?, curve.neg(p)),
        DihedralGroup::D4 => PairPoint::new(curve.neg(q), p.clone()),
    })
}

fn reflect<F: Field>(curve: &Curve<F>, group: DihedralGroup, pq: &PairPoint<F>) -> Result<PairPoint<F>> {
    let (p, q) = (&pq.first, &pq.second);
    Ok(match group {
        DihedralGroup::D3 | DihedralGroup::D6 => PairPoint::new(p.clone(), curve.neg(&curve.add(p, q)?)),
        DihedralGroup::D4 => PairPoint::new(p.clone(), curve.neg(q)),
    })
}

/// `g . (P, Q)`: `s^refl` first, then `r^rot`.
pub fn act<F: Field>(curve: &Curve<F>, g: GroupElement, pq: &PairPoint<F>) -> Result<PairPoint<F>> {
    let mut out = if g.refl == 1 {
        reflect(curve, g.group, pq)?
    } else {
        pq.clone()
    };
    for _ in 0..g.rot {
        out = rotate(curve, g.group, &out)?;
    }
    Ok(out)
}

/// Full orbit under the dihedral group, without repetitions.
pub fn orbit<F: Field>(curve: &Curve<F>, group: DihedralGroup, pq: &PairPoint<F>) -> Result<Vec<PairPoint<F>>> {
    let mut out: Vec<PairPoint<F>> = Vec::new();
    for g in group.elements() {
        let img = act(curve, g, pq)?;
        if !out.contains(&img) {
            out.push(img);
        }
    }
    Ok(out)
}

/// Orbit under the rotations only, in the order `pq, r pq, r^2 pq, ...`.
pub fn cyclic_orbit<F: Field>(curve: &Curve<F>, group: DihedralGroup, pq: &PairPoint<F>) -> Result<Vec<PairPoint<F>>> {
    let mut out = vec![pq.clone()];
    let mut cur = rotate(curve, group, pq)?;
    while cur != *pq {
        out.push(cur.clone());
        cur = rotate(curve, group, &cur)?;
    }
    Ok(out)
}

/// Point `[a : b : c]` of the dual plane: the line `aX + bY + cZ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Field> DualPoint<F> {
    /// Scales so the first non-zero coordinate is 1.
    pub fn new(a: F, b: F, c: F) -> Result<Self> {
        let lead = [&a, &b, &c]
            .into_iter()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::InvalidInput("[0:0:0] is not a projective point".into()))?;
        let inv = lead
            .inv()
            .ok_or_else(|| Error::NonInvertible("line coordinate".into()))?;
        Ok(DualPoint {
            a: a * inv.clone(),
            b: b * inv.clone(),
            c: c * inv,
        })
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }
}

/// The line through `P` and `Q` (the tangent when they coincide). Lines
/// through `O` are vertical.
pub fn line_through<F: Field>(curve: &Curve<F>, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<DualPoint<F>> {
    let vertical = |x: &F| DualPoint::new(x.one_like(), x.zero_like(), -x.clone());
    let ((x1, y1), (x2, y2)) = match (p.coords(), q.coords()) {
        (None, None) => return Err(Error::UndefinedLine),
        (Some((x, _)), None) | (None, Some((x, _))) => return vertical(x),
        (Some(a), Some(b)) => (a, b),
    };
    let slope = if (x1.clone() - x2.clone()).is_zero() {
        if !(y1.clone() - y2.clone()).is_zero() || y1.is_zero() {
            return vertical(x1);
        }
        let num = x1.int_like(3) * x1.square() + curve.a.clone();
        num.div(&(x1.int_like(2) * y1.clone()))
            .ok_or_else(|| Error::NonInvertible("2y in tangent".into()))?
    } else {
        (y2.clone() - y1.clone())
            .div(&(x2.clone() - x1.clone()))
            .ok_or_else(|| Error::NonInvertible("x2 - x1 in chord".into()))?
    };
    let intercept = y1.clone() - slope.clone() * x1.clone();
    DualPoint::new(slope, -x1.one_like(), intercept)
}

/// `x^3 - ((a x + c)/b)^2 + A x + B`, whose roots are the abscissae of the
/// intersection of the line with the curve.
pub fn p_line<F: Field>(curve: &Curve<F>, l: &DualPoint<F>) -> Result<Poly<F>> {
    let b_inv = l.b.inv().ok_or(Error::VerticalLine)?;
    let lin = Poly::new(vec![l.c.clone() * b_inv.clone(), l.a.clone() * b_inv]);
    Ok(curve.rhs_poly() - lin.clone() * lin)
}

/// `(x(P) - x(Q)) (x(P) - x(R)) (x(Q) - x(R))` with `R = -P - Q`.
pub fn delta<F: Field>(curve: &Curve<F>, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<F> {
    let r = curve.neg(&curve.add(p, q)?);
    let (Some((xp, _)), Some((xq, _)), Some((xr, _))) = (p.coords(), q.coords(), r.coords()) else {
        return Err(Error::Degenerate("delta needs P, Q, -P-Q finite".into()));
    };
    let d = (xp.clone() - xq.clone()) * (xp.clone() - xr.clone()) * (xq.clone() - xr.clone());
    if d.is_zero() {
        return Err(Error::Degenerate("P, Q, -P-Q are not pairwise distinct".into()));
    }
    Ok(d)
}

/// A point of the plane quotient by the `D4` action: the affine chart
/// `[u : v : 1]` or a point `[a : b : 0]` on the line at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum UVClass<F> {
    Affine { u: F, v: F },
    AtInfinity { a: F, b: F },
}

/// `[x(P) + x(Q) : x(P) x(Q) : 1]`. `(O, O)` goes to `[0 : 1 : 0]`, and a
/// mixed pair `(O, Q)` to its limit `[1 : x(Q) : 0]`.
pub fn phi4<F: Field>(p: &CurvePoint<F>, q: &CurvePoint<F>, template: &F) -> UVClass<F> {
    match (p.coords(), q.coords()) {
        (Some((x1, _)), Some((x2, _))) => UVClass::Affine {
            u: x1.clone() + x2.clone(),
            v: x1.clone() * x2.clone(),
        },
        (None, None) => UVClass::AtInfinity {
            a: template.zero_like(),
            b: template.one_like(),
        },
        (Some((x, _)), None) | (None, Some((x, _))) => UVClass::AtInfinity {
            a: x.one_like(),
            b: x.clone(),
        },
    }
}

/// `y(P) y(Q) (x(P) - x(Q))`.
pub fn omega_fn<F: Field>(p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<F> {
    match (p.coords(), q.coords()) {
        (Some((x1, y1)), Some((x2, y2))) => Ok(y1.clone() * y2.clone() * (x1.clone() - x2.clone())),
        _ => Err(Error::InvalidInput("omega is defined on finite points only".into())),
    }
}

/// `B u^3 + v^3 + A u^2 v - 3 B u v - 2 A v^2 + A B u + A^2 v + B^2`.
pub fn psi_uv<F: Field>(curve: &Curve<F>, u: &F, v: &F) -> F {
    let (a, b) = (&curve.a, &curve.b);
    let n = |k: i64| a.int_like(k);
    b.clone() * u.pow(3) + v.pow(3) + a.clone() * u.square() * v.clone()
        - n(3) * b.clone() * u.clone() * v.clone()
        - n(2) * a.clone() * v.square()
        + a.clone() * b.clone() * u.clone()
        + a.square() * v.clone()
        + b.square()
}

/// Point `[a' : b' : c']` of the weighted plane with weights `(1, 2, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Field> WeightedPoint<F> {
    /// Scales by `l` on the weight-one slots and `l^2` on the middle slot so
    /// that the first non-zero of `a', c'` is 1.
    pub fn new(a: F, b: F, c: F) -> Result<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::InvalidInput("[0:0:0] is not a weighted projective point".into()));
        }
        let Some(lead) = [&a, &c].into_iter().find(|x| !x.is_zero()) else {
            return Ok(WeightedPoint { a, b, c });
        };
        let l = lead
            .inv()
            .ok_or_else(|| Error::NonInvertible("weighted coordinate".into()))?;
        Ok(WeightedPoint {
            a: a * l.clone(),
            b: b * l.square(),
            c: c * l,
        })
    }
}

/// `[a : b : c] -> [a : b^2 : c]`.
pub fn cover_d3_to_d6<F: Field>(l: &DualPoint<F>) -> Result<WeightedPoint<F>> {
    WeightedPoint::new(l.a.clone(), l.b.square(), l.c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;
    use num_rational::BigRational;

    fn e01() -> Curve<BigRational> {
        Curve::new(int(0), int(1)).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint<BigRational> {
        CurvePoint::affine(int(x), int(y))
    }

    #[test]
    fn action_examples() {
        let e = e01();
        let pq = PairPoint::new(pt(2, 3), pt(0, 1));
        let r3 = act(&e, GroupElement::r(DihedralGroup::D3), &pq).unwrap();
        assert_eq!(r3, PairPoint::new(pt(0, 1), pt(-1, 0)));
        let r4 = act(&e, GroupElement::r(DihedralGroup::D4), &pq).unwrap();
        assert_eq!(r4, PairPoint::new(pt(0, -1), pt(2, 3)));
        let r6_3 = act(&e, GroupElement::new(DihedralGroup::D6, 3, 0), &pq).unwrap();
        assert_eq!(r6_3, PairPoint::new(pt(2, -3), pt(0, -1)));
    }

    #[test]
    fn orbit_examples() {
        let e = e01();
        let oo = PairPoint::new(CurvePoint::Infinity, CurvePoint::Infinity);
        assert_eq!(orbit(&e, DihedralGroup::D4, &oo).unwrap(), vec![oo.clone()]);
        let pq = PairPoint::new(pt(2, 3), pt(0, 1));
        let z3 = cyclic_orbit(&e, DihedralGroup::D3, &pq).unwrap();
        assert_eq!(
            z3,
            vec![
                pq.clone(),
                PairPoint::new(pt(0, 1), pt(-1, 0)),
                PairPoint::new(pt(-1, 0), pt(2, 3))
            ]
        );
    }

    #[test]
    fn group_element_normal_form() {
        for g in [DihedralGroup::D3, DihedralGroup::D4, DihedralGroup::D6] {
            let r = GroupElement::r(g);
            let s = GroupElement::s(g);
            let id = GroupElement::identity(g);
            assert_eq!(r.pow(g.rotation_order()), id);
            assert_eq!(s.compose(s), id);
            assert_eq!(s.compose(r).compose(s), r.inverse());
            assert_eq!(g.elements().count(), 2 * g.rotation_order() as usize);
        }
    }

    #[test]
    fn line_examples() {
        let e = e01();
        let l = line_through(&e, &pt(2, 3), &pt(0, 1)).unwrap();
        assert_eq!(
            l,
            DualPoint {
                a: int(1),
                b: int(-1),
                c: int(1)
            }
        );
        let p = p_line(&e, &l).unwrap();
        assert_eq!(p, Poly::new(vec![int(0), int(-2), int(-1), int(1)]));
        let t = line_through(&e, &pt(0, 1), &pt(0, 1)).unwrap();
        assert_eq!(
            t,
            DualPoint {
                a: int(0),
                b: int(1),
                c: int(-1)
            }
        );
        assert_eq!(p_line(&e, &t).unwrap(), Poly::new(vec![int(0), int(0), int(0), int(1)]));
        let v = line_through(&e, &pt(2, 3), &CurvePoint::Infinity).unwrap();
        assert_eq!(
            v,
            DualPoint {
                a: int(1),
                b: int(0),
                c: int(-2)
            }
        );
        assert_eq!(p_line(&e, &v), Err(Error::VerticalLine));
        assert_eq!(
            line_through(&e, &CurvePoint::Infinity, &CurvePoint::Infinity),
            Err(Error::UndefinedLine)
        );
        let y0 = DualPoint::new(int(0), int(1), int(0)).unwrap();
        assert_eq!(p_line(&e, &y0).unwrap(), e.rhs_poly());
    }

    #[test]
    fn delta_examples() {
        let e = e01();
        assert_eq!(delta(&e, &pt(2, 3), &pt(0, 1)).unwrap(), int(6));
        let disc = p_line(&e, &line_through(&e, &pt(2, 3), &pt(0, 1)).unwrap())
            .unwrap()
            .discriminant()
            .unwrap();
        assert_eq!(disc, int(36));
        assert!(matches!(delta(&e, &pt(2, 3), &pt(2, 3)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn phi4_omega_psi_examples() {
        let e = e01();
        let t = int(0);
        assert_eq!(phi4(&pt(2, 3), &pt(0, 1), &t), UVClass::Affine { u: int(2), v: int(0) });
        assert_eq!(
            phi4(&CurvePoint::Infinity, &CurvePoint::Infinity, &t),
            UVClass::AtInfinity { a: int(0), b: int(1) }
        );
        assert_eq!(
            phi4(&pt(-1, 0), &pt(-1, 0), &t),
            UVClass::Affine { u: int(-2), v: int(1) }
        );
        assert_eq!(omega_fn(&pt(2, 3), &pt(0, 1)).unwrap(), int(6));
        assert_eq!(psi_uv(&e, &int(2), &int(0)), int(9));
        let pq = PairPoint::new(pt(2, 3), pt(0, 1));
        let spq = act(&e, GroupElement::s(DihedralGroup::D4), &pq).unwrap();
        assert_eq!(omega_fn(&spq.first, &spq.second).unwrap(), int(-6));
    }

    #[test]
    fn cover_examples() {
        let l = DualPoint::new(int(1), int(-1), int(1)).unwrap();
        assert_eq!(
            cover_d3_to_d6(&l).unwrap(),
            WeightedPoint {
                a: int(1),
                b: int(1),
                c: int(1)
            }
        );
        let l = DualPoint::new(int(1), int(0), int(2)).unwrap();
        assert_eq!(
            cover_d3_to_d6(&l).unwrap(),
            WeightedPoint {
                a: int(1),
                b: int(0),
                c: int(2)
            }
        );
        assert_eq!(
            WeightedPoint::new(int(2), int(2), int(2)).unwrap(),
            WeightedPoint::new(int(1), int(1) / int(2), int(1)).unwrap()
        );
    }
}
