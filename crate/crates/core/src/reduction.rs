//! Reduction of tower elements modulo a degree-one prime of the top field.
//!
//! A degree-one prime above `P` in `K[x]/(m1)[s]/(m2)` is fixed by choosing a
//! simple root of each reduced modulus in `k_P`, level by level.

use crate::ext::ExtElem;
use crate::field::Field;
use crate::numfield::{reduce, PrimeIdeal, QuadElem, ResidueElem};
use crate::poly::Poly;
use crate::polyalg::EXHAUSTIVE_ROOT_LIMIT;

/// Images in `k_P` of the generator of each tower level, bottom first.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeChain {
    pub prime: PrimeIdeal,
    pub roots: Vec<ResidueElem>,
}

/// Fields in a tower over `K` whose elements can be reduced at a prime chain.
pub trait Reducible: Field {
    /// Number of extension levels above `K`.
    const DEPTH: usize;

    /// Image in `k_P`, `None` if a denominator vanishes there.
    fn reduce_at(&self, chain: &PrimeChain) -> Option<ResidueElem>;

    /// A degree-one prime of the field of `template` above `prime`, where every
    /// level's reduced modulus is squarefree.
    fn degree_one_chain(template: &Self, prime: &PrimeIdeal) -> Option<PrimeChain>;
}

impl Reducible for QuadElem {
    const DEPTH: usize = 0;

    fn reduce_at(&self, chain: &PrimeChain) -> Option<ResidueElem> {
        reduce(self, &chain.prime).ok()
    }

    fn degree_one_chain(_: &Self, prime: &PrimeIdeal) -> Option<PrimeChain> {
        Some(PrimeChain {
            prime: *prime,
            roots: Vec::new(),
        })
    }
}

impl<F: Reducible> Reducible for ExtElem<F> {
    const DEPTH: usize = F::DEPTH + 1;

    fn reduce_at(&self, chain: &PrimeChain) -> Option<ResidueElem> {
        let root = chain.roots.get(F::DEPTH)?;
        let rep = self.rep().try_map(|c| c.reduce_at(chain).ok_or(()));
        rep.ok().map(|r| r.eval(root))
    }

    fn degree_one_chain(template: &Self, prime: &PrimeIdeal) -> Option<PrimeChain> {
        let ring = template.ring();
        let base = ring.modulus().lc()?.clone();
        let mut chain = F::degree_one_chain(&base, prime)?;
        let reduced: Poly<ResidueElem> = ring.modulus().try_map(|c| c.reduce_at(&chain).ok_or(())).ok()?;
        if reduced.degree() != ring.modulus().degree() || !reduced.is_squarefree() {
            return None;
        }
        let k = prime.residue_field();
        if k.order() > EXHAUSTIVE_ROOT_LIMIT {
            return None;
        }
        let root = k.elements().find(|x| reduced.eval(x).is_zero())?;
        chain.roots.push(root);
        Some(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{ExtRing, ExtRingExt};
    use crate::numfield::{primes_above, QuadFieldDesc};

    #[test]
    fn chain_through_cubic_level() {
        let k = QuadFieldDesc::eisenstein();
        // x^3 - 2 has a root mod 31 only if 2 is a cube: 4^3 = 64 = 2 mod 31
        let l = ExtRing::new(Poly::new(vec![k.int(-2), k.zero(), k.zero(), k.one()])).unwrap();
        let p31 = primes_above(k, 31).unwrap()[0];
        let chain = ExtElem::degree_one_chain(&l.gen(), &p31).unwrap();
        let t = chain.roots[0];
        assert!((t * t * t).c0 == 2);
        let e = l.gen().square() + l.embed(k.int(5));
        assert_eq!(e.reduce_at(&chain).unwrap(), t * t + p31.residue_field().int(5));
        // 2 is not a cube mod 7
        let p7 = primes_above(k, 7).unwrap()[0];
        assert!(ExtElem::degree_one_chain(&l.gen(), &p7).is_none());
    }
}
