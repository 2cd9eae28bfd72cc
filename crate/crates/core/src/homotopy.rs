//! Null-homotopies and factorization through trivial objects.
//!
//! A witness for `f: X → Y` is a tuple `h^0, …, h^{n-1}` with
//! `h^j: X^j → Y^{j+1}` at twist −1 for `j < n−1` and `h^{n-1}: X^{n-1} → Y^0`
//! at twist 0. Composites are read in application order throughout.

use std::fmt;

use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::functors::theta;
use crate::matrix::TwistedMatrix;
use crate::solve::{self, BlockShape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyWitness {
    pub maps: Vec<TwistedMatrix>,
}

impl HomotopyWitness {
    pub fn zero(x: &NFactorization, y: &NFactorization) -> Self {
        HomotopyWitness { maps: solve::zero_blocks(x.ring(), &witness_shapes(x, y)) }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(TwistedMatrix::is_zero)
    }
}

impl fmt::Display for HomotopyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.maps.iter().enumerate() {
            writeln!(f, "h^{}:", i)?;
            write!(f, "{}", h)?;
        }
        Ok(())
    }
}

/// Outcome of a null-homotopy search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyVerdict {
    Witness(HomotopyWitness),
    /// No witness exists (exact solve over a commutative ring).
    NoWitness,
    /// No witness with entries of degree at most the given bound.
    NoWitnessUpToDegree(usize),
}

impl HomotopyVerdict {
    pub fn witness(&self) -> Option<&HomotopyWitness> {
        match self {
            HomotopyVerdict::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, HomotopyVerdict::Witness(_))
    }

    pub fn is_definitive(&self) -> bool {
        !matches!(self, HomotopyVerdict::NoWitnessUpToDegree(_))
    }
}

pub fn witness_shapes(x: &NFactorization, y: &NFactorization) -> Vec<BlockShape> {
    let n = x.n();
    (0..n)
        .map(|j| {
            let tw = if j + 1 == n { 0 } else { -1 };
            BlockShape::new(x.rank(j), y.rank(j + 1), tw)
        })
        .collect()
}

fn chain(parts: &[&TwistedMatrix]) -> Result<TwistedMatrix> {
    TwistedMatrix::compose_all(parts)
}

/// Components of the morphism determined by a witness.
fn reconstruct_components(x: &NFactorization, y: &NFactorization, h: &[TwistedMatrix]) -> Result<Vec<TwistedMatrix>> {
    let n = x.n();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = TwistedMatrix::zero(x.ring(), x.rank(i), y.rank(i), 0);
        let y_head = y.composite(0, i)?;
        for (j, hj) in h.iter().enumerate().skip(i) {
            let term = chain(&[&x.composite(i, j)?, hj, &y.composite(j + 1, n)?, &y_head])?;
            acc = add_term(acc, term)?;
        }
        if i > 0 {
            let x_tail = x.composite(i, n)?;
            for (j, hj) in h.iter().enumerate().take(i) {
                let term = chain(&[&x_tail, &x.composite(0, j)?, hj, &y.composite(j + 1, i)?])?;
                acc = add_term(acc, term)?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

fn add_term(acc: TwistedMatrix, term: TwistedMatrix) -> Result<TwistedMatrix> {
    if term.twist() != 0 {
        return Err(Error::Internal(format!("homotopy term has twist {}", term.twist())));
    }
    acc.add(&term)
}

fn check_witness(x: &NFactorization, y: &NFactorization, w: &HomotopyWitness) -> Result<()> {
    if x.n() != y.n() || w.maps.len() != x.n() {
        return Err(Error::Shape("witness length does not match n".into()));
    }
    for (h, s) in w.maps.iter().zip(witness_shapes(x, y)) {
        if h.shape() != (s.rows, s.cols) || h.twist() != s.twist {
            return Err(Error::Shape(format!(
                "witness map is {}x{} at twist {}, expected {}x{} at twist {}",
                h.rows(),
                h.cols(),
                h.twist(),
                s.rows,
                s.cols,
                s.twist
            )));
        }
    }
    Ok(())
}

/// The morphism `X → Y` determined by a homotopy witness.
pub fn reconstruct_from_witness(x: &NFactorization, y: &NFactorization, w: &HomotopyWitness) -> Result<FactorMorphism> {
    check_witness(x, y, w)?;
    let comps = reconstruct_components(x, y, &w.maps)?;
    Ok(FactorMorphism::from_parts(x.clone(), y.clone(), comps))
}

/// Initial degree bound of the skew search.
fn initial_bound(f: &FactorMorphism) -> usize {
    let d = f
        .source()
        .max_degree()
        .max(f.target().max_degree())
        .max(f.components().iter().map(TwistedMatrix::max_degree).max().unwrap_or(-1))
        .max(0) as usize;
    d + f.ring().omega_degree()
}

/// Decides whether `f` is null-homotopic.
///
/// Over a commutative ring the answer is definitive. Over a skew ring the
/// unknowns are searched up to a degree bound that is raised twice by
/// `deg ω`; every witness returned is re-verified.
pub fn is_p_null_homotopic(f: &FactorMorphism) -> Result<HomotopyVerdict> {
    let (x, y) = (f.source(), f.target());
    let ring = f.ring();
    let shapes = witness_shapes(x, y);
    let map = |h: &[TwistedMatrix]| reconstruct_components(x, y, h);
    let found = if ring.is_commutative() {
        match solve::solve_linear(ring, &shapes, f.components(), map)? {
            Some(h) => h,
            None => return Ok(HomotopyVerdict::NoWitness),
        }
    } else {
        let mut bound = initial_bound(f);
        let step = ring.omega_degree();
        let mut found = None;
        for attempt in 0..3 {
            if attempt > 0 {
                bound += step;
            }
            if let Some(h) = solve::solve_bounded(ring, &shapes, f.components(), bound, map)? {
                found = Some(h);
                break;
            }
        }
        match found {
            Some(h) => h,
            None => return Ok(HomotopyVerdict::NoWitnessUpToDegree(bound)),
        }
    };
    let w = HomotopyWitness { maps: found };
    if reconstruct_from_witness(x, y, &w)?.components() != f.components() {
        return Err(Error::Internal("homotopy witness does not reproduce the morphism".into()));
    }
    Ok(HomotopyVerdict::Witness(w))
}

/// Witness for `g ∘ f` (first `f`, then `g`) from a witness for `f`.
pub fn transport_after(w: &HomotopyWitness, g: &FactorMorphism) -> Result<HomotopyWitness> {
    let n = g.n();
    let maps = w
        .maps
        .iter()
        .enumerate()
        .map(|(j, h)| h.compose(g.component((j + 1) % n)))
        .collect::<Result<_>>()?;
    Ok(HomotopyWitness { maps })
}

/// Witness for `f ∘ k` (first `k`, then `f`) from a witness for `f`.
pub fn transport_before(k: &FactorMorphism, w: &HomotopyWitness) -> Result<HomotopyWitness> {
    let maps = w
        .maps
        .iter()
        .enumerate()
        .map(|(j, h)| k.component(j).compose(h))
        .collect::<Result<_>>()?;
    Ok(HomotopyWitness { maps })
}

/// A factorization `f = u·b` through `T = θ^0(P^0) ⊕ ⋯ ⊕ θ^{n-1}(P^{n-1})`.
#[derive(Clone, Debug)]
pub struct TrivialFactorization {
    pub middle: NFactorization,
    pub into: FactorMorphism,
    pub out: FactorMorphism,
    /// Ranks of `P^0, …, P^{n-1}`.
    pub ranks: Vec<usize>,
}

/// Rank of the free module `P^i` used for the `i`-th summand.
fn summand_rank(x: &NFactorization, i: usize) -> usize {
    let n = x.n();
    x.rank((i + n - 1) % n)
}

/// Components of the canonical map `X → θ^i(P)`, `P = X^{i-1}`.
pub fn unit_to_theta(x: &NFactorization, i: usize) -> Result<Vec<TwistedMatrix>> {
    let n = x.n();
    let ring = x.ring();
    let mut g = Vec::with_capacity(n);
    if i == 0 {
        for j in 0..n {
            g.push(x.composite(j, n - 1)?);
        }
        return Ok(g);
    }
    // D_{n-1}·D_0⋯D_{i-2} brought back to twist 0
    let wrap = x.map(n - 1).mul(&x.composite(0, i - 1)?)?.twist_matrix(-1).with_twist(0);
    for j in 0..n {
        let c = if j + 1 < i {
            x.composite(j, i - 1)?
        } else if j + 1 == i {
            TwistedMatrix::identity(ring, x.rank(j))
        } else {
            x.composite(j, n - 1)?.mul(&wrap)?
        };
        g.push(c);
    }
    Ok(g)
}

/// Components of the morphism `θ^i(P) → Y` determined by `c: P → Y^i`.
pub fn from_theta(y: &NFactorization, i: usize, c: &TwistedMatrix) -> Result<Vec<TwistedMatrix>> {
    let n = y.n();
    let mut b = vec![None; n];
    if i == 0 {
        for (j, slot) in b.iter_mut().enumerate() {
            *slot = Some(c.mul(&y.composite(0, j)?)?);
        }
    } else {
        for (j, slot) in b.iter_mut().enumerate().skip(i) {
            *slot = Some(c.mul(&y.composite(i, j)?)?);
        }
        let b0 = c
            .mul(&y.composite(i, n - 1)?)?
            .twist_matrix(1)
            .mul(y.map(n - 1))?
            .with_twist(0);
        for (j, slot) in b.iter_mut().enumerate().take(i) {
            *slot = Some(b0.mul(&y.composite(0, j)?)?);
        }
    }
    Ok(b.into_iter().map(|m| m.expect("filled")).collect())
}

/// The trivial object `T` and the canonical map `X → T`.
pub fn trivial_hull(x: &NFactorization) -> Result<(NFactorization, FactorMorphism, Vec<usize>)> {
    let n = x.n();
    let ring = x.ring();
    let ranks: Vec<usize> = (0..n).map(|i| summand_rank(x, i)).collect();
    let parts: Vec<NFactorization> = (0..n).map(|i| theta(ring, n, i, ranks[i])).collect::<Result<_>>()?;
    let t = NFactorization::direct_sum_all(ring, n, &parts)?;
    let units: Vec<Vec<TwistedMatrix>> = (0..n).map(|i| unit_to_theta(x, i)).collect::<Result<_>>()?;
    let comps = (0..n)
        .map(|j| {
            let refs: Vec<&TwistedMatrix> = units.iter().map(|u| &u[j]).collect();
            TwistedMatrix::hstack(&refs)
        })
        .collect::<Result<Vec<_>>>()?;
    let u = FactorMorphism::new(x, &t, comps)?;
    Ok((t, u, ranks))
}

/// Components of `u·b` where `b: T → Y` is determined by `cs`.
fn through_hull(units: &[Vec<TwistedMatrix>], y: &NFactorization, cs: &[TwistedMatrix]) -> Result<Vec<TwistedMatrix>> {
    let n = y.n();
    let bs: Vec<Vec<TwistedMatrix>> = cs.iter().enumerate().map(|(i, c)| from_theta(y, i, c)).collect::<Result<_>>()?;
    (0..n)
        .map(|j| {
            let mut acc = units[0][j].mul(&bs[0][j])?;
            for i in 1..n {
                acc = acc.add(&units[i][j].mul(&bs[i][j])?)?;
            }
            Ok(acc)
        })
        .collect()
}

fn hull_shapes(x: &NFactorization, y: &NFactorization) -> Vec<BlockShape> {
    (0..x.n()).map(|i| BlockShape::new(summand_rank(x, i), y.rank(i), 0)).collect()
}

/// Assembles the factorization data from maps `c_i: P^i → Y^i`.
pub fn trivial_factorization(x: &NFactorization, y: &NFactorization, cs: &[TwistedMatrix]) -> Result<TrivialFactorization> {
    let n = x.n();
    let (t, u, ranks) = trivial_hull(x)?;
    let bs: Vec<Vec<TwistedMatrix>> = cs.iter().enumerate().map(|(i, c)| from_theta(y, i, c)).collect::<Result<_>>()?;
    let comps = (0..n)
        .map(|j| {
            let refs: Vec<&TwistedMatrix> = bs.iter().map(|b| &b[j]).collect();
            TwistedMatrix::vstack(&refs)
        })
        .collect::<Result<Vec<_>>>()?;
    let b = FactorMorphism::new(&t, y, comps)?;
    Ok(TrivialFactorization { middle: t, into: u, out: b, ranks })
}

/// The factorization through trivial objects induced by a witness.
pub fn witness_to_factorization(x: &NFactorization, y: &NFactorization, w: &HomotopyWitness) -> Result<TrivialFactorization> {
    check_witness(x, y, w)?;
    let n = x.n();
    let cs: Vec<TwistedMatrix> = (0..n).map(|i| w.maps[(i + n - 1) % n].clone().with_twist(0)).collect();
    trivial_factorization(x, y, &cs)
}

/// Searches for a factorization of `f` through a sum of trivial objects,
/// by solving `f = u·b` for `b` out of the canonical hull `u: X → T`.
/// Over a skew ring the search is degree-bounded like
/// [`is_p_null_homotopic`].
pub fn factors_through_trivials(f: &FactorMorphism) -> Result<Option<TrivialFactorization>> {
    let (x, y) = (f.source(), f.target());
    let ring = f.ring();
    let n = x.n();
    let units: Vec<Vec<TwistedMatrix>> = (0..n).map(|i| unit_to_theta(x, i)).collect::<Result<_>>()?;
    let shapes = hull_shapes(x, y);
    let map = |cs: &[TwistedMatrix]| through_hull(&units, y, cs);
    let cs = if ring.is_commutative() {
        solve::solve_linear(ring, &shapes, f.components(), map)?
    } else {
        let mut bound = initial_bound(f);
        let mut found = None;
        for attempt in 0..3 {
            if attempt > 0 {
                bound += ring.omega_degree();
            }
            found = solve::solve_bounded(ring, &shapes, f.components(), bound, map)?;
            if found.is_some() {
                break;
            }
        }
        found
    };
    let Some(cs) = cs else { return Ok(None) };
    let tf = trivial_factorization(x, y, &cs)?;
    if tf.into.then(&tf.out)?.components() != f.components() {
        return Err(Error::Internal("trivial factorization does not reproduce the morphism".into()));
    }
    Ok(Some(tf))
}

/// Whether the identity of `x` is null-homotopic.
pub fn is_stably_zero(x: &NFactorization) -> Result<HomotopyVerdict> {
    is_p_null_homotopic(&FactorMorphism::identity(x))
}

/// Checks a candidate stable isomorphism: `f·g ∼ id` and `g·f ∼ id`.
pub fn is_stable_iso_pair(f: &FactorMorphism, g: &FactorMorphism) -> Result<HomotopyVerdict> {
    let a = f.then(g)?.sub(&FactorMorphism::identity(f.source()))?;
    let v = is_p_null_homotopic(&a)?;
    if !v.is_null() {
        return Ok(v);
    }
    let b = g.then(f)?.sub(&FactorMorphism::identity(g.source()))?;
    is_p_null_homotopic(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::tests::qx;
    use crate::field::{FieldSpec, Scalar};
    use crate::random::{self, random_matrix, Bounds};
    use crate::ring::{Ring, RingRef};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f4_skew() -> RingRef {
        Ring::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }, 1, vec![
            Scalar::Fin(0),
            Scalar::Fin(0),
            Scalar::Fin(1),
        ])
        .unwrap()
    }

    fn random_witness<R: Rng>(x: &NFactorization, y: &NFactorization, rng: &mut R) -> HomotopyWitness {
        let maps = witness_shapes(x, y)
            .iter()
            .map(|s| random_matrix(x.ring(), s.rows, s.cols, s.twist, 1, rng))
            .collect();
        HomotopyWitness { maps }
    }

    #[test]
    fn n2_matches_displayed_equations() {
        // f^0 = h^0·d_Y^1 + d_X^0·h^1, f^1 = h^1·d_Y^0 + d_X^1·σ(h^0)
        let r = qx(&[0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Bounds { n: 2, max_rank: 2, max_deg: 1 };
        for _ in 0..20 {
            let x = random::random_object(&r, b, &mut rng);
            let y = random::random_object(&r, b, &mut rng);
            let w = random_witness(&x, &y, &mut rng);
            let f = reconstruct_from_witness(&x, &y, &w).unwrap();
            let f0 = w.maps[0].mul(y.map(1)).unwrap().with_twist(0).add(&x.map(0).mul(&w.maps[1]).unwrap()).unwrap().with_twist(0);
            let f1 = w.maps[1].mul(y.map(0)).unwrap().add(&x.map(1).mul(&w.maps[0]).unwrap().with_twist(0)).unwrap().with_twist(0);
            assert_eq!(f.component(0), &f0);
            assert_eq!(f.component(1), &f1);
        }
    }

    #[test]
    fn reconstructions_are_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ring in [qx(&[0, 0, 0, 1]), f4_skew()] {
            for n in 1..=4 {
                let b = Bounds { n, max_rank: 2, max_deg: 1 };
                for _ in 0..15 {
                    let x = random::random_object(&ring, b, &mut rng);
                    let y = random::random_object(&ring, b, &mut rng);
                    let w = random_witness(&x, &y, &mut rng);
                    let f = reconstruct_from_witness(&x, &y, &w).unwrap();
                    assert!(f.is_valid(), "n={n}\n{x}\n{y}\n{w}");
                    assert!(reconstruct_from_witness(&x, &y, &HomotopyWitness::zero(&x, &y)).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn classical_examples() {
        let r = qx(&[0, 0, 1]);
        let xx = random::monomial_object(&r, &[1, 1]);
        assert_eq!(is_stably_zero(&xx).unwrap(), HomotopyVerdict::NoWitness);
        assert!(factors_through_trivials(&FactorMorphism::identity(&xx)).unwrap().is_none());
        for n in 1..=3 {
            for i in 0..n {
                let t = theta(&r, n, i, 2).unwrap();
                assert!(is_stably_zero(&t).unwrap().is_null());
                assert!(factors_through_trivials(&FactorMorphism::identity(&t)).unwrap().is_some());
            }
        }
    }

    #[test]
    fn hull_maps_are_morphisms_and_witnesses_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in [qx(&[0, -1, 0, 1]), f4_skew()] {
            for n in 1..=4 {
                let b = Bounds { n, max_rank: 2, max_deg: 1 };
                for _ in 0..10 {
                    let x = random::random_object(&ring, b, &mut rng);
                    let y = random::random_object(&ring, b, &mut rng);
                    let (t, u, _) = trivial_hull(&x).unwrap();
                    assert!(t.is_valid() && u.is_valid());
                    let w = random_witness(&x, &y, &mut rng);
                    let f = reconstruct_from_witness(&x, &y, &w).unwrap();
                    let tf = witness_to_factorization(&x, &y, &w).unwrap();
                    assert!(tf.out.is_valid());
                    assert_eq!(tf.into.then(&tf.out).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn oracles_agree_and_witnesses_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = qx(&[0, 0, 1]);
        let mut seen = [0usize; 2];
        for n in 2..=3 {
            let b = Bounds { n, max_rank: 2, max_deg: 1 };
            for _ in 0..15 {
                let x = random::random_object(&r, b, &mut rng);
                let y = random::random_object(&r, b, &mut rng);
                let (_, iso, _) = random::conjugate(&y, 1, &mut rng);
                let w = random_witness(&x, &y, &mut rng);
                let null = reconstruct_from_witness(&x, &y, &w).unwrap();
                for f in [null.clone(), FactorMorphism::identity(&x)] {
                    let v = is_p_null_homotopic(&f).unwrap();
                    let t = factors_through_trivials(&f).unwrap();
                    assert_eq!(v.is_null(), t.is_some());
                    seen[v.is_null() as usize] += 1;
                }
                let after = transport_after(&w, &iso).unwrap();
                assert_eq!(reconstruct_from_witness(&x, iso.target(), &after).unwrap(), null.then(&iso).unwrap());
                let (_, _, k) = random::conjugate(&x, 1, &mut rng);
                let before = transport_before(&k, &w).unwrap();
                assert_eq!(reconstruct_from_witness(k.source(), &y, &before).unwrap(), k.then(&null).unwrap());
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn skew_witnesses_are_found_and_verified() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = f4_skew();
        for n in 1..=3 {
            let b = Bounds { n, max_rank: 2, max_deg: 1 };
            for _ in 0..5 {
                let x = random::random_object(&r, b, &mut rng);
                let y = random::random_object(&r, b, &mut rng);
                let w = random_witness(&x, &y, &mut rng);
                let f = reconstruct_from_witness(&x, &y, &w).unwrap();
                let v = is_p_null_homotopic(&f).unwrap();
                let found = v.witness().expect("constructed null-homotopic morphism");
                assert_eq!(reconstruct_from_witness(&x, &y, found).unwrap(), f);
                assert!(factors_through_trivials(&f).unwrap().is_some());
            }
        }
        let xx = random::monomial_object(&r, &[1, 1]);
        assert_eq!(is_stably_zero(&xx).unwrap(), HomotopyVerdict::NoWitnessUpToDegree(7));
    }
}
