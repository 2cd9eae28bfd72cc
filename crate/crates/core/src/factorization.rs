//! Objects and morphisms of the category of n-fold factorizations of `ω`
//! with free components.
//!
//! An object is a cyclic sequence of maps `d^0, …, d^{n-1}` with `d^i` of
//! shape `r_i × r_{i+1}`; all maps have twist 0 except the last, which has
//! twist 1. Every cyclic composite of `n` consecutive maps must be `ω·I`.

use std::fmt;

use crate::error::{range_check, Error, Result};
use crate::matrix::TwistedMatrix;
use crate::ring::{same_ring, RingRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NFactorization {
    ring: RingRef,
    ranks: Vec<usize>,
    maps: Vec<TwistedMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    Shape { index: usize, message: String },
    Rotation { index: usize, difference: TwistedMatrix },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&ValidationFailure> {
        self.failures.first()
    }

    pub fn first_failing_rotation(&self) -> Option<usize> {
        self.failures.iter().find_map(|f| match f {
            ValidationFailure::Rotation { index, .. } => Some(*index),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::Shape { index, message } => write!(f, "map {}: {}", index, message),
            ValidationFailure::Rotation { index, difference } => {
                write!(f, "rotation {} differs from omega by {}", index, difference)
            }
        }
    }
}

impl NFactorization {
    /// Builds an object, checking shapes and twists but not the rotation
    /// identities (see [`NFactorization::validate`]).
    pub fn new(ring: &RingRef, maps: Vec<TwistedMatrix>) -> Result<Self> {
        let n = maps.len();
        if n == 0 {
            return Err(Error::InvalidInput("a factorization needs at least one map".into()));
        }
        let ranks: Vec<usize> = maps.iter().map(|m| m.rows()).collect();
        for (i, m) in maps.iter().enumerate() {
            if !same_ring(m.ring(), ring) {
                return Err(Error::IncompatibleRing);
            }
            if m.cols() != ranks[(i + 1) % n] {
                return Err(Error::Shape(format!(
                    "map {} has {} columns, next component has rank {}",
                    i,
                    m.cols(),
                    ranks[(i + 1) % n]
                )));
            }
            let want = if i == n - 1 { 1 } else { 0 };
            if m.twist() != want {
                return Err(Error::Shape(format!("map {} has twist {}, expected {}", i, m.twist(), want)));
            }
        }
        Ok(NFactorization { ring: ring.clone(), ranks, maps })
    }

    /// Builds an object and rejects it unless all rotation identities hold.
    pub fn validated(ring: &RingRef, maps: Vec<TwistedMatrix>) -> Result<Self> {
        let x = Self::new(ring, maps)?;
        match x.validate().first_failure() {
            None => Ok(x),
            Some(f) => Err(Error::InvalidInput(f.to_string())),
        }
    }

    /// The zero object with `n` components.
    pub fn zero(ring: &RingRef, n: usize) -> Self {
        let maps = (0..n)
            .map(|i| TwistedMatrix::zero(ring, 0, 0, if i + 1 == n { 1 } else { 0 }))
            .collect();
        NFactorization { ring: ring.clone(), ranks: vec![0; n], maps }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i % self.n()]
    }

    pub fn maps(&self) -> &[TwistedMatrix] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &TwistedMatrix {
        &self.maps[i]
    }

    pub fn into_maps(self) -> Vec<TwistedMatrix> {
        self.maps
    }

    pub fn is_zero_object(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn max_degree(&self) -> i64 {
        self.maps.iter().map(TwistedMatrix::max_degree).max().unwrap_or(-1)
    }

    /// `d^{i,j} = d^j ∘ ⋯ ∘ d^i`; the identity of `X^i` when `j < i`.
    pub fn compose_range(&self, i: usize, j: usize) -> Result<TwistedMatrix> {
        let n = self.n();
        range_check(i, n - 1)?;
        if j < i {
            return Ok(TwistedMatrix::identity(&self.ring, self.ranks[i]));
        }
        range_check(j, n - 1)?;
        self.composite(i, j + 1)
    }

    /// Composite of the maps with indices in `start..end` (no wrapping),
    /// the identity of `X^start` when empty.
    pub fn composite(&self, start: usize, end: usize) -> Result<TwistedMatrix> {
        if start >= end {
            return Ok(TwistedMatrix::identity(&self.ring, self.rank(start)));
        }
        if end > self.n() {
            return Err(Error::IndexOutOfRange { index: end as i64 - 1, max: self.n() as i64 - 1 });
        }
        let refs: Vec<&TwistedMatrix> = self.maps[start..end].iter().collect();
        TwistedMatrix::compose_all(&refs)
    }

    /// The cyclic composite starting at `X^i`; should be `ω·I` at twist 1.
    pub fn rotation(&self, i: usize) -> Result<TwistedMatrix> {
        let n = self.n();
        let mut refs: Vec<&TwistedMatrix> = self.maps[i..].iter().collect();
        refs.extend(self.maps[..i].iter());
        debug_assert_eq!(refs.len(), n);
        TwistedMatrix::compose_all(&refs)
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut failures = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            let (r, c) = (self.ranks[i], self.ranks[(i + 1) % n]);
            if m.shape() != (r, c) {
                failures.push(ValidationFailure::Shape {
                    index: i,
                    message: format!("shape {}x{}, expected {}x{}", m.rows(), m.cols(), r, c),
                });
            }
        }
        if !failures.is_empty() {
            return ValidationReport { failures };
        }
        for i in 0..n {
            let rot = self.rotation(i).expect("shapes checked");
            let w = TwistedMatrix::omega(&self.ring, self.ranks[i]);
            if rot != w {
                let difference = rot.sub(&w).unwrap_or(rot);
                failures.push(ValidationFailure::Rotation { index: i, difference });
            }
        }
        ValidationReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Entrywise `σ^power` on every map.
    pub fn twist_entries(&self, power: i64) -> NFactorization {
        NFactorization {
            ring: self.ring.clone(),
            ranks: self.ranks.clone(),
            maps: self.maps.iter().map(|m| m.twist_matrix(power)).collect(),
        }
    }

    /// Blockwise direct sum with its canonical injections and projections.
    pub fn direct_sum(&self, other: &NFactorization) -> Result<DirectSum> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::IncompatibleRing);
        }
        if self.n() != other.n() {
            return Err(Error::Shape(format!("direct sum of {}-fold and {}-fold objects", self.n(), other.n())));
        }
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| TwistedMatrix::block_diag(&[a, b]))
            .collect::<Result<Vec<_>>>()?;
        let sum = NFactorization::new(&self.ring, maps)?;
        let ring = &self.ring;
        let n = self.n();
        let (mut i1, mut i2, mut p1, mut p2) = (vec![], vec![], vec![], vec![]);
        for k in 0..n {
            let (a, b) = (self.ranks[k], other.ranks[k]);
            let ia = TwistedMatrix::identity(ring, a);
            let ib = TwistedMatrix::identity(ring, b);
            i1.push(TwistedMatrix::hstack(&[&ia, &TwistedMatrix::zero(ring, a, b, 0)])?);
            i2.push(TwistedMatrix::hstack(&[&TwistedMatrix::zero(ring, b, a, 0), &ib])?);
            p1.push(TwistedMatrix::vstack(&[&ia, &TwistedMatrix::zero(ring, b, a, 0)])?);
            p2.push(TwistedMatrix::vstack(&[&TwistedMatrix::zero(ring, a, b, 0), &ib])?);
        }
        Ok(DirectSum {
            inj1: FactorMorphism::from_parts(self.clone(), sum.clone(), i1),
            inj2: FactorMorphism::from_parts(other.clone(), sum.clone(), i2),
            proj1: FactorMorphism::from_parts(sum.clone(), self.clone(), p1),
            proj2: FactorMorphism::from_parts(sum.clone(), other.clone(), p2),
            sum,
        })
    }

    /// Direct sum of several objects (the zero object when empty).
    pub fn direct_sum_all(ring: &RingRef, n: usize, parts: &[NFactorization]) -> Result<NFactorization> {
        let mut acc = NFactorization::zero(ring, n);
        for p in parts {
            acc = acc.direct_sum(p)?.sum;
        }
        Ok(acc)
    }
}

impl fmt::Display for NFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.maps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", m)?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: NFactorization,
    pub inj1: FactorMorphism,
    pub inj2: FactorMorphism,
    pub proj1: FactorMorphism,
    pub proj2: FactorMorphism,
}

/// A morphism `f: X → Y` given by twist 0 components `f^i: X^i → Y^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMorphism {
    source: NFactorization,
    target: NFactorization,
    components: Vec<TwistedMatrix>,
}

impl FactorMorphism {
    /// Builds a morphism and checks shapes and commuting squares.
    pub fn new(source: &NFactorization, target: &NFactorization, components: Vec<TwistedMatrix>) -> Result<Self> {
        let f = Self::from_parts(source.clone(), target.clone(), components);
        f.check_shapes()?;
        if let Some(i) = f.first_defect()? {
            return Err(Error::NotMorphism(format!("square {} does not commute", i)));
        }
        Ok(f)
    }

    /// Assembles a morphism without checking it.
    pub(crate) fn from_parts(source: NFactorization, target: NFactorization, components: Vec<TwistedMatrix>) -> Self {
        FactorMorphism { source, target, components }
    }

    fn check_shapes(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        if !same_ring(x.ring(), y.ring()) {
            return Err(Error::IncompatibleRing);
        }
        if x.n() != y.n() || self.components.len() != x.n() {
            return Err(Error::Shape("morphism component count mismatch".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            if !same_ring(c.ring(), x.ring()) {
                return Err(Error::IncompatibleRing);
            }
            if c.shape() != (x.ranks[i], y.ranks[i]) || c.twist() != 0 {
                return Err(Error::Shape(format!(
                    "component {} is {}x{} twist {}, expected {}x{} twist 0",
                    i,
                    c.rows(),
                    c.cols(),
                    c.twist(),
                    x.ranks[i],
                    y.ranks[i]
                )));
            }
        }
        Ok(())
    }

    /// The first square that fails to commute, if any.
    pub fn first_defect(&self) -> Result<Option<usize>> {
        let n = self.source.n();
        let (dx, dy, f) = (&self.source.maps, &self.target.maps, &self.components);
        for i in 0..n {
            let j = (i + 1) % n;
            let lhs = dx[i].compose(&f[j])?;
            let rhs = f[i].compose(&dy[i])?;
            if lhs != rhs {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_valid(&self) -> bool {
        self.check_shapes().is_ok() && matches!(self.first_defect(), Ok(None))
    }

    pub fn identity(x: &NFactorization) -> Self {
        let comps = x.ranks.iter().map(|&r| TwistedMatrix::identity(&x.ring, r)).collect();
        Self::from_parts(x.clone(), x.clone(), comps)
    }

    pub fn zero(x: &NFactorization, y: &NFactorization) -> Self {
        let comps = (0..x.n()).map(|i| TwistedMatrix::zero(&x.ring, x.ranks[i], y.ranks[i], 0)).collect();
        Self::from_parts(x.clone(), y.clone(), comps)
    }

    pub fn source(&self) -> &NFactorization {
        &self.source
    }

    pub fn target(&self) -> &NFactorization {
        &self.target
    }

    pub fn components(&self) -> &[TwistedMatrix] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TwistedMatrix {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<TwistedMatrix> {
        self.components
    }

    pub fn ring(&self) -> &RingRef {
        self.source.ring()
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TwistedMatrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.components.iter().all(TwistedMatrix::is_identity)
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &FactorMorphism) -> Result<FactorMorphism> {
        if self.target != other.source {
            return Err(Error::Shape("morphisms are not composable".into()));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(self.source.clone(), other.target.clone(), comps))
    }

    fn same_hom_set(&self, other: &FactorMorphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Shape("morphisms live in different hom-sets".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FactorMorphism) -> Result<FactorMorphism> {
        self.same_hom_set(other)?;
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), comps))
    }

    pub fn sub(&self, other: &FactorMorphism) -> Result<FactorMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FactorMorphism {
        let comps = self.components.iter().map(TwistedMatrix::neg).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), comps)
    }

    /// Multiplies every component by a central scalar.
    pub fn scale(&self, c: &crate::field::Scalar) -> FactorMorphism {
        let comps = self.components.iter().map(|m| m.scale_scalar(c)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), comps)
    }

    /// Block morphism `X1 ⊕ X2 → Y1 ⊕ Y2` from four blocks (`f_ab: X_a → Y_b`).
    pub fn block(sum_x: &DirectSum, sum_y: &DirectSum, blocks: [[&FactorMorphism; 2]; 2]) -> Result<FactorMorphism> {
        let mut acc = FactorMorphism::zero(&sum_x.sum, &sum_y.sum);
        let inj = [&sum_y.inj1, &sum_y.inj2];
        let proj = [&sum_x.proj1, &sum_x.proj2];
        for a in 0..2 {
            for b in 0..2 {
                let t = proj[a].then(blocks[a][b])?.then(inj[b])?;
                acc = acc.add(&t)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for FactorMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", m)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::Field;
    use crate::ring::Ring;

    pub(crate) fn qx(omega: &[i64]) -> RingRef {
        let f = Field::rationals();
        Ring::with_field(f.clone(), 0, omega.iter().map(|&c| f.from_i64(c)).collect()).unwrap()
    }

    fn rank1(ring: &RingRef, degs: &[usize]) -> Result<NFactorization> {
        let n = degs.len();
        let maps = degs
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                TwistedMatrix::scalar(ring, 1, &ring.monomial(ring.field().one(), d), if i + 1 == n { 1 } else { 0 })
            })
            .collect();
        NFactorization::new(ring, maps)
    }

    #[test]
    fn validation_examples() {
        let r = qx(&[0, 0, 0, 1]);
        assert!(rank1(&r, &[1, 1, 1]).unwrap().is_valid());
        let r2 = qx(&[0, 0, 1]);
        let bad = rank1(&r2, &[1, 2]).unwrap();
        let rep = bad.validate();
        assert_eq!(rep.first_failing_rotation(), Some(0));
        match rep.first_failure().unwrap() {
            ValidationFailure::Rotation { difference, .. } => {
                // x^3 - x^2
                assert_eq!(*difference.get(0, 0), r2.from_ints(&[0, 0, -1, 1]));
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn compose_range_examples() {
        let r = qx(&[0, 0, 0, 1]);
        let x = rank1(&r, &[1, 1, 1]).unwrap();
        assert_eq!(*x.compose_range(0, 1).unwrap().get(0, 0), r.from_ints(&[0, 0, 1]));
        assert_eq!(x.compose_range(0, 2).unwrap(), TwistedMatrix::omega(&r, 1));
        assert!(x.compose_range(2, 1).unwrap().is_identity());
        assert!(matches!(x.compose_range(3, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn direct_sum_with_zero() {
        let r = qx(&[0, 0, 0, 1]);
        let x = rank1(&r, &[1, 2, 0]).unwrap();
        let s = x.direct_sum(&NFactorization::zero(&r, 3)).unwrap();
        assert_eq!(s.sum, x);
        assert!(s.inj1.is_valid() && s.proj1.is_valid());
        assert!(s.inj1.then(&s.proj1).unwrap().is_identity());
    }

    #[test]
    fn morphism_square_check() {
        let r = qx(&[0, 0, 1]);
        let x = rank1(&r, &[1, 1]).unwrap();
        let one = TwistedMatrix::identity(&r, 1);
        let zero = TwistedMatrix::zero(&r, 1, 1, 0);
        assert!(FactorMorphism::new(&x, &x, vec![one.clone(), one.clone()]).is_ok());
        assert!(matches!(FactorMorphism::new(&x, &x, vec![one, zero]), Err(Error::NotMorphism(_))));
    }
}
