//! Shift, trivial factorizations, projections, faces and degeneracies.
//!
//! All functors act on normalized data (only the last map has twist 1) and
//! return normalized data, so identities between composites can be checked
//! by plain equality.

use crate::error::{range_check, Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::matrix::TwistedMatrix;
use crate::ring::RingRef;

fn last_twist(i: usize, n: usize) -> i64 {
    if i + 1 == n {
        1
    } else {
        0
    }
}

fn shift_once(x: &NFactorization) -> NFactorization {
    let n = x.n();
    if n == 1 {
        return x.clone();
    }
    let d = x.maps();
    let mut maps: Vec<TwistedMatrix> = d[1..n - 1].to_vec();
    maps.push(d[n - 1].twist_matrix(-1).with_twist(0));
    maps.push(d[0].clone().with_twist(1));
    NFactorization::new(x.ring(), maps).expect("shift preserves shapes")
}

fn unshift_once(y: &NFactorization) -> NFactorization {
    let n = y.n();
    if n == 1 {
        return y.clone();
    }
    let e = y.maps();
    let mut maps = vec![e[n - 1].clone().with_twist(0)];
    maps.extend(e[..n - 2].iter().cloned());
    maps.push(e[n - 2].twist_matrix(1).with_twist(1));
    NFactorization::new(y.ring(), maps).expect("shift preserves shapes")
}

/// `S^power(X)`; negative powers use the inverse construction.
pub fn shift(x: &NFactorization, power: i64) -> NFactorization {
    let mut y = x.clone();
    for _ in 0..power.unsigned_abs() {
        y = if power > 0 { shift_once(&y) } else { unshift_once(&y) };
    }
    y
}

fn shift_components_once(c: &[TwistedMatrix]) -> Vec<TwistedMatrix> {
    let mut out = c[1..].to_vec();
    out.push(c[0].twist_matrix(-1));
    out
}

fn unshift_components_once(c: &[TwistedMatrix]) -> Vec<TwistedMatrix> {
    let n = c.len();
    let mut out = vec![c[n - 1].twist_matrix(1)];
    out.extend(c[..n - 1].iter().cloned());
    out
}

pub fn shift_morphism(f: &FactorMorphism, power: i64) -> FactorMorphism {
    let mut comps = f.components().to_vec();
    for _ in 0..power.unsigned_abs() {
        comps = if power > 0 { shift_components_once(&comps) } else { unshift_components_once(&comps) };
    }
    FactorMorphism::from_parts(shift(f.source(), power), shift(f.target(), power), comps)
}

/// The trivial factorization `θ^i(A^m)` in `F_n`.
pub fn theta(ring: &RingRef, n: usize, i: usize, m: usize) -> Result<NFactorization> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    range_check(i, n - 1)?;
    let id = TwistedMatrix::identity(ring, m);
    let w = TwistedMatrix::scalar(ring, m, ring.omega(), 0);
    let maps = (0..n)
        .map(|j| {
            let base = if i == 0 {
                if j + 1 == n { &w } else { &id }
            } else if j + 1 == i {
                &w
            } else {
                &id
            };
            base.clone().with_twist(last_twist(j, n))
        })
        .collect();
    NFactorization::new(ring, maps)
}

/// `θ^i(f)` for a module map `f: A^m → A^{m'}` given as a twist 0 matrix.
pub fn theta_morphism(ring: &RingRef, n: usize, i: usize, f: &TwistedMatrix) -> Result<FactorMorphism> {
    if f.twist() != 0 {
        return Err(Error::Precondition("module maps have twist 0".into()));
    }
    let src = theta(ring, n, i, f.rows())?;
    let tgt = theta(ring, n, i, f.cols())?;
    let comps = (0..n).map(|j| if j < i { f.twist_matrix(1) } else { f.clone() }).collect();
    Ok(FactorMorphism::from_parts(src, tgt, comps))
}

/// `pr^i(X) = X^i`, returned as its rank.
pub fn projection(x: &NFactorization, i: usize) -> Result<usize> {
    range_check(i, x.n() - 1)?;
    Ok(x.ranks()[i])
}

pub fn projection_morphism(f: &FactorMorphism, i: usize) -> Result<TwistedMatrix> {
    range_check(i, f.n() - 1)?;
    Ok(f.component(i).clone())
}

/// Face `θ_n^i: F_n → F_{n+1}`, `0 ≤ i ≤ n`.
pub fn face(x: &NFactorization, i: usize) -> Result<NFactorization> {
    let n = x.n();
    range_check(i, n)?;
    let ring = x.ring();
    let d = x.maps();
    let maps = if i < n {
        let mut maps = d[..i].to_vec();
        maps.push(TwistedMatrix::identity(ring, x.ranks()[i]));
        maps.extend(d[i..].iter().cloned());
        maps
    } else {
        let mut maps = d[..n - 1].to_vec();
        maps.push(d[n - 1].twist_matrix(-1).with_twist(0));
        maps.push(TwistedMatrix::identity(ring, x.ranks()[0]).with_twist(1));
        maps
    };
    NFactorization::new(ring, maps)
}

pub fn face_morphism(f: &FactorMorphism, i: usize) -> Result<FactorMorphism> {
    let n = f.n();
    range_check(i, n)?;
    let c = f.components();
    let comps = if i < n {
        let mut comps = c[..=i].to_vec();
        comps.extend(c[i..].iter().cloned());
        comps
    } else {
        let mut comps = c.to_vec();
        comps.push(c[0].twist_matrix(-1));
        comps
    };
    Ok(FactorMorphism::from_parts(face(f.source(), i)?, face(f.target(), i)?, comps))
}

/// Degeneracy `pr_{n+1}^i: F_{n+1} → F_n`, `0 ≤ i ≤ n`.
pub fn degeneracy(y: &NFactorization, i: usize) -> Result<NFactorization> {
    if y.n() < 2 {
        return Err(Error::InvalidInput("degeneracies start from 2-fold factorizations".into()));
    }
    let n = y.n() - 1;
    range_check(i, n)?;
    let e = y.maps();
    let maps = if i < n {
        let mut maps = e[..i].to_vec();
        maps.push(e[i].compose(&e[i + 1])?);
        maps.extend(e[i + 2..].iter().cloned());
        maps
    } else if n == 1 {
        vec![e[1].compose(&e[0])?]
    } else {
        let mut maps = vec![e[n].mul(&e[0])?.with_twist(0)];
        maps.extend(e[1..n - 1].iter().cloned());
        maps.push(e[n - 1].twist_matrix(1).with_twist(1));
        maps
    };
    NFactorization::new(y.ring(), maps)
}

pub fn degeneracy_morphism(g: &FactorMorphism, i: usize) -> Result<FactorMorphism> {
    if g.n() < 2 {
        return Err(Error::InvalidInput("degeneracies start from 2-fold factorizations".into()));
    }
    let n = g.n() - 1;
    range_check(i, n)?;
    let c = g.components();
    let comps = if i < n {
        let mut comps = c[..=i].to_vec();
        comps.extend(c[i + 2..].iter().cloned());
        comps
    } else {
        let mut comps = vec![c[n].twist_matrix(1)];
        comps.extend(c[1..n].iter().cloned());
        comps
    };
    Ok(FactorMorphism::from_parts(degeneracy(g.source(), i)?, degeneracy(g.target(), i)?, comps))
}

/// An elementary functor between categories of factorizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    /// `S^k` on `F_n`.
    Shift(i64),
    /// `θ_n^i: F_n → F_{n+1}`.
    Face(usize),
    /// `pr_{n+1}^i: F_{n+1} → F_n`.
    Degeneracy(usize),
    /// The twist `^{σ^k}(−)`, entrywise `σ^{-k}` on normalized data.
    Twist(i64),
}

impl Functor {
    /// Fold count of the output for an input with `n` components.
    pub fn output_n(&self, n: usize) -> usize {
        match self {
            Functor::Shift(_) | Functor::Twist(_) => n,
            Functor::Face(_) => n + 1,
            Functor::Degeneracy(_) => n - 1,
        }
    }

    pub fn apply(&self, x: &NFactorization) -> Result<NFactorization> {
        match *self {
            Functor::Shift(k) => Ok(shift(x, k)),
            Functor::Face(i) => face(x, i),
            Functor::Degeneracy(i) => degeneracy(x, i),
            Functor::Twist(k) => Ok(x.twist_entries(-k)),
        }
    }

    pub fn apply_morphism(&self, f: &FactorMorphism) -> Result<FactorMorphism> {
        match *self {
            Functor::Shift(k) => Ok(shift_morphism(f, k)),
            Functor::Face(i) => face_morphism(f, i),
            Functor::Degeneracy(i) => degeneracy_morphism(f, i),
            Functor::Twist(k) => {
                let comps = f.components().iter().map(|m| m.twist_matrix(-k)).collect();
                Ok(FactorMorphism::from_parts(f.source().twist_entries(-k), f.target().twist_entries(-k), comps))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Functor::Shift(k) => format!("S^{}", k),
            Functor::Face(i) => format!("face{}", i),
            Functor::Degeneracy(i) => format!("pr{}", i),
            Functor::Twist(k) => format!("twist{}", k),
        }
    }
}

/// A composite of elementary functors, listed in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Composite(pub Vec<Functor>);

impl Composite {
    pub fn apply(&self, x: &NFactorization) -> Result<NFactorization> {
        self.0.iter().try_fold(x.clone(), |acc, f| f.apply(&acc))
    }

    pub fn apply_morphism(&self, f: &FactorMorphism) -> Result<FactorMorphism> {
        self.0.iter().try_fold(f.clone(), |acc, g| g.apply_morphism(&acc))
    }

    pub fn then(mut self, f: Functor) -> Self {
        self.0.push(f);
        self
    }

    pub fn describe(&self) -> String {
        self.0.iter().rev().map(Functor::name).collect::<Vec<_>>().join(" ∘ ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::ring::Ring;

    fn qx(omega: &[i64]) -> RingRef {
        let f = Field::rationals();
        Ring::with_field(f.clone(), 0, omega.iter().map(|&c| f.from_i64(c)).collect()).unwrap()
    }

    fn scalar_obj(ring: &RingRef, polys: &[Vec<i64>]) -> NFactorization {
        let n = polys.len();
        let maps = polys
            .iter()
            .enumerate()
            .map(|(i, p)| TwistedMatrix::scalar(ring, 1, &ring.from_ints(p), last_twist(i, n)))
            .collect();
        NFactorization::new(ring, maps).unwrap()
    }

    #[test]
    fn theta_examples() {
        let r = qx(&[0, 0, 1]);
        assert_eq!(theta(&r, 2, 0, 1).unwrap(), scalar_obj(&r, &[vec![1], vec![0, 0, 1]]));
        assert_eq!(theta(&r, 2, 1, 1).unwrap(), scalar_obj(&r, &[vec![0, 0, 1], vec![1]]));
        let r3 = qx(&[0, 0, 0, 1]);
        for i in 0..3 {
            assert!(theta(&r3, 3, i, 2).unwrap().is_valid());
        }
        assert!(theta(&r3, 3, 3, 1).is_err());
    }

    #[test]
    fn face_and_degeneracy_examples() {
        let r = qx(&[0, 0, 1]);
        let xx = scalar_obj(&r, &[vec![0, 1], vec![0, 1]]);
        assert_eq!(face(&xx, 0).unwrap(), scalar_obj(&r, &[vec![1], vec![0, 1], vec![0, 1]]));
        assert_eq!(degeneracy(&face(&xx, 0).unwrap(), 0).unwrap(), xx);
        let r3 = qx(&[0, 0, 0, 1]);
        let x3 = scalar_obj(&r3, &[vec![0, 1], vec![0, 1], vec![0, 1]]);
        let d = degeneracy(&x3, 1).unwrap();
        assert_eq!(d, scalar_obj(&r3, &[vec![0, 1], vec![0, 0, 1]]));
        assert!(d.is_valid());
        assert!(face(&xx, 3).is_err());
    }

    #[test]
    fn shift_of_symmetric_object() {
        let r = qx(&[0, 0, 0, 1]);
        let x3 = scalar_obj(&r, &[vec![0, 1], vec![0, 1], vec![0, 1]]);
        assert_eq!(shift(&x3, 1), x3);
        assert_eq!(shift(&shift(&x3, 1), -1), x3);
    }
}
