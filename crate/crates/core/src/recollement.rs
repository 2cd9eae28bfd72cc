//! The six functors gluing `F_n` from `F_{n-k+1}` and `F_k`, with the two
//! adjunctions on each side given by explicit hom-set bijections.

use crate::adjunction::{AdjointPair, Elementary};
use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::functors::{Composite, Functor};
use crate::homotopy::{self, HomotopyVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Recollement {
    n: usize,
    k: usize,
}

impl Recollement {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidInput(format!("need 1 ≤ k ≤ n-1, got n = {n}, k = {k}")));
        }
        Ok(Recollement { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Fold count of the subcategory side.
    pub fn sub_n(&self) -> usize {
        self.n - self.k + 1
    }

    /// `inc ⊣ inc_ρ`: faces `θ^{j-1}` at levels `j = n-k+1, …, n-1`, then `S^{-1}`.
    pub fn inc_right_pair(&self) -> AdjointPair {
        let mut steps: Vec<Elementary> = (self.sub_n()..self.n).map(|j| Elementary::FaceDegeneracy { i: j - 1 }).collect();
        steps.push(Elementary::Shift { k: -1 });
        AdjointPair::new(steps)
    }

    /// `inc_λ ⊣ inc`.
    pub fn inc_left_pair(&self) -> AdjointPair {
        let mut steps = vec![Elementary::Shift { k: 1 }];
        steps.extend((self.sub_n() - 1..self.n - 1).rev().map(|i| Elementary::DegeneracyFace { i }));
        AdjointPair::new(steps)
    }

    /// `j_! ⊣ pr^0 ⋯ pr^0`.
    pub fn quotient_right_pair(&self) -> AdjointPair {
        AdjointPair::new(vec![Elementary::FaceDegeneracy { i: 0 }; self.n - self.k])
    }

    /// `pr^0 ⋯ pr^0 ⊣ j_*`.
    pub fn quotient_left_pair(&self) -> AdjointPair {
        (self.k + 1..=self.n).rev().fold(AdjointPair::default(), |acc, j| acc.compose(AdjointPair::first_degeneracy(j - 1)))
    }

    pub fn inc(&self) -> Composite {
        self.inc_right_pair().left()
    }

    pub fn inc_right(&self) -> Composite {
        self.inc_right_pair().right()
    }

    pub fn inc_left(&self) -> Composite {
        self.inc_left_pair().left()
    }

    /// `pr_{k+1}^0 ⋯ pr_n^0: F_n → F_k`.
    pub fn quotient(&self) -> Composite {
        Composite(vec![Functor::Degeneracy(0); self.n - self.k])
    }

    /// `j_! = θ^0 ⋯ θ^0: F_k → F_n`.
    pub fn left_section(&self) -> Composite {
        self.quotient_right_pair().left()
    }

    /// `j_* = S^{n-1} θ^0 ⋯ θ^0 S^{-(k-1)}: F_k → F_n`.
    pub fn right_section(&self) -> Composite {
        let mut fs = vec![Functor::Shift(-(self.k as i64 - 1))];
        fs.extend(std::iter::repeat_n(Functor::Face(0), self.n - self.k));
        fs.push(Functor::Shift(self.n as i64 - 1));
        Composite(fs)
    }

    /// Checks the recollement identities on sample objects `z ∈ F_{n-k+1}`,
    /// `x ∈ F_n` and `w ∈ F_k`; returns the first failure.
    pub fn check(&self, z: &NFactorization, x: &NFactorization, w: &NFactorization) -> Result<RecollementCheck> {
        if z.n() != self.sub_n() || x.n() != self.n || w.n() != self.k {
            return Err(Error::Shape(format!(
                "expected objects with {}, {} and {} components",
                self.sub_n(),
                self.n,
                self.k
            )));
        }
        let mut failures = Vec::new();
        let q = self.quotient();
        for (name, s) in [("left section", self.left_section()), ("right section", self.right_section())] {
            let back = q.apply(&s.apply(w)?)?;
            if back != *w {
                failures.push(format!("quotient after {name} is not the identity"));
            }
        }
        if self.right_section().apply(w)? != self.quotient_left_pair().right().apply(w)? {
            failures.push("right section differs from the right adjoint of the quotient".into());
        }
        let qz = q.apply(&self.inc().apply(z)?)?;
        let kernel = homotopy::is_stably_zero(&qz)?;
        if !kernel.is_null() && kernel.is_definitive() {
            failures.push("quotient of an included object is not stably zero".into());
        }
        let pairs = [
            ("inc ⊣ inc_ρ", self.inc_right_pair(), z, x),
            ("inc_λ ⊣ inc", self.inc_left_pair(), x, z),
            ("j_! ⊣ quotient", self.quotient_right_pair(), w, x),
            ("quotient ⊣ j_*", self.quotient_left_pair(), x, w),
        ];
        for (name, p, a, b) in pairs {
            if let Some(which) = p.triangle_identities(a, b)? {
                failures.push(format!("{name}: {which}"));
            }
        }
        Ok(RecollementCheck { failures, kernel })
    }
}

#[derive(Clone, Debug)]
pub struct RecollementCheck {
    pub failures: Vec<String>,
    /// Verdict for the identity of `quotient(inc(z))`.
    pub kernel: HomotopyVerdict,
}

impl RecollementCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Applies a composite to a morphism and checks the result is a morphism.
pub fn apply_checked(c: &Composite, f: &FactorMorphism) -> Result<FactorMorphism> {
    let g = c.apply_morphism(f)?;
    if !g.is_valid() {
        return Err(Error::Internal(format!("{} did not produce a morphism", c.describe())));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::tests::qx;
    use crate::field::{FieldSpec, Scalar};
    use crate::functors::theta;
    use crate::random::{self, Bounds};
    use crate::ring::{Ring, RingRef};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CASES: [(usize, usize); 4] = [(2, 1), (3, 1), (3, 2), (4, 2)];

    fn f4() -> RingRef {
        Ring::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }, 1, vec![
            Scalar::Fin(0),
            Scalar::Fin(0),
            Scalar::Fin(1),
        ])
        .unwrap()
    }

    #[test]
    fn parameter_range() {
        assert!(Recollement::new(3, 0).is_err());
        assert!(Recollement::new(3, 3).is_err());
        assert!(Recollement::new(2, 1).is_ok());
    }

    #[test]
    fn composites_have_the_right_levels() {
        for (n, k) in CASES {
            let r = Recollement::new(n, k).unwrap();
            let level = |c: &Composite, start: usize| c.0.iter().fold(start, |m, f| f.output_n(m));
            assert_eq!(level(&r.inc(), r.sub_n()), n);
            assert_eq!(level(&r.inc_right(), n), r.sub_n());
            assert_eq!(level(&r.inc_left(), n), r.sub_n());
            assert_eq!(level(&r.quotient(), n), k);
            assert_eq!(level(&r.left_section(), k), n);
            assert_eq!(level(&r.right_section(), k), n);
            let ring = qx(&[0, 0, 0, 1]);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let x = random::random_object(&ring, Bounds { n, max_rank: 2, max_deg: 2 }, &mut rng);
            // agrees with the quotient up to conjugation by shifts
            assert_eq!(r.quotient_left_pair().left().apply(&x).unwrap(), r.quotient().apply(&x).unwrap());
            assert_eq!(r.inc_left_pair().right(), r.inc());
        }
    }

    #[test]
    fn two_fold_case() {
        // F_2 glued from F_2 and F_1: inc is S^{-1}, the quotient is pr^0
        let r = Recollement::new(2, 1).unwrap();
        assert_eq!(r.inc(), Composite(vec![Functor::Shift(-1)]));
        assert_eq!(r.quotient(), Composite(vec![Functor::Degeneracy(0)]));
        assert_eq!(r.left_section(), Composite(vec![Functor::Face(0)]));
        let ring = qx(&[0, 0, 1]);
        let w = theta(&ring, 1, 0, 1).unwrap();
        assert_eq!(r.left_section().apply(&w).unwrap(), theta(&ring, 2, 0, 1).unwrap());
    }

    #[test]
    fn identities_on_random_objects() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in [qx(&[0, 0, 1]), qx(&[0, 0, -1, 1]), f4()] {
            for (n, k) in CASES {
                let r = Recollement::new(n, k).unwrap();
                let b = |n| Bounds { n, max_rank: 2, max_deg: 1 };
                for _ in 0..4 {
                    let z = random::random_object(&ring, b(r.sub_n()), &mut rng);
                    let x = random::random_object(&ring, b(n), &mut rng);
                    let w = random::random_object(&ring, b(k), &mut rng);
                    let c = r.check(&z, &x, &w).unwrap();
                    assert!(c.passed(), "{n} {k}: {:?}", c.failures);
                    assert!(c.kernel.is_null(), "{n} {k}: {:?}", c.kernel);
                }
            }
        }
    }

    #[test]
    fn included_objects_map_to_trivials() {
        let ring = qx(&[0, 0, 0, 1]);
        let z = random::monomial_object(&ring, &[1, 1, 1]);
        let r = Recollement::new(4, 2).unwrap();
        let q = r.quotient().apply(&r.inc().apply(&z).unwrap()).unwrap();
        assert!(homotopy::is_stably_zero(&q).unwrap().is_definitive());
        let g = FactorMorphism::identity(&z);
        assert!(apply_checked(&r.inc(), &g).unwrap().is_identity());
    }
}
