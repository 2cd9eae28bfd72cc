//! Explicit hom-set bijections for the adjoint pairs between faces,
//! degeneracies and shifts, and their composites.
//!
//! For a pair `L ⊣ R`, [`AdjointPair::forward`] sends `g: L(X) → Y` to
//! `φ(g): X → R(Y)` and [`AdjointPair::backward`] is its inverse.

use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::functors::{shift_morphism, Composite, Functor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elementary {
    /// `θ_n^i ⊣ pr_{n+1}^i`.
    FaceDegeneracy { i: usize },
    /// `pr_{n+1}^{i-1} ⊣ θ_n^i` for `1 ≤ i ≤ n`.
    DegeneracyFace { i: usize },
    /// `S^k ⊣ S^{-k}`.
    Shift { k: i64 },
}

impl Elementary {
    pub fn left(&self) -> Functor {
        match *self {
            Elementary::FaceDegeneracy { i } => Functor::Face(i),
            Elementary::DegeneracyFace { i } => Functor::Degeneracy(i - 1),
            Elementary::Shift { k } => Functor::Shift(k),
        }
    }

    pub fn right(&self) -> Functor {
        match *self {
            Elementary::FaceDegeneracy { i } => Functor::Degeneracy(i),
            Elementary::DegeneracyFace { i } => Functor::Face(i),
            Elementary::Shift { k } => Functor::Shift(-k),
        }
    }

    fn check_source(&self, x: &NFactorization, g: &FactorMorphism) -> Result<()> {
        if *g.source() != self.left().apply(x)? {
            return Err(Error::Precondition(format!(
                "morphism does not start at {} of the given object",
                self.left().name()
            )));
        }
        Ok(())
    }

    fn check_target(&self, y: &NFactorization, f: &FactorMorphism) -> Result<()> {
        if *f.target() != self.right().apply(y)? {
            return Err(Error::Precondition(format!(
                "morphism does not end at {} of the given object",
                self.right().name()
            )));
        }
        Ok(())
    }

    /// `g: L(x) → y` to `x → R(y)`.
    pub fn forward(&self, x: &NFactorization, g: &FactorMorphism) -> Result<FactorMorphism> {
        self.check_source(x, g)?;
        let y = g.target();
        let c = g.components();
        let comps = match *self {
            Elementary::Shift { k } => return Ok(shift_morphism(g, -k)),
            Elementary::FaceDegeneracy { i } => {
                let n = x.n();
                if i < n {
                    let mut v = c[..=i].to_vec();
                    v.extend(c[i + 2..].iter().cloned());
                    v
                } else {
                    let mut v = vec![c[n].twist_matrix(1)];
                    v.extend(c[1..n].iter().cloned());
                    v
                }
            }
            Elementary::DegeneracyFace { i } => {
                let n = x.n() - 1;
                let e = x.maps();
                let new = if i < n { e[i].mul(&c[i])? } else { e[n].mul(&c[0])?.with_twist(0).twist_matrix(-1) };
                let mut v = c[..i].to_vec();
                v.push(new);
                v.extend(c[i..].iter().cloned());
                v
            }
        };
        Ok(FactorMorphism::from_parts(x.clone(), self.right().apply(y)?, comps))
    }

    /// `f: x → R(y)` to `L(x) → y`.
    pub fn backward(&self, y: &NFactorization, f: &FactorMorphism) -> Result<FactorMorphism> {
        self.check_target(y, f)?;
        let x = f.source();
        let c = f.components();
        let comps = match *self {
            Elementary::Shift { k } => return Ok(shift_morphism(f, k)),
            Elementary::FaceDegeneracy { i } => {
                let n = x.n();
                let e = y.maps();
                if i < n {
                    let mut v = c[..=i].to_vec();
                    v.push(c[i].mul(&e[i])?);
                    v.extend(c[i + 1..].iter().cloned());
                    v
                } else {
                    let mut v = vec![c[0].mul(&e[n])?.with_twist(0)];
                    v.extend(c[1..n].iter().cloned());
                    v.push(c[0].twist_matrix(-1));
                    v
                }
            }
            Elementary::DegeneracyFace { i } => {
                let mut v = c[..i].to_vec();
                v.extend(c[i + 1..].iter().cloned());
                v
            }
        };
        Ok(FactorMorphism::from_parts(self.left().apply(x)?, y.clone(), comps))
    }
}

/// A composite adjunction `L_m ⋯ L_1 ⊣ R_1 ⋯ R_m`, steps listed in the
/// order in which the left adjoints are applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjointPair {
    pub steps: Vec<Elementary>,
}

impl AdjointPair {
    pub fn new(steps: Vec<Elementary>) -> Self {
        AdjointPair { steps }
    }

    /// `θ_n^0 ⊣ pr_{n+1}^0`.
    pub fn face_zero() -> Self {
        Self::new(vec![Elementary::FaceDegeneracy { i: 0 }])
    }

    /// `pr_{n+1}^{n-1} ⊣ Sθ_n^0`; on normalized data `Sθ_n^0 = θ_n^n`.
    pub fn last_degeneracy(n: usize) -> Self {
        Self::new(vec![Elementary::DegeneracyFace { i: n }])
    }

    /// `pr_{n+1}^0 ⊣ S^nθ_n^0S^{-(n-1)}`, obtained by conjugating
    /// [`AdjointPair::last_degeneracy`] with shifts.
    pub fn first_degeneracy(n: usize) -> Self {
        let k = n as i64 - 1;
        Self::new(vec![
            Elementary::Shift { k: -k },
            Elementary::DegeneracyFace { i: n },
            Elementary::Shift { k },
        ])
    }

    pub fn compose(mut self, other: AdjointPair) -> Self {
        self.steps.extend(other.steps);
        self
    }

    pub fn left(&self) -> Composite {
        Composite(self.steps.iter().map(Elementary::left).collect())
    }

    pub fn right(&self) -> Composite {
        Composite(self.steps.iter().rev().map(Elementary::right).collect())
    }

    pub fn forward(&self, x: &NFactorization, g: &FactorMorphism) -> Result<FactorMorphism> {
        let mut xs = vec![x.clone()];
        for s in &self.steps {
            let next = s.left().apply(xs.last().unwrap())?;
            xs.push(next);
        }
        let mut h = g.clone();
        for (k, s) in self.steps.iter().enumerate().rev() {
            h = s.forward(&xs[k], &h)?;
        }
        Ok(h)
    }

    pub fn backward(&self, y: &NFactorization, f: &FactorMorphism) -> Result<FactorMorphism> {
        let m = self.steps.len();
        let mut ys = vec![y.clone(); m + 1];
        for k in (0..m).rev() {
            ys[k] = self.steps[k].right().apply(&ys[k + 1])?;
        }
        let mut h = f.clone();
        for (k, s) in self.steps.iter().enumerate() {
            h = s.backward(&ys[k + 1], &h)?;
        }
        Ok(h)
    }

    /// `η_X = φ(id_{L X})`.
    pub fn unit(&self, x: &NFactorization) -> Result<FactorMorphism> {
        let lx = self.left().apply(x)?;
        self.forward(x, &FactorMorphism::identity(&lx))
    }

    /// `ε_Y = φ^{-1}(id_{R Y})`.
    pub fn counit(&self, y: &NFactorization) -> Result<FactorMorphism> {
        let ry = self.right().apply(y)?;
        self.backward(y, &FactorMorphism::identity(&ry))
    }

    /// Checks both triangle identities at `x` (left side) and `y` (right
    /// side); returns the name of the first failing identity.
    pub fn triangle_identities(&self, x: &NFactorization, y: &NFactorization) -> Result<Option<&'static str>> {
        let l = self.left();
        let r = self.right();
        let lx = l.apply(x)?;
        let left = l.apply_morphism(&self.unit(x)?)?.then(&self.counit(&lx)?)?;
        if !left.is_identity() {
            return Ok(Some("counit after L(unit)"));
        }
        let ry = r.apply(y)?;
        let right = self.unit(&ry)?.then(&r.apply_morphism(&self.counit(y)?)?)?;
        if !right.is_identity() {
            return Ok(Some("R(counit) after unit"));
        }
        Ok(None)
    }

    /// Naturality of `φ` at `a: X' → X`, `g: L X → Y`, `b: Y → Y'`:
    /// `φ(L(a)·g·b) = a·φ(g)·R(b)`.
    pub fn is_natural(&self, a: &FactorMorphism, g: &FactorMorphism, b: &FactorMorphism) -> Result<bool> {
        let x = a.target();
        let lhs_in = self.left().apply_morphism(a)?.then(g)?.then(b)?;
        let lhs = self.forward(a.source(), &lhs_in)?;
        let rhs = a.then(&self.forward(x, g)?)?.then(&self.right().apply_morphism(b)?)?;
        Ok(lhs == rhs)
    }
}
