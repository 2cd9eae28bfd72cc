//! Morphism modules and their stable quotients (commutative rings).

use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::homotopy::{self, witness_shapes};
use crate::matrix::TwistedMatrix;
use crate::normal_form;
use crate::presentation::ModulePresentation;
use crate::ring::{Poly, RingRef};
use crate::solve::{self, BlockShape};

/// Which morphisms are divided out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullClass {
    /// Null-homotopic morphisms.
    Homotopic,
    /// Morphisms factoring through some `θ^0(P)`.
    ThetaZero,
}

/// The `A`-module `Hom(X, Y)`, free with the listed basis.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub basis: Vec<FactorMorphism>,
    pub presentation: ModulePresentation,
}

#[derive(Clone, Debug)]
pub struct StableHomReport {
    pub hom_rank: usize,
    /// Nonunit invariant factors; zeros stand for free summands.
    pub invariant_factors: Vec<Poly>,
    /// Dimension over the coefficient field, `None` if infinite.
    pub k_dimension: Option<usize>,
    /// One morphism per invariant factor, generating the quotient.
    pub representatives: Vec<FactorMorphism>,
    pub presentation: ModulePresentation,
    /// Whether every invariant factor divides a power of `ω`.
    pub omega_torsion: bool,
}

impl StableHomReport {
    pub fn is_zero(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

fn require_commutative(ring: &RingRef) -> Result<()> {
    if ring.is_commutative() {
        Ok(())
    } else {
        Err(Error::Unsupported("morphism modules over a skew ring".into()))
    }
}

fn component_shapes(x: &NFactorization, y: &NFactorization) -> Vec<BlockShape> {
    (0..x.n()).map(|j| BlockShape::new(x.rank(j), y.rank(j), 0)).collect()
}

fn square_defects(x: &NFactorization, y: &NFactorization, fs: &[TwistedMatrix]) -> Result<Vec<TwistedMatrix>> {
    let n = x.n();
    (0..n).map(|i| x.map(i).compose(&fs[(i + 1) % n])?.sub(&fs[i].compose(y.map(i))?)).collect()
}

fn check_pair(x: &NFactorization, y: &NFactorization) -> Result<()> {
    if !crate::ring::same_ring(x.ring(), y.ring()) {
        return Err(Error::IncompatibleRing);
    }
    if x.n() != y.n() {
        return Err(Error::Shape(format!("{}-fold vs {}-fold", x.n(), y.n())));
    }
    require_commutative(x.ring())
}

/// All morphisms `X → Y` as a free `A`-module.
pub fn hom_module(x: &NFactorization, y: &NFactorization) -> Result<HomModule> {
    check_pair(x, y)?;
    let ring = x.ring();
    let shapes = component_shapes(x, y);
    let out_len: usize = (0..x.n()).map(|i| x.rank(i) * y.rank(i + 1)).sum();
    let basis = if solve::total_len(&shapes) == 0 {
        vec![]
    } else {
        let m = solve::linear_map_matrix(ring, &shapes, out_len, |fs| square_defects(x, y, fs))?;
        let k = normal_form::left_kernel(&m)?;
        k.row_vecs()
            .iter()
            .map(|row| FactorMorphism::new(x, y, solve::unflatten(ring, &shapes, row)?))
            .collect::<Result<Vec<_>>>()?
    };
    let presentation = ModulePresentation::new(ring, basis.len(), TwistedMatrix::zero(ring, 0, basis.len(), 0))?;
    Ok(HomModule { basis, presentation })
}

/// Flattened morphisms spanning the chosen null class.
fn null_generators(x: &NFactorization, y: &NFactorization, class: NullClass) -> Result<TwistedMatrix> {
    let ring = x.ring();
    let out_len: usize = (0..x.n()).map(|i| x.rank(i) * y.rank(i)).sum();
    match class {
        NullClass::Homotopic => {
            let shapes = witness_shapes(x, y);
            solve::linear_map_matrix(ring, &shapes, out_len, |h| {
                homotopy::reconstruct_from_witness(x, y, &homotopy::HomotopyWitness { maps: h.to_vec() })
                    .map(FactorMorphism::into_components)
            })
        }
        NullClass::ThetaZero => {
            let n = x.n();
            let shapes = [BlockShape::new(x.rank(n - 1), y.rank(0), 0)];
            let units = homotopy::unit_to_theta(x, 0)?;
            solve::linear_map_matrix(ring, &shapes, out_len, |c| {
                let b = homotopy::from_theta(y, 0, &c[0])?;
                units.iter().zip(&b).map(|(u, b)| u.mul(b)).collect()
            })
        }
    }
}

/// Whether `f` lies in the chosen null class (commutative rings).
pub fn in_null_class(f: &FactorMorphism, class: NullClass) -> Result<bool> {
    require_commutative(f.ring())?;
    let g = null_generators(f.source(), f.target(), class)?;
    let t = TwistedMatrix::new(f.ring(), 1, g.cols(), 0, solve::flatten(f.components()))?;
    if g.rows() == 0 {
        return Ok(t.is_zero());
    }
    normal_form::row_space_contains(&g, &t)
}

fn divides_omega_power(ring: &RingRef, d: &Poly) -> bool {
    if d.is_zero() {
        return false;
    }
    let p = ring.pow(ring.omega(), d.deg().max(1) as u32);
    ring.left_divmod(&p, d).map(|(_, r)| r.is_zero()).unwrap_or(false)
}

/// `Hom(X, Y)` modulo the chosen null class.
pub fn stable_hom(x: &NFactorization, y: &NFactorization, class: NullClass) -> Result<StableHomReport> {
    let hom = hom_module(x, y)?;
    let ring = x.ring();
    let k = hom.basis.len();
    if k == 0 {
        return Ok(StableHomReport {
            hom_rank: 0,
            invariant_factors: vec![],
            k_dimension: Some(0),
            representatives: vec![],
            presentation: ModulePresentation::zero(ring),
            omega_torsion: true,
        });
    }
    let cols = solve::flatten(hom.basis[0].components()).len();
    let kmat = TwistedMatrix::new(
        ring,
        k,
        cols,
        0,
        hom.basis.iter().flat_map(|f| solve::flatten(f.components())).collect(),
    )?;
    let nulls = null_generators(x, y, class)?;
    let z = if nulls.rows() == 0 {
        TwistedMatrix::zero(ring, 0, k, 0)
    } else {
        normal_form::solve_right(&kmat, &nulls)?
            .ok_or_else(|| Error::Internal("null-homotopic morphism outside the morphism module".into()))?
    };
    // pad so the Smith form has a diagonal entry for every basis morphism
    let z = TwistedMatrix::vstack(&[&z, &TwistedMatrix::zero(ring, k, k, 0)])?;
    let s = normal_form::smith_form(&z)?;
    let mut factors = Vec::new();
    let mut reps = Vec::new();
    for (i, d) in s.diag.iter().enumerate() {
        if !d.is_zero() && d.deg() == 0 {
            continue;
        }
        let coeffs = s.v_inv.submatrix(i..i + 1, 0..k);
        let flat = coeffs.mul(&kmat)?;
        let comps = solve::unflatten(ring, &component_shapes(x, y), flat.entries())?;
        reps.push(FactorMorphism::new(x, y, comps)?);
        factors.push(d.clone());
    }
    let k_dimension = factors.iter().try_fold(0usize, |acc, d| (!d.is_zero()).then(|| acc + d.deg() as usize));
    let omega_torsion = factors.iter().all(|d| divides_omega_power(ring, d));
    let presentation = ModulePresentation::new(ring, factors.len(), TwistedMatrix::diagonal(ring, &factors, 0))?;
    Ok(StableHomReport {
        hom_rank: k,
        invariant_factors: factors,
        k_dimension,
        representatives: reps,
        presentation,
        omega_torsion,
    })
}
