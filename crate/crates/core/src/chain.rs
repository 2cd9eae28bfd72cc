//! Chains of `Ā`-modules `M^1 → ⋯ → M^{n-1}`, the zeroth cokernel functor
//! and its inverse construction.
//!
//! Modules are stored 0-based: `modules[k]` is `M^{k+1}` and `maps[k]` is
//! `s^{k+1}: M^{k+1} → M^{k+2}`, given on generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::field::{Field, Scalar};
use crate::homotopy;
use crate::linalg::{solve_matrix_system, KMatrix};
use crate::matrix::TwistedMatrix;
use crate::normal_form;
use crate::presentation::{KLinear, ModulePresentation};
use crate::random::omega_atoms;
use crate::ring::{Poly, RingRef};
use crate::stable::{self, NullClass};

/// Every finitely generated module over the supported quotient rings `Ā`
/// is treated as Gorenstein projective; only finite dimensionality of `Ā`
/// over the coefficient field is checked.
pub const GORENSTEIN_ASSUMPTION: &str =
    "finitely generated modules over A/(ω) are taken to be Gorenstein projective";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainModule {
    ring: RingRef,
    modules: Vec<ModulePresentation>,
    maps: Vec<TwistedMatrix>,
}

/// Coordinate model of a chain over the coefficient field.
#[derive(Clone, Debug)]
pub struct LinearChain {
    pub spaces: Vec<KLinear>,
    pub maps: Vec<KMatrix>,
}

impl LinearChain {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(KLinear::dim).collect()
    }
}

impl ChainModule {
    pub fn new(ring: &RingRef, modules: Vec<ModulePresentation>, maps: Vec<TwistedMatrix>) -> Result<Self> {
        if maps.len() + 1 != modules.len() && !(modules.is_empty() && maps.is_empty()) {
            return Err(Error::Shape(format!("{} modules need {} maps", modules.len(), modules.len().saturating_sub(1))));
        }
        if ring.omega_degree() == 0 {
            return Err(Error::Precondition("A/(ω) must be nonzero and finite-dimensional".into()));
        }
        for (k, s) in maps.iter().enumerate() {
            if !modules[k].is_map_to(&modules[k + 1], s)? {
                return Err(Error::NotMorphism(format!("s^{} is not well defined on generators", k + 1)));
            }
        }
        for (k, m) in modules.iter().enumerate() {
            if !m.is_omega_torsion()? {
                return Err(Error::NotQuotientModule(format!("M^{} is not killed by ω", k + 1)));
            }
        }
        Ok(ChainModule { ring: ring.clone(), modules, maps })
    }

    pub fn zero(ring: &RingRef, len: usize) -> Self {
        let modules = vec![ModulePresentation::zero(ring); len];
        let maps = vec![TwistedMatrix::zero(ring, 0, 0, 0); len.saturating_sub(1)];
        ChainModule { ring: ring.clone(), modules, maps }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn modules(&self) -> &[ModulePresentation] {
        &self.modules
    }

    pub fn maps(&self) -> &[TwistedMatrix] {
        &self.maps
    }

    pub fn linearize(&self) -> Result<LinearChain> {
        let spaces: Vec<KLinear> = self.modules.iter().map(|m| m.k_linearize()).collect::<Result<_>>()?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, s)| spaces[k].map_matrix(s, &spaces[k + 1]))
            .collect::<Result<_>>()?;
        Ok(LinearChain { spaces, maps })
    }

    /// Generator images of the composite `M^{a+1} → M^{b+1}` (0-based `a ≤ b`).
    pub fn transport(&self, a: usize, b: usize) -> Result<TwistedMatrix> {
        let mut m = TwistedMatrix::identity(&self.ring, self.modules[a].generators());
        for s in &self.maps[a..b] {
            m = m.mul(s)?;
        }
        Ok(m)
    }
}

/// A chain map, one generator-image matrix per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMorphism {
    pub components: Vec<TwistedMatrix>,
}

impl ChainMorphism {
    pub fn linearize(&self, src: &LinearChain, tgt: &LinearChain) -> Result<Vec<KMatrix>> {
        self.components
            .iter()
            .enumerate()
            .map(|(k, c)| src.spaces[k].map_matrix(c, &tgt.spaces[k]))
            .collect()
    }
}

/// `Cok⁰(X)`: `M^i = Cok(d^{0..i-1})` with maps induced by `d^i`.
pub fn cok0(x: &NFactorization) -> Result<ChainModule> {
    let n = x.n();
    let ring = x.ring();
    let modules = (1..n)
        .map(|i| ModulePresentation::new(ring, x.rank(i), x.composite(0, i)?))
        .collect::<Result<Vec<_>>>()?;
    let maps = (1..n.saturating_sub(1)).map(|i| x.map(i).clone()).collect();
    ChainModule::new(ring, modules, maps)
}

pub fn cok0_morphism(f: &FactorMorphism) -> ChainMorphism {
    ChainMorphism { components: f.components()[1..].to_vec() }
}

/// First 1-based index `i` with `s^i` not injective, if any.
pub fn chain_is_mono(c: &ChainModule) -> Result<Option<usize>> {
    let lc = c.linearize()?;
    let f = c.ring.field();
    for (k, s) in lc.maps.iter().enumerate() {
        if s.rank(f) < s.rows() {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

/// Chain maps between linear chains, as a basis of the solution space.
pub fn chain_maps(field: &Field, c: &LinearChain, d: &LinearChain) -> Vec<Vec<KMatrix>> {
    let shapes: Vec<(usize, usize)> = c.dims().into_iter().zip(d.dims()).collect();
    let target: Vec<KMatrix> = chain_map_defects(field, c, d, &zero_maps(field, &shapes));
    solve_matrix_system(field, &shapes, &target, |u| chain_map_defects(field, c, d, u)).kernel
}

fn zero_maps(field: &Field, shapes: &[(usize, usize)]) -> Vec<KMatrix> {
    shapes.iter().map(|&(r, c)| KMatrix::zeros(field, r, c)).collect()
}

/// `x`-linearity and chain-square defects of `u`.
fn chain_map_defects(field: &Field, c: &LinearChain, d: &LinearChain, u: &[KMatrix]) -> Vec<KMatrix> {
    let mut out = Vec::new();
    for (k, phi) in u.iter().enumerate() {
        out.push(c.spaces[k].x_action().mul(field, phi).sub(field, &phi.mul(field, d.spaces[k].x_action())));
    }
    for k in 0..c.maps.len() {
        out.push(c.maps[k].mul(field, &u[k + 1]).sub(field, &u[k].mul(field, &d.maps[k])));
    }
    out
}

pub fn is_chain_map(field: &Field, c: &LinearChain, d: &LinearChain, u: &[KMatrix]) -> bool {
    chain_map_defects(field, c, d, u).iter().all(|m| m.is_zero(field))
}

#[derive(Clone, Debug)]
pub enum ChainIsoVerdict {
    Isomorphic { forward: Vec<KMatrix>, backward: Vec<KMatrix> },
    /// A proof of non-isomorphism (dimension or invariant-factor obstruction).
    NotIsomorphic(String),
    /// No isomorphism found within the sampling budget.
    NotFound,
}

impl ChainIsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, ChainIsoVerdict::Isomorphic { .. })
    }
}

const ISO_SAMPLES: usize = 64;

fn sample_scalar<R: Rng>(field: &Field, rng: &mut R) -> Scalar {
    match field.elements() {
        Some(e) => e[rng.gen_range(0..e.len())].clone(),
        None => field.from_i64(rng.gen_range(-7..=7)),
    }
}

/// Searches for a chain isomorphism `c → d` by sampling combinations of a
/// basis of chain maps; the inverse is verified to be a chain map.
pub fn chain_iso(c: &ChainModule, d: &ChainModule, seed: u64) -> Result<ChainIsoVerdict> {
    if c.len() != d.len() {
        return Ok(ChainIsoVerdict::NotIsomorphic("chains have different lengths".into()));
    }
    let field = c.ring.field().clone();
    let (lc, ld) = (c.linearize()?, d.linearize()?);
    if lc.dims() != ld.dims() {
        return Ok(ChainIsoVerdict::NotIsomorphic(format!("dimensions {:?} vs {:?}", lc.dims(), ld.dims())));
    }
    if c.ring.is_commutative() {
        for (k, (a, b)) in c.modules.iter().zip(&d.modules).enumerate() {
            if a.invariant_factors()? != b.invariant_factors()? {
                return Ok(ChainIsoVerdict::NotIsomorphic(format!("M^{} has different invariant factors", k + 1)));
            }
        }
    }
    let fwd = chain_maps(&field, &lc, &ld);
    let own = chain_maps(&field, &lc, &lc);
    if fwd.len() != own.len() {
        return Ok(ChainIsoVerdict::NotIsomorphic(format!(
            "Hom(c, d) has dimension {} but End(c) has dimension {}",
            fwd.len(),
            own.len()
        )));
    }
    let shapes: Vec<(usize, usize)> = lc.dims().into_iter().zip(ld.dims()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ISO_SAMPLES {
        let mut phi = zero_maps(&field, &shapes);
        for b in &fwd {
            let t = sample_scalar(&field, &mut rng);
            for (p, bk) in phi.iter_mut().zip(b) {
                *p = p.add(&field, &bk.scale(&field, &t));
            }
        }
        let Some(inv) = phi.iter().map(|p| p.inverse(&field)).collect::<Option<Vec<_>>>() else { continue };
        if is_chain_map(&field, &ld, &lc, &inv) {
            return Ok(ChainIsoVerdict::Isomorphic { forward: phi, backward: inv });
        }
    }
    Ok(ChainIsoVerdict::NotFound)
}

/// The projective chain `P_j`: zero before position `j` (1-based), `Ā^g`
/// from there on with identity maps.
pub fn projective_chain(ring: &RingRef, len: usize, j: usize, g: usize) -> ChainModule {
    let modules: Vec<ModulePresentation> = (1..=len)
        .map(|i| if i < j { ModulePresentation::zero(ring) } else { ModulePresentation::quotient_free(ring, g) })
        .collect();
    let maps = (1..len)
        .map(|i| {
            let (a, b) = (modules[i - 1].generators(), modules[i].generators());
            if a == 0 {
                TwistedMatrix::zero(ring, 0, b, 0)
            } else {
                TwistedMatrix::identity(ring, g)
            }
        })
        .collect();
    ChainModule { ring: ring.clone(), modules, maps }
}

/// A projective chain with an epimorphism onto `d`, built from all
/// generators of every `M^j`.
pub fn projective_cover(d: &ChainModule) -> Result<(ChainModule, ChainMorphism)> {
    let ring = &d.ring;
    let len = d.len();
    let gens: Vec<usize> = d.modules.iter().map(ModulePresentation::generators).collect();
    let prefix = |i: usize| -> usize { gens[..=i].iter().sum() };
    let modules: Vec<ModulePresentation> = (0..len).map(|i| ModulePresentation::quotient_free(ring, prefix(i))).collect();
    let maps = (0..len.saturating_sub(1))
        .map(|i| {
            let inc = TwistedMatrix::identity(ring, prefix(i));
            TwistedMatrix::hstack(&[&inc, &TwistedMatrix::zero(ring, prefix(i), gens[i + 1], 0)])
        })
        .collect::<Result<Vec<_>>>()?;
    let comps = (0..len)
        .map(|i| {
            let blocks: Vec<TwistedMatrix> = (0..=i).map(|j| d.transport(j, i)).collect::<Result<_>>()?;
            let refs: Vec<&TwistedMatrix> = blocks.iter().collect();
            TwistedMatrix::vstack(&refs)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = ChainModule::new(ring, modules, maps)?;
    Ok((p, ChainMorphism { components: comps }))
}

/// Whether the chain map `phi: c → d` factors through a projective chain.
pub fn factors_through_projective(c: &ChainModule, d: &ChainModule, phi: &ChainMorphism) -> Result<bool> {
    let field = c.ring.field().clone();
    let (p, pi) = projective_cover(d)?;
    let (lc, ld, lp) = (c.linearize()?, d.linearize()?, p.linearize()?);
    let pi_k = pi.linearize(&lp, &ld)?;
    let phi_k = phi.linearize(&lc, &ld)?;
    let shapes: Vec<(usize, usize)> = lc.dims().into_iter().zip(lp.dims()).collect();
    let mut target = chain_map_defects(&field, &lc, &lp, &zero_maps(&field, &shapes));
    target.extend(phi_k);
    let sol = solve_matrix_system(&field, &shapes, &target, |u| {
        let mut out = chain_map_defects(&field, &lc, &lp, u);
        out.extend(u.iter().zip(&pi_k).map(|(a, b)| a.mul(&field, b)));
        out
    });
    Ok(sol.particular.is_some())
}

/// The unique `h` with `f` followed by `h` equal to `ω·I` (twist 1), for an
/// injective square `f` whose cokernel is killed by `ω`.
pub fn two_fold_division(f: &TwistedMatrix) -> Result<Option<TwistedMatrix>> {
    let ring = f.ring();
    if !ring.is_commutative() {
        return Err(Error::Unsupported("ω-division over a skew ring".into()));
    }
    if !f.is_square() || f.twist() != 0 {
        return Err(Error::Shape("ω-division needs a square twist 0 matrix".into()));
    }
    let w = TwistedMatrix::omega(ring, f.rows()).with_twist(0);
    Ok(normal_form::solve_left(f, &w)?.map(|h| h.with_twist(1)))
}

/// Builds a factorization whose zeroth cokernel chain is isomorphic to `c`.
///
/// `X^{n-1}` is a minimal free cover of `M^{n-1}` (from its Smith form),
/// `X^0` its kernel, and `X^i` the preimage of the image of `M^i`; the
/// last map is the ω-division of the inclusion `X^0 ⊂ X^{n-1}`.
pub fn lift(c: &ChainModule, n: usize) -> Result<NFactorization> {
    let ring = c.ring.clone();
    if !ring.is_commutative() {
        return Err(Error::Unsupported("lifting chains over a skew ring".into()));
    }
    if c.len() + 1 != n {
        return Err(Error::Shape(format!("a chain of length {} lifts to a {}-fold factorization", c.len(), c.len() + 1)));
    }
    if let Some(i) = chain_is_mono(c)? {
        return Err(Error::Precondition(format!("s^{i} is not injective")));
    }
    if n == 1 {
        return Ok(NFactorization::zero(&ring, 1));
    }
    let top = &c.modules[n - 2];
    let s = normal_form::smith_form(top.relations())?;
    let gp = top.generators();
    let mut keep = Vec::new();
    for k in 0..gp {
        let d = s.diag.get(k).cloned().unwrap_or_else(Poly::zero);
        if d.is_zero() {
            return Err(Error::NotQuotientModule(format!("M^{} has a free summand", n - 1)));
        }
        if d.deg() > 0 {
            keep.push((k, d));
        }
    }
    let g = keep.len();
    if g == 0 {
        return Ok(NFactorization::zero(&ring, n));
    }
    // images of the cover's basis in the generators of M^{n-1}
    let rows: Vec<TwistedMatrix> = keep.iter().map(|(k, _)| s.v_inv.submatrix(*k..k + 1, 0..gp)).collect();
    let cover = TwistedMatrix::vstack(&rows.iter().collect::<Vec<_>>())?;
    let b0 = TwistedMatrix::diagonal(&ring, &keep.iter().map(|(_, d)| d.clone()).collect::<Vec<_>>(), 0);
    let mut bases = vec![b0];
    for i in 1..n - 1 {
        let img = c.transport(i - 1, n - 2)?;
        let stacked = TwistedMatrix::vstack(&[&cover, &img, top.relations()])?;
        let ker = normal_form::left_kernel(&stacked)?;
        let proj = ker.submatrix(0..ker.rows(), 0..g);
        let h = normal_form::hermite_form(&proj)?;
        let basis = h.h.submatrix(0..h.rank(), 0..g);
        if basis.rows() != g {
            return Err(Error::Internal(format!("preimage of M^{i} has rank {} instead of {g}", basis.rows())));
        }
        bases.push(basis);
    }
    bases.push(TwistedMatrix::identity(&ring, g));
    let mut maps = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let d = normal_form::solve_right(&bases[i + 1], &bases[i])?
            .ok_or_else(|| Error::Internal(format!("X^{i} is not contained in X^{}", i + 1)))?;
        maps.push(d);
    }
    let w = TwistedMatrix::omega(&ring, g).with_twist(0);
    let last = normal_form::solve_right(&bases[0], &w)?
        .ok_or_else(|| Error::Internal("ω does not divide through the kernel".into()))?;
    maps.push(last.with_twist(1));
    NFactorization::validated(&ring, maps)
}

/// Verdicts of the faithfulness criteria for one morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub cok_zero: bool,
    pub factors_through_theta0: bool,
    pub cok_factors_through_projective: bool,
    pub null_homotopic: bool,
}

impl FaithfulnessReport {
    pub fn consistent(&self) -> bool {
        self.cok_zero == self.factors_through_theta0 && self.cok_factors_through_projective == self.null_homotopic
    }
}

/// Whether `d^0, …, d^{n-2}` are injective.
pub fn has_mono_structure(x: &NFactorization) -> Result<bool> {
    for i in 0..x.n().saturating_sub(1) {
        if normal_form::left_kernel(x.map(i))?.rows() > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn cok0_faithfulness_check(f: &FactorMorphism) -> Result<FaithfulnessReport> {
    let ring = f.ring();
    if !ring.is_commutative() {
        return Err(Error::Unsupported("faithfulness check over a skew ring".into()));
    }
    for x in [f.source(), f.target()] {
        if !has_mono_structure(x)? {
            return Err(Error::Precondition("some d^i with i ≤ n−2 is not injective".into()));
        }
    }
    let (c, d) = (cok0(f.source())?, cok0(f.target())?);
    let phi = cok0_morphism(f);
    let (lc, ld) = (c.linearize()?, d.linearize()?);
    let field = ring.field();
    let cok_zero = phi.linearize(&lc, &ld)?.iter().all(|m| m.is_zero(field));
    Ok(FaithfulnessReport {
        cok_zero,
        factors_through_theta0: stable::in_null_class(f, NullClass::ThetaZero)?,
        cok_factors_through_projective: factors_through_projective(&c, &d, &phi)?,
        null_homotopic: homotopy::is_p_null_homotopic(f)?.is_null(),
    })
}

/// A random chain of submodules `M^1 ⊂ ⋯ ⊂ M^{len}`: the top is a sum of
/// cyclic modules `A/(δ)` with `δ | ω`, each lower term is generated by
/// random elements of the next.
pub fn random_mono_chain<R: Rng + ?Sized>(ring: &RingRef, len: usize, max_gens: usize, max_deg: usize, rng: &mut R) -> Result<ChainModule> {
    if len == 0 {
        return ChainModule::new(ring, vec![], vec![]);
    }
    let atoms = omega_atoms(ring);
    let g = rng.gen_range(1..=max_gens.max(1));
    let divisors: Vec<Poly> = (0..g)
        .map(|_| {
            atoms.atoms.iter().fold(ring.one(), |acc, a| if rng.gen_bool(0.6) { ring.mul(&acc, a) } else { acc })
        })
        .collect();
    let mut modules = vec![ModulePresentation::new(ring, g, TwistedMatrix::diagonal(ring, &divisors, 0))?];
    let mut maps = Vec::new();
    for _ in 1..len {
        let upper = &modules[0];
        let gu = upper.generators();
        let t = rng.gen_range(0..=max_gens.max(1));
        let gens = crate::random::random_matrix(ring, t, gu, 0, max_deg, rng);
        // relations: kernel of A^t → upper
        let stacked = TwistedMatrix::vstack(&[&gens, upper.relations()])?;
        let ker = normal_form::left_kernel(&stacked)?;
        let rel = ker.submatrix(0..ker.rows(), 0..t);
        let h = normal_form::hermite_form(&rel)?;
        let rel = h.h.submatrix(0..h.rank(), 0..t);
        modules.insert(0, ModulePresentation::new(ring, t, rel)?);
        maps.insert(0, gens);
    }
    ChainModule::new(ring, modules, maps)
}

/// An object built by lifting a random mono chain of length `n - 1`
/// (commutative rings).
pub fn random_lifted_object<R: Rng + ?Sized>(ring: &RingRef, n: usize, max_gens: usize, max_deg: usize, rng: &mut R) -> Result<NFactorization> {
    let c = random_mono_chain(ring, n.saturating_sub(1), max_gens, max_deg, rng)?;
    lift(&c, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::tests::qx;
    use crate::field::FieldSpec;
    use crate::functors::theta;
    use crate::random::{self, monomial_object, Bounds};
    use crate::ring::Ring;

    #[test]
    fn cok0_of_xxx() {
        let r = qx(&[0, 0, 0, 1]);
        let c = cok0(&monomial_object(&r, &[1, 1, 1])).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.modules()[0].invariant_factors().unwrap(), vec![r.x()]);
        assert_eq!(c.modules()[1].invariant_factors().unwrap(), vec![r.from_ints(&[0, 0, 1])]);
        assert_eq!(c.maps()[0], TwistedMatrix::scalar(&r, 1, &r.x(), 0));
        assert_eq!(chain_is_mono(&c).unwrap(), None);
    }

    #[test]
    fn compositions_of_degree_give_smith_data() {
        fn compositions(d: usize) -> Vec<Vec<usize>> {
            if d == 0 {
                return vec![vec![]];
            }
            (1..=d).flat_map(|a| compositions(d - a).into_iter().map(move |mut c| {
                c.insert(0, a);
                c
            })).collect()
        }
        for d in 1..=4 {
            let mut w = vec![0; d + 1];
            w[d] = 1;
            let r = qx(&w);
            for a in compositions(d) {
                let c = cok0(&monomial_object(&r, &a)).unwrap();
                let mut acc = 0;
                for (k, m) in c.modules().iter().enumerate() {
                    acc += a[k];
                    let mut e = vec![0; acc + 1];
                    e[acc] = 1;
                    assert_eq!(m.invariant_factors().unwrap(), vec![r.from_ints(&e)]);
                }
                assert_eq!(chain_is_mono(&c).unwrap(), None);
            }
        }
    }

    #[test]
    fn cok0_of_trivial_objects() {
        let r = qx(&[0, 0, 1]);
        let n = 4;
        let z = cok0(&theta(&r, n, 0, 2).unwrap()).unwrap();
        assert!(z.linearize().unwrap().dims().iter().all(|&d| d == 0));
        for i in 1..n {
            let c = cok0(&theta(&r, n, i, 1).unwrap()).unwrap();
            let p = projective_chain(&r, n - 1, i, 1);
            assert!(chain_iso(&c, &p, 0).unwrap().is_iso(), "θ^{i}");
        }
    }

    #[test]
    fn non_mono_chain_is_detected() {
        let r = qx(&[0, 0, 1]);
        let m = ModulePresentation::quotient_free(&r, 1);
        let c = ChainModule::new(&r, vec![m.clone(), m], vec![TwistedMatrix::zero(&r, 1, 1, 0)]).unwrap();
        assert_eq!(chain_is_mono(&c).unwrap(), Some(1));
        assert!(lift(&c, 3).is_err());
    }

    #[test]
    fn lift_round_trips() {
        let r = qx(&[0, 0, 0, 1]);
        let c = cok0(&monomial_object(&r, &[1, 1, 1])).unwrap();
        let x = lift(&c, 3).unwrap();
        assert!(chain_iso(&cok0(&x).unwrap(), &c, 0).unwrap().is_iso());
        let z = lift(&ChainModule::zero(&r, 2), 3).unwrap();
        assert!(z.is_zero_object());
        let f5 = Ring::new(FieldSpec::Prime { p: 5 }, 0, vec![0, 4, 1].into_iter().map(Scalar::Fin).collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for ring in [qx(&[0, 0, -1, 1]), f5] {
            for len in 0..=3 {
                for _ in 0..8 {
                    let c = random_mono_chain(&ring, len, 2, 1, &mut rng).unwrap();
                    assert_eq!(chain_is_mono(&c).unwrap(), None);
                    let x = lift(&c, len + 1).unwrap();
                    let top = c.modules().last().map(|m| m.invariant_factors().unwrap().len()).unwrap_or(0);
                    assert_eq!(x.rank(x.n() - 1), top);
                    assert!(chain_iso(&cok0(&x).unwrap(), &c, 1).unwrap().is_iso());
                }
            }
        }
    }

    #[test]
    fn chains_with_different_factors_are_not_isomorphic() {
        let r = qx(&[0, 0, 0, 1]);
        let a = cok0(&monomial_object(&r, &[1, 1, 1])).unwrap();
        let b = cok0(&monomial_object(&r, &[2, 0, 1])).unwrap();
        assert!(matches!(chain_iso(&a, &b, 0).unwrap(), ChainIsoVerdict::NotIsomorphic(_)));
        assert!(chain_iso(&a, &a, 0).unwrap().is_iso());
    }

    #[test]
    fn cok0_is_functorial_and_torsion() {
        let r = qx(&[0, 0, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let b = Bounds { n: 3, max_rank: 2, max_deg: 1 };
        let field = r.field().clone();
        for _ in 0..10 {
            let x = random::random_object(&r, b, &mut rng);
            let (y, f, _) = random::conjugate(&x, 1, &mut rng);
            let (z, g, _) = random::conjugate(&y, 1, &mut rng);
            let (lx, ly, lz) = (cok0(&x).unwrap().linearize().unwrap(), cok0(&y).unwrap().linearize().unwrap(), cok0(&z).unwrap().linearize().unwrap());
            let fg = cok0_morphism(&f.then(&g).unwrap()).linearize(&lx, &lz).unwrap();
            let a = cok0_morphism(&f).linearize(&lx, &ly).unwrap();
            let bb = cok0_morphism(&g).linearize(&ly, &lz).unwrap();
            for k in 0..fg.len() {
                assert_eq!(fg[k], a[k].mul(&field, &bb[k]));
            }
            assert!(cok0(&x).unwrap().modules().iter().all(|m| m.is_omega_torsion().unwrap()));
        }
    }

    #[test]
    fn faithfulness_examples() {
        let r = qx(&[0, 0, 1]);
        let xx = monomial_object(&r, &[1, 1]);
        let comps = FactorMorphism::identity(&xx).components().iter().map(|c| c.scale_left(r.omega())).collect();
        let w = FactorMorphism::new(&xx, &xx, comps).unwrap();
        let rep = cok0_faithfulness_check(&w).unwrap();
        assert!(rep.cok_zero && rep.factors_through_theta0 && rep.consistent());
        let id = cok0_faithfulness_check(&FactorMorphism::identity(&xx)).unwrap();
        assert!(!id.null_homotopic && id.consistent());
    }

    #[test]
    fn two_fold_division_examples() {
        let r = qx(&[0, 0, 1]);
        let f = TwistedMatrix::scalar(&r, 1, &r.x(), 0);
        let h = two_fold_division(&f).unwrap().unwrap();
        assert_eq!(f.compose(&h).unwrap(), TwistedMatrix::omega(&r, 1));
        let g = TwistedMatrix::scalar(&r, 1, &r.from_ints(&[0, 0, 0, 1]), 0);
        assert!(two_fold_division(&g).unwrap().is_none());
    }
}
