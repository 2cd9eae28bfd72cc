//! Seeded generators for objects and morphisms.
//!
//! Objects come from diagonal seeds (each diagonal position carries a
//! splitting of `ω` into `n` ordered factors) conjugated by random
//! invertible matrices, optionally summed with trivial factorizations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::factorization::{FactorMorphism, NFactorization};
use crate::field::Scalar;
use crate::functors::theta;
use crate::homotopy::{reconstruct_from_witness, witness_shapes, HomotopyWitness};
use crate::matrix::TwistedMatrix;
use crate::ring::{Poly, RingRef};
use crate::stable::hom_module;

/// Size bounds for generated data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub n: usize,
    pub max_rank: usize,
    pub max_deg: usize,
}

/// Irreducible pieces of `ω` used to build ordered splittings.
#[derive(Clone, Debug)]
pub struct OmegaAtoms {
    pub atoms: Vec<Poly>,
    pub lead: Scalar,
}

/// Splits `ω` into its leading coefficient, linear factors over the
/// coefficient field (found by root search) and a monic cofactor.
pub fn omega_atoms(ring: &RingRef) -> OmegaAtoms {
    let f = ring.field();
    let (monic, inv) = ring.monic(ring.omega());
    let lead = f.inv(&inv);
    let mut atoms = Vec::new();
    if !ring.is_commutative() {
        // ω = c·x^m
        atoms = vec![ring.x(); ring.omega_degree()];
        return OmegaAtoms { atoms, lead };
    }
    let mut rest = monic;
    for r in candidate_roots(ring, &rest) {
        let lin = ring.poly(vec![f.neg(&r), f.one()]);
        while rest.deg() >= 1 {
            match ring.exact_left_quotient(&rest, &lin) {
                Some(q) => {
                    atoms.push(lin.clone());
                    rest = q;
                }
                None => break,
            }
        }
    }
    if rest.deg() >= 1 {
        atoms.push(rest);
    }
    OmegaAtoms { atoms, lead }
}

fn candidate_roots(ring: &RingRef, p: &Poly) -> Vec<Scalar> {
    let f = ring.field();
    if let Some(elts) = f.elements() {
        return elts;
    }
    // rational root test on the integer multiple of p
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, ToPrimitive, Zero};
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.as_rat().denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c.as_rat() * &lcm).to_integer()).collect();
    let divisors = |v: &BigInt| -> Vec<i64> {
        let v = v.abs().to_i64().unwrap_or(0);
        if v == 0 || v > 1_000_000 {
            return vec![];
        }
        (1..=v).filter(|d| v % d == 0).collect()
    };
    let mut out = vec![f.zero()];
    let c0 = ints.iter().find(|c| !c.is_zero()).cloned().unwrap_or_default();
    let lead = ints.last().cloned().unwrap_or_default();
    for a in divisors(&c0) {
        for b in divisors(&lead) {
            for s in [1, -1] {
                let r = f.rational(s * a, b);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// An ordered splitting `ω = p_0 ⋯ p_{n-1}`; the leading coefficient sits
/// in the last factor.
pub fn random_splitting<R: Rng + ?Sized>(ring: &RingRef, atoms: &OmegaAtoms, n: usize, rng: &mut R) -> Vec<Poly> {
    let mut parts = vec![ring.one(); n];
    for a in &atoms.atoms {
        let slot = rng.gen_range(0..n);
        parts[slot] = ring.mul(&parts[slot], a);
    }
    parts[n - 1] = ring.scale_left(&atoms.lead, &parts[n - 1]);
    parts
}

fn last_twist(i: usize, n: usize) -> i64 {
    if i + 1 == n {
        1
    } else {
        0
    }
}

/// A diagonal object of rank `r`: position `j` carries its own splitting.
pub fn diagonal_seed<R: Rng + ?Sized>(ring: &RingRef, n: usize, r: usize, rng: &mut R) -> NFactorization {
    let atoms = omega_atoms(ring);
    let splits: Vec<Vec<Poly>> = (0..r).map(|_| random_splitting(ring, &atoms, n, rng)).collect();
    let maps = (0..n)
        .map(|i| {
            let diag: Vec<Poly> = splits.iter().map(|s| s[i].clone()).collect();
            TwistedMatrix::diagonal(ring, &diag, last_twist(i, n))
        })
        .collect();
    NFactorization::new(ring, maps).expect("diagonal seed shapes")
}

/// A rank-one object with maps `x^{a_0}, …, x^{a_{n-1}}` (requires
/// `ω = c·x^m` with `Σ a_i = m`).
pub fn monomial_object(ring: &RingRef, exponents: &[usize]) -> NFactorization {
    let n = exponents.len();
    let lead = ring.omega().lead().expect("nonzero omega").clone();
    let maps = exponents
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let c = if i + 1 == n { lead.clone() } else { ring.field().one() };
            TwistedMatrix::scalar(ring, 1, &ring.monomial(c, a), last_twist(i, n))
        })
        .collect();
    NFactorization::new(ring, maps).expect("monomial object shapes")
}

/// A random invertible matrix together with its inverse: a product of a
/// few elementary matrices, a permutation and a unit diagonal.
pub fn random_invertible<R: Rng + ?Sized>(
    ring: &RingRef,
    r: usize,
    max_deg: usize,
    rng: &mut R,
) -> (TwistedMatrix, TwistedMatrix) {
    let mut g = TwistedMatrix::identity(ring, r);
    let mut g_inv = TwistedMatrix::identity(ring, r);
    if r == 0 {
        return (g, g_inv);
    }
    // unit diagonal
    let diag: Vec<Scalar> = (0..r).map(|_| ring.random_nonzero_scalar(rng)).collect();
    let f = ring.field();
    let d = TwistedMatrix::diagonal(ring, &diag.iter().map(|c| ring.constant(c.clone())).collect::<Vec<_>>(), 0);
    let d_inv = TwistedMatrix::diagonal(ring, &diag.iter().map(|c| ring.constant(f.inv(c))).collect::<Vec<_>>(), 0);
    g = g.mul(&d).unwrap();
    g_inv = d_inv.mul(&g_inv).unwrap();
    // permutation
    let mut perm: Vec<usize> = (0..r).collect();
    perm.shuffle(rng);
    let p = TwistedMatrix::identity(ring, r).select_rows(&perm);
    let p_inv = p.transpose();
    g = g.mul(&p).unwrap();
    g_inv = p_inv.mul(&g_inv).unwrap();
    if r >= 2 {
        for _ in 0..rng.gen_range(1..=r) {
            let i = rng.gen_range(0..r);
            let mut j = rng.gen_range(0..r - 1);
            if j >= i {
                j += 1;
            }
            let a = ring.random_poly(rng, max_deg);
            let mut e = TwistedMatrix::identity(ring, r);
            e.set(i, j, a.clone());
            let mut e_inv = TwistedMatrix::identity(ring, r);
            e_inv.set(i, j, ring.neg(&a));
            g = g.mul(&e).unwrap();
            g_inv = e_inv.mul(&g_inv).unwrap();
        }
    }
    (g, g_inv)
}

/// Conjugates `x` by random invertible components; returns the new object
/// and the isomorphisms `x → x'` and `x' → x`.
pub fn conjugate<R: Rng + ?Sized>(
    x: &NFactorization,
    max_deg: usize,
    rng: &mut R,
) -> (NFactorization, FactorMorphism, FactorMorphism) {
    let ring = x.ring();
    let n = x.n();
    let gs: Vec<(TwistedMatrix, TwistedMatrix)> =
        x.ranks().iter().map(|&r| random_invertible(ring, r, max_deg, rng)).collect();
    let maps = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let left = if i + 1 == n { gs[i].1.twist_matrix(1) } else { gs[i].1.clone() };
            left.mul(x.map(i)).unwrap().mul(&gs[j].0).unwrap().with_twist(x.map(i).twist())
        })
        .collect();
    let y = NFactorization::new(ring, maps).expect("conjugation preserves shapes");
    let fwd = FactorMorphism::from_parts(x.clone(), y.clone(), gs.iter().map(|g| g.0.clone()).collect());
    let bwd = FactorMorphism::from_parts(y.clone(), x.clone(), gs.iter().map(|g| g.1.clone()).collect());
    (y, fwd, bwd)
}

/// A random valid object within `bounds`.
pub fn random_object<R: Rng + ?Sized>(ring: &RingRef, bounds: Bounds, rng: &mut R) -> NFactorization {
    let n = bounds.n;
    let r = rng.gen_range(1..=bounds.max_rank.max(1));
    let conj_deg = bounds.max_deg.min(1);
    match rng.gen_range(0..10) {
        // plain diagonal seed
        0 => diagonal_seed(ring, n, r, rng),
        // a trivial factorization plus a conjugated seed
        1 if r >= 2 => {
            let i = rng.gen_range(0..n);
            let t = theta(ring, n, i, 1).unwrap();
            let s = conjugate(&diagonal_seed(ring, n, r - 1, rng), conj_deg, rng).0;
            let sum = s.direct_sum(&t).unwrap().sum;
            conjugate(&sum, conj_deg, rng).0
        }
        _ => conjugate(&diagonal_seed(ring, n, r, rng), conj_deg, rng).0,
    }
}

/// A random twist 0 matrix with entries of degree at most `max_deg`.
pub fn random_matrix<R: Rng + ?Sized>(
    ring: &RingRef,
    rows: usize,
    cols: usize,
    twist: i64,
    max_deg: usize,
    rng: &mut R,
) -> TwistedMatrix {
    let entries = (0..rows * cols)
        .map(|_| if rng.gen_bool(0.25) { Poly::zero() } else { ring.random_poly(rng, max_deg) })
        .collect();
    TwistedMatrix::new(ring, rows, cols, twist, entries).unwrap()
}

/// A random homotopy witness between `x` and `y`.
pub fn random_witness<R: Rng + ?Sized>(x: &NFactorization, y: &NFactorization, max_deg: usize, rng: &mut R) -> HomotopyWitness {
    let maps = witness_shapes(x, y)
        .into_iter()
        .map(|s| random_matrix(x.ring(), s.rows, s.cols, s.twist, max_deg, rng))
        .collect();
    HomotopyWitness { maps }
}

/// A null-homotopic morphism `x → y` together with the witness it was built from.
pub fn random_null_morphism<R: Rng + ?Sized>(
    x: &NFactorization,
    y: &NFactorization,
    max_deg: usize,
    rng: &mut R,
) -> (FactorMorphism, HomotopyWitness) {
    let w = random_witness(x, y, max_deg, rng);
    let f = reconstruct_from_witness(x, y, &w).expect("witness shapes match the objects");
    (f, w)
}

/// A random element of `Hom(x, y)`: a combination of a basis of the
/// morphism module with coefficients of degree at most `max_deg`
/// (commutative rings).
pub fn random_hom_element<R: Rng + ?Sized>(
    x: &NFactorization,
    y: &NFactorization,
    max_deg: usize,
    rng: &mut R,
) -> Result<FactorMorphism> {
    let hom = hom_module(x, y)?;
    let ring = x.ring();
    let mut f = FactorMorphism::zero(x, y);
    for b in &hom.basis {
        let c = ring.random_poly(rng, max_deg);
        let comps = b.components().iter().map(|m| m.scale_left(&c)).collect();
        f = f.add(&FactorMorphism::from_parts(x.clone(), y.clone(), comps))?;
    }
    Ok(f)
}
