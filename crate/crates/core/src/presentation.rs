//! Finitely presented modules over `A` and their coordinate models over
//! the coefficient field when they are killed by `ω`.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::KMatrix;
use crate::matrix::TwistedMatrix;
use crate::normal_form;
use crate::ring::{Poly, RingRef};

/// `A^g` modulo the row space of `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    ring: RingRef,
    generators: usize,
    relations: TwistedMatrix,
}

impl ModulePresentation {
    pub fn new(ring: &RingRef, generators: usize, relations: TwistedMatrix) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::Shape(format!(
                "relations have {} columns for {} generators",
                relations.cols(),
                generators
            )));
        }
        if relations.twist() != 0 {
            return Err(Error::Shape("relations must have twist 0".into()));
        }
        Ok(ModulePresentation { ring: ring.clone(), generators, relations })
    }

    /// `Ā^g`.
    pub fn quotient_free(ring: &RingRef, g: usize) -> Self {
        ModulePresentation { ring: ring.clone(), generators: g, relations: TwistedMatrix::omega(ring, g).with_twist(0) }
    }

    pub fn zero(ring: &RingRef) -> Self {
        ModulePresentation { ring: ring.clone(), generators: 0, relations: TwistedMatrix::zero(ring, 0, 0, 0) }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &TwistedMatrix {
        &self.relations
    }

    /// Whether `ω` times every generator is a relation.
    pub fn is_omega_torsion(&self) -> Result<bool> {
        let w = TwistedMatrix::omega(&self.ring, self.generators).with_twist(0);
        normal_form::row_space_contains(&self.relations, &w)
    }

    /// Nonunit invariant factors (commutative rings).
    pub fn invariant_factors(&self) -> Result<Vec<Poly>> {
        let s = normal_form::smith_form(&self.relations)?;
        let mut out: Vec<Poly> = s.nonzero_factors().filter(|p| p.deg() > 0).cloned().collect();
        let free = self.generators - s.nonzero_factors().count();
        out.extend(std::iter::repeat_n(Poly::zero(), free));
        Ok(out)
    }

    pub fn k_linearize(&self) -> Result<KLinear> {
        KLinear::new(self)
    }

    /// Whether `v ↦ v·s` is well defined into `target`.
    pub fn is_map_to(&self, target: &ModulePresentation, s: &TwistedMatrix) -> Result<bool> {
        if s.shape() != (self.generators, target.generators) {
            return Ok(false);
        }
        let img = self.relations.mul(s)?;
        normal_form::row_space_contains(&target.relations, &img)
    }
}

/// Coordinates of an `ω`-torsion module over the coefficient field.
///
/// The module is a quotient of `Ā^g`, which has the basis `x^d·e_i`
/// (`d < deg ω`); the image of the relations is put in reduced echelon form
/// and the non-pivot basis vectors form the basis of the quotient.
#[derive(Clone, Debug)]
pub struct KLinear {
    ring: RingRef,
    generators: usize,
    rref: KMatrix,
    pivots: Vec<usize>,
    basis: Vec<usize>,
    x_action: KMatrix,
}

impl KLinear {
    fn new(p: &ModulePresentation) -> Result<Self> {
        let ring = p.ring.clone();
        let m = ring.omega_degree();
        let g = p.generators;
        if !p.is_omega_torsion()? {
            return Err(Error::NotQuotientModule("presentation is not killed by ω".into()));
        }
        let f = ring.field().clone();
        let width = g * m;
        let mut rows = Vec::new();
        for r in 0..p.relations.rows() {
            for d in 0..m {
                let xd = ring.monomial(f.one(), d);
                let row: Vec<Poly> = p.relations.row(r).iter().map(|a| ring.mul(&xd, a)).collect();
                rows.push(coords(&ring, &row));
            }
        }
        let (rref, pivots) = KMatrix::from_rows(rows, width).rref(&f);
        let basis: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        let mut kl = KLinear {
            ring: ring.clone(),
            generators: g,
            rref,
            pivots,
            basis,
            x_action: KMatrix::zeros(&f, 0, 0),
        };
        let dim = kl.dim();
        let mut xa = KMatrix::zeros(&f, dim, dim);
        for b in 0..dim {
            let v: Vec<Poly> = kl.decode_basis(b).iter().map(|a| ring.mul(&ring.x(), a)).collect();
            let c = kl.encode(&v);
            for (j, s) in c.into_iter().enumerate() {
                xa.set(b, j, s);
            }
        }
        kl.x_action = xa;
        Ok(kl)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Matrix of left multiplication by `x` (rows are images of basis vectors).
    pub fn x_action(&self) -> &KMatrix {
        &self.x_action
    }

    /// Coordinates of the class of `v ∈ A^g`.
    pub fn encode(&self, v: &[Poly]) -> Vec<Scalar> {
        let f = self.ring.field();
        let mut c = coords(&self.ring, v);
        for (pi, &pc) in self.pivots.iter().enumerate() {
            if f.is_zero(&c[pc]) {
                continue;
            }
            let t = c[pc].clone();
            for (j, cj) in c.iter_mut().enumerate() {
                let r = self.rref.get(pi, j);
                if !f.is_zero(r) {
                    *cj = f.sub(cj, &f.mul(&t, r));
                }
            }
        }
        self.basis.iter().map(|&b| c[b].clone()).collect()
    }

    fn decode_basis(&self, b: usize) -> Vec<Poly> {
        let m = self.ring.omega_degree();
        let pos = self.basis[b];
        let mut v = vec![Poly::zero(); self.generators];
        v[pos / m] = self.ring.monomial(self.ring.field().one(), pos % m);
        v
    }

    /// A representative in `A^g` of the vector with coordinates `c`.
    pub fn decode(&self, c: &[Scalar]) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); self.generators];
        for (b, s) in c.iter().enumerate() {
            if self.ring.field().is_zero(s) {
                continue;
            }
            for (i, p) in self.decode_basis(b).iter().enumerate() {
                v[i] = self.ring.add(&v[i], &self.ring.scale_left(s, p));
            }
        }
        v
    }

    /// Matrix over the coefficient field of the map given on generators by `s`.
    pub fn map_matrix(&self, s: &TwistedMatrix, target: &KLinear) -> Result<KMatrix> {
        let f = self.ring.field();
        let mut out = KMatrix::zeros(f, self.dim(), target.dim());
        let rows = s.row_vecs();
        for b in 0..self.dim() {
            let v = self.decode_basis(b);
            let mut img = vec![Poly::zero(); s.cols()];
            for (i, a) in v.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, e) in rows[i].iter().enumerate() {
                    img[j] = self.ring.add(&img[j], &self.ring.mul(a, e));
                }
            }
            for (j, c) in target.encode(&img).into_iter().enumerate() {
                out.set(b, j, c);
            }
        }
        Ok(out)
    }
}

/// Coefficients of `v` modulo `ω`, generator-major.
fn coords(ring: &RingRef, v: &[Poly]) -> Vec<Scalar> {
    let m = ring.omega_degree();
    let f = ring.field();
    let mut out = Vec::with_capacity(v.len() * m);
    for a in v {
        let r = ring.quotient_reduce(a);
        for d in 0..m {
            out.push(r.coeff(d).cloned().unwrap_or_else(|| f.zero()));
        }
    }
    out
}
