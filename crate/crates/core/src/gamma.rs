//! Factorizations as modules over the matrix ring `Γ_n` (entries `A` on
//! and above the diagonal, `Aω` below).
//!
//! A module is a column `(M_1, …, M_n)` with `M_p = X^{n-p}` and structure
//! maps `f_ij: M_j → M_i` for `i ≠ j`. Maps above the diagonal have twist 0;
//! maps below it come from `Aω ⊗ M_j` and are stored at twist 1.
//! Indices `i, j` are 1-based as in the matrix ring.

use crate::error::{Error, Result};
use crate::factorization::{FactorMorphism, NFactorization};
use crate::matrix::TwistedMatrix;
use crate::ring::RingRef;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModuleData {
    ring: RingRef,
    ranks: Vec<usize>,
    /// Row-major `n × n` grid; `maps[(i-1)·n + (j-1)] = f_ij`, identity on the diagonal.
    maps: Vec<TwistedMatrix>,
}

fn below(i: usize, j: usize) -> bool {
    j < i
}

impl GammaModuleData {
    /// Builds module data from the off-diagonal maps, given as a full grid
    /// whose diagonal entries are ignored.
    pub fn new(ring: &RingRef, ranks: Vec<usize>, grid: Vec<Vec<TwistedMatrix>>) -> Result<Self> {
        let n = ranks.len();
        if grid.len() != n || grid.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("structure maps must form a {n}x{n} grid")));
        }
        let mut maps = Vec::with_capacity(n * n);
        for (i, row) in grid.into_iter().enumerate() {
            for (j, m) in row.into_iter().enumerate() {
                if i == j {
                    maps.push(TwistedMatrix::identity(ring, ranks[i]));
                    continue;
                }
                let tw = below(i, j) as i64;
                if m.shape() != (ranks[j], ranks[i]) || m.twist() != tw {
                    return Err(Error::Shape(format!(
                        "f_{}{} is {}x{} at twist {}, expected {}x{} at twist {}",
                        i + 1,
                        j + 1,
                        m.rows(),
                        m.cols(),
                        m.twist(),
                        ranks[j],
                        ranks[i],
                        tw
                    )));
                }
                maps.push(m);
            }
        }
        Ok(GammaModuleData { ring: ring.clone(), ranks, maps })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    /// Rank of `M_p`, 1-based.
    pub fn rank(&self, p: usize) -> usize {
        self.ranks[p - 1]
    }

    /// `f_ij`, 1-based.
    pub fn f(&self, i: usize, j: usize) -> &TwistedMatrix {
        &self.maps[(i - 1) * self.n() + (j - 1)]
    }

    pub fn set_f(&mut self, i: usize, j: usize, m: TwistedMatrix) {
        let n = self.n();
        self.maps[(i - 1) * n + (j - 1)] = m;
    }

    /// First triple `(i, j, l)` where `M_l → M_j → M_i` differs from `f_il`
    /// (times `ω` when two steps below the diagonal are taken).
    pub fn check_relations(&self) -> Result<Option<(usize, usize, usize)>> {
        let n = self.n();
        for i in 1..=n {
            for j in 1..=n {
                for l in 1..=n {
                    if i == j || j == l {
                        continue;
                    }
                    let lhs = self.f(j, l).compose(self.f(i, j))?;
                    let direct = self.f(i, l);
                    let rhs = if lhs.twist() == direct.twist() {
                        direct.clone()
                    } else {
                        direct.compose(&TwistedMatrix::omega(&self.ring, self.rank(i)))?
                    };
                    if lhs != rhs {
                        return Ok(Some((i, j, l)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.check_relations()?.is_none())
    }
}

/// `Φ`: the module `(X^{n-1}, …, X^0)` with the structure maps composed
/// from the factorization.
pub fn phi(x: &NFactorization) -> Result<GammaModuleData> {
    let n = x.n();
    let ring = x.ring();
    let ranks: Vec<usize> = (1..=n).map(|p| x.rank(n - p)).collect();
    let mut grid = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 1..=n {
            let m = if i == j {
                TwistedMatrix::identity(ring, ranks[i - 1])
            } else if i < j {
                x.composite(n - j, n - i)?
            } else {
                x.composite(n - j, n)?.compose(&x.composite(0, n - i)?)?
            };
            row.push(m);
        }
        grid.push(row);
    }
    GammaModuleData::new(ring, ranks, grid)
}

/// `Ψ`: the factorization read off the superdiagonal and the corner `f_n1`.
pub fn psi(g: &GammaModuleData) -> Result<NFactorization> {
    if let Some((i, j, l)) = g.check_relations()? {
        return Err(Error::InvalidInput(format!("structure maps violate the relation at ({i}, {j}, {l})")));
    }
    let n = g.n();
    if n == 1 {
        // Γ_1 = A; the only factorization structure is ω itself
        return NFactorization::validated(g.ring(), vec![TwistedMatrix::omega(g.ring(), g.rank(1))]);
    }
    let maps = (0..n)
        .map(|i| if i + 1 < n { g.f(n - 1 - i, n - i).clone() } else { g.f(n, 1).clone() })
        .collect();
    NFactorization::validated(g.ring(), maps)
}

/// Components of `Φ(f)`, in module order `M_1, …, M_n`.
pub fn phi_morphism(f: &FactorMorphism) -> Vec<TwistedMatrix> {
    f.components().iter().rev().cloned().collect()
}

/// Whether `gs` (module order) commutes with all structure maps.
pub fn is_gamma_morphism(a: &GammaModuleData, b: &GammaModuleData, gs: &[TwistedMatrix]) -> Result<bool> {
    let n = a.n();
    if gs.len() != n || b.n() != n {
        return Ok(false);
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j && a.f(i, j).compose(&gs[i - 1])? != gs[j - 1].compose(b.f(i, j))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn psi_morphism(a: &GammaModuleData, b: &GammaModuleData, gs: &[TwistedMatrix]) -> Result<FactorMorphism> {
    if !is_gamma_morphism(a, b, gs)? {
        return Err(Error::NotMorphism("components do not commute with the structure maps".into()));
    }
    FactorMorphism::new(&psi(a)?, &psi(b)?, gs.iter().rev().cloned().collect())
}
