//! Matrices over `A` carrying a twist degree.
//!
//! A twist-`t` matrix `M` of shape `r × c` stands for the map
//! `v ↦ σ^t(v)·M` from row vectors of length `r` to row vectors of length
//! `c`. Composition is written in application order.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::ring::{same_ring, Poly, RingRef};

#[derive(Clone, Debug)]
pub struct TwistedMatrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    twist: i64,
    entries: Vec<Poly>,
}

impl PartialEq for TwistedMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.twist == other.twist
            && self.entries == other.entries
            && same_ring(&self.ring, &other.ring)
    }
}
impl Eq for TwistedMatrix {}

impl TwistedMatrix {
    pub fn new(ring: &RingRef, rows: usize, cols: usize, twist: i64, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(TwistedMatrix { ring: ring.clone(), rows, cols, twist, entries })
    }

    pub fn from_rows(ring: &RingRef, twist: i64, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(ring, r, c, twist, rows.into_iter().flatten().collect())
    }

    /// Integer-coefficient entries, convenient in tests and examples.
    pub fn from_int_rows(ring: &RingRef, twist: i64, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|p| ring.from_ints(p)).collect())
            .collect();
        Self::from_rows(ring, twist, rows)
    }

    pub fn zero(ring: &RingRef, rows: usize, cols: usize, twist: i64) -> Self {
        TwistedMatrix { ring: ring.clone(), rows, cols, twist, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(ring: &RingRef, n: usize) -> Self {
        Self::scalar(ring, n, &ring.one(), 0)
    }

    /// `a·I` at the given twist.
    pub fn scalar(ring: &RingRef, n: usize, a: &Poly, twist: i64) -> Self {
        let mut m = Self::zero(ring, n, n, twist);
        for i in 0..n {
            m.entries[i * n + i] = a.clone();
        }
        m
    }

    /// `ω·I` at twist 1, the matrix of `ω_X` on `A^n`.
    pub fn omega(ring: &RingRef, n: usize) -> Self {
        Self::scalar(ring, n, ring.omega(), 1)
    }

    pub fn diagonal(ring: &RingRef, diag: &[Poly], twist: i64) -> Self {
        let n = diag.len();
        let mut m = Self::zero(ring, n, n, twist);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn with_twist(mut self, twist: i64) -> Self {
        self.twist = twist;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.twist == 0 && *self == Self::identity(&self.ring, self.rows)
    }

    pub fn max_degree(&self) -> i64 {
        self.entries.iter().map(Poly::deg).max().unwrap_or(-1)
    }

    fn check_ring(&self, other: &TwistedMatrix) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::IncompatibleRing)
        }
    }

    /// Plain matrix product `self · other`, twist of `self` kept.
    pub fn mul(&self, other: &TwistedMatrix) -> Result<TwistedMatrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = r.add(&acc, &r.mul(a, b));
                }
                out.push(acc);
            }
        }
        Ok(TwistedMatrix { ring: r.clone(), rows: self.rows, cols: other.cols, twist: self.twist, entries: out })
    }

    /// First `self`, then `other`: `σ^{other.twist}(self) · other` with the
    /// twists added.
    pub fn compose(&self, other: &TwistedMatrix) -> Result<TwistedMatrix> {
        let left = self.twist_matrix(other.twist);
        let mut m = left.mul(other)?;
        m.twist = self.twist + other.twist;
        Ok(m)
    }

    /// Composes a nonempty chain in application order.
    pub fn compose_all(ms: &[&TwistedMatrix]) -> Result<TwistedMatrix> {
        let (first, rest) = ms.split_first().ok_or_else(|| Error::Shape("empty composite".into()))?;
        let mut acc = (*first).clone();
        for m in rest {
            acc = acc.compose(m)?;
        }
        Ok(acc)
    }

    /// Entrywise `σ^power`; the twist is unchanged.
    pub fn twist_matrix(&self, power: i64) -> TwistedMatrix {
        if power == 0 || self.ring.sigma_is_identity() {
            return self.clone();
        }
        TwistedMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            twist: self.twist,
            entries: self.entries.iter().map(|p| self.ring.apply_sigma(p, power)).collect(),
        }
    }

    fn zip(&self, other: &TwistedMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<TwistedMatrix> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.twist != other.twist {
            return Err(Error::Shape(format!("twist {} vs {}", self.twist, other.twist)));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(TwistedMatrix { entries, ..self.clone() })
    }

    pub fn add(&self, other: &TwistedMatrix) -> Result<TwistedMatrix> {
        let r = self.ring.clone();
        self.zip(other, |a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &TwistedMatrix) -> Result<TwistedMatrix> {
        let r = self.ring.clone();
        self.zip(other, |a, b| r.sub(a, b))
    }

    pub fn neg(&self) -> TwistedMatrix {
        let entries = self.entries.iter().map(|a| self.ring.neg(a)).collect();
        TwistedMatrix { entries, ..self.clone() }
    }

    /// Left multiplication of every entry by `a`.
    pub fn scale_left(&self, a: &Poly) -> TwistedMatrix {
        let entries = self.entries.iter().map(|e| self.ring.mul(a, e)).collect();
        TwistedMatrix { entries, ..self.clone() }
    }

    pub fn scale_scalar(&self, c: &Scalar) -> TwistedMatrix {
        let entries = self.entries.iter().map(|e| self.ring.scale_left(c, e)).collect();
        TwistedMatrix { entries, ..self.clone() }
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> TwistedMatrix {
        TwistedMatrix { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> TwistedMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        TwistedMatrix { ring: self.ring.clone(), rows: self.cols, cols: self.rows, twist: self.twist, entries }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> TwistedMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            for j in cols.clone() {
                entries.push(self.get(i, j).clone());
            }
        }
        TwistedMatrix { ring: self.ring.clone(), rows: rows.len(), cols: cols.len(), twist: self.twist, entries }
    }

    pub fn select_rows(&self, idx: &[usize]) -> TwistedMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        TwistedMatrix { ring: self.ring.clone(), rows: idx.len(), cols: self.cols, twist: self.twist, entries }
    }

    /// Stacks vertically; twists must agree.
    pub fn vstack(parts: &[&TwistedMatrix]) -> Result<TwistedMatrix> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty stack".into()))?;
        let mut entries = Vec::new();
        let mut rows = 0;
        for p in parts {
            first.check_ring(p)?;
            if p.cols != first.cols || p.twist != first.twist {
                return Err(Error::Shape("vstack mismatch".into()));
            }
            rows += p.rows;
            entries.extend_from_slice(&p.entries);
        }
        Ok(TwistedMatrix { ring: first.ring.clone(), rows, cols: first.cols, twist: first.twist, entries })
    }

    pub fn hstack(parts: &[&TwistedMatrix]) -> Result<TwistedMatrix> {
        let ts: Vec<TwistedMatrix> = parts.iter().map(|p| p.transpose()).collect();
        let refs: Vec<&TwistedMatrix> = ts.iter().collect();
        Ok(Self::vstack(&refs)?.transpose())
    }

    /// Block diagonal sum; twists must agree.
    pub fn block_diag(parts: &[&TwistedMatrix]) -> Result<TwistedMatrix> {
        let first = parts.first().ok_or_else(|| Error::Shape("empty block sum".into()))?;
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut m = TwistedMatrix::zero(&first.ring, rows, cols, first.twist);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            first.check_ring(p)?;
            if p.twist != first.twist {
                return Err(Error::Shape("block sum twist mismatch".into()));
            }
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m.set(r0 + i, c0 + j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        Ok(m)
    }

    /// Determinant (commutative rings only).
    pub fn det(&self) -> Result<Poly> {
        if !self.ring.is_commutative() {
            return Err(Error::Unsupported("determinant over a skew ring".into()));
        }
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        // fraction-free expansion is fine at these sizes
        Ok(det_rec(&self.ring, &self.row_vecs()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.ring.field();
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|p| serde_json::Value::from(p.coeffs().iter().map(|c| f.to_json(c)).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "twist": self.twist,
            "entries": rows,
        })
    }

    pub fn from_json(ring: &RingRef, v: &serde_json::Value) -> Result<TwistedMatrix> {
        let get_usize = |k: &str| {
            v.get(k)
                .and_then(|x| x.as_u64())
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("matrix field {:?} missing", k)))
        };
        let rows = get_usize("rows")?;
        let cols = get_usize("cols")?;
        let twist = v.get("twist").map_or(Some(0), |t| t.as_i64()).ok_or_else(|| Error::Parse("bad twist".into()))?;
        let entries = v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Parse("matrix entries missing".into()))?;
        if entries.len() != rows {
            return Err(Error::Parse(format!("expected {} rows, found {}", rows, entries.len())));
        }
        let mut out = Vec::with_capacity(rows * cols);
        for row in entries {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix row is not an array".into()))?;
            if row.len() != cols {
                return Err(Error::Parse(format!("expected {} columns, found {}", cols, row.len())));
            }
            for p in row {
                out.push(poly_from_json(ring, p)?);
            }
        }
        TwistedMatrix::new(ring, rows, cols, twist, out)
    }
}

pub fn poly_from_json(ring: &RingRef, v: &serde_json::Value) -> Result<Poly> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("polynomial must be an array: {}", v)))?;
    let coeffs = arr.iter().map(|c| ring.field().from_json(c)).collect::<Result<Vec<_>>>()?;
    Ok(ring.poly(coeffs))
}

pub fn poly_to_json(ring: &RingRef, p: &Poly) -> serde_json::Value {
    serde_json::Value::from(p.coeffs().iter().map(|c| ring.field().to_json(c)).collect::<Vec<_>>())
}

fn det_rec(ring: &RingRef, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = ring.mul(&m[0][j], &det_rec(ring, &minor));
                acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

impl fmt::Display for TwistedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|p| self.ring.fmt_poly(p)).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")?;
        if self.twist != 0 {
            write!(f, "<{}>", self.twist)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::ring::Ring;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qx3() -> RingRef {
        let f = Field::rationals();
        Ring::with_field(f.clone(), 0, vec![f.zero(), f.zero(), f.zero(), f.one()]).unwrap()
    }

    fn f4x() -> RingRef {
        Ring::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }, 1, vec![Scalar::Fin(0), Scalar::Fin(1)])
            .unwrap()
    }

    fn random(ring: &RingRef, rng: &mut ChaCha8Rng, r: usize, c: usize, t: i64) -> TwistedMatrix {
        let e = (0..r * c).map(|_| ring.random_poly(rng, 2)).collect();
        TwistedMatrix::new(ring, r, c, t, e).unwrap()
    }

    #[test]
    fn omega_composed_with_identity() {
        let r = qx3();
        let w = TwistedMatrix::omega(&r, 2);
        assert_eq!(w.compose(&TwistedMatrix::identity(&r, 2)).unwrap(), w);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let r = qx3();
        let a = TwistedMatrix::zero(&r, 2, 3, 0);
        assert!(matches!(a.compose(&a), Err(Error::Shape(_))));
    }

    #[test]
    fn twist_round_trip_and_functoriality() {
        let r = f4x();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = random(&r, &mut rng, 2, 3, 0);
            let g = random(&r, &mut rng, 3, 2, 1);
            assert_eq!(f.twist_matrix(1).twist_matrix(-1), f);
            let lhs = f.compose(&g).unwrap().twist_matrix(1);
            let rhs = f.twist_matrix(1).compose(&g.twist_matrix(1)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn commutative_compose_is_product() {
        let r = qx3();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random(&r, &mut rng, 2, 2, 0);
        let g = random(&r, &mut rng, 2, 2, 0);
        assert_eq!(f.compose(&g).unwrap(), f.mul(&g).unwrap());
        assert_eq!(f.twist_matrix(3), f);
    }

    #[test]
    fn json_round_trip() {
        let r = f4x();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random(&r, &mut rng, 2, 3, -1);
        assert_eq!(TwistedMatrix::from_json(&r, &f.to_json()).unwrap(), f);
    }

    proptest! {
        #[test]
        fn compose_is_associative(seed in any::<u64>(), t1 in -2i64..3, t2 in -2i64..3, t3 in -2i64..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for r in [qx3(), f4x()] {
                let f = random(&r, &mut rng, 2, 3, t1);
                let g = random(&r, &mut rng, 3, 1, t2);
                let h = random(&r, &mut rng, 1, 2, t3);
                let a = f.compose(&g.compose(&h).unwrap()).unwrap();
                let b = f.compose(&g).unwrap().compose(&h).unwrap();
                prop_assert_eq!(a.twist(), t1 + t2 + t3);
                prop_assert_eq!(a, b);
            }
        }
    }
}
