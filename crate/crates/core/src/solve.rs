//! Linear systems whose unknowns are blocks of matrices over `A`.
//!
//! Over a commutative ring the maps involved are `A`-linear and are solved
//! exactly with Hermite forms. Over a skew ring the unknowns occur both
//! plainly and twisted by `σ`, so the system is only linear over the prime
//! field; it is solved there for unknowns of bounded degree.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::KMatrix;
use crate::matrix::TwistedMatrix;
use crate::normal_form;
use crate::ring::{Poly, RingRef};

/// Shape of one unknown block: rows, columns, twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockShape {
    pub rows: usize,
    pub cols: usize,
    pub twist: i64,
}

impl BlockShape {
    pub fn new(rows: usize, cols: usize, twist: i64) -> Self {
        BlockShape { rows, cols, twist }
    }

    fn len(&self) -> usize {
        self.rows * self.cols
    }
}

pub fn total_len(shapes: &[BlockShape]) -> usize {
    shapes.iter().map(BlockShape::len).sum()
}

pub fn flatten(ms: &[TwistedMatrix]) -> Vec<Poly> {
    ms.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

pub fn unflatten(ring: &RingRef, shapes: &[BlockShape], v: &[Poly]) -> Result<Vec<TwistedMatrix>> {
    if v.len() != total_len(shapes) {
        return Err(Error::Internal("flattened vector has the wrong length".into()));
    }
    let mut out = Vec::with_capacity(shapes.len());
    let mut pos = 0;
    for s in shapes {
        out.push(TwistedMatrix::new(ring, s.rows, s.cols, s.twist, v[pos..pos + s.len()].to_vec())?);
        pos += s.len();
    }
    Ok(out)
}

pub fn zero_blocks(ring: &RingRef, shapes: &[BlockShape]) -> Vec<TwistedMatrix> {
    shapes.iter().map(|s| TwistedMatrix::zero(ring, s.rows, s.cols, s.twist)).collect()
}

/// The unknowns with a single entry `value` at flat position `k`.
fn basis_blocks(ring: &RingRef, shapes: &[BlockShape], k: usize, value: Poly) -> Vec<TwistedMatrix> {
    let mut v = vec![Poly::zero(); total_len(shapes)];
    v[k] = value;
    unflatten(ring, shapes, &v).expect("lengths agree")
}

/// Matrix of an `A`-linear map (commutative rings): row `k` is the image
/// of the `k`-th unit unknown, flattened.
pub fn linear_map_matrix<F>(ring: &RingRef, shapes: &[BlockShape], out_len: usize, map: F) -> Result<TwistedMatrix>
where
    F: Fn(&[TwistedMatrix]) -> Result<Vec<TwistedMatrix>>,
{
    let n = total_len(shapes);
    let mut entries = Vec::with_capacity(n * out_len);
    for k in 0..n {
        let img = flatten(&map(&basis_blocks(ring, shapes, k, ring.one()))?);
        if img.len() != out_len {
            return Err(Error::Internal("linear map image has the wrong length".into()));
        }
        entries.extend(img);
    }
    TwistedMatrix::new(ring, n, out_len, 0, entries)
}

/// Solves `map(u) = target` exactly over a commutative ring.
pub fn solve_linear<F>(
    ring: &RingRef,
    shapes: &[BlockShape],
    target: &[TwistedMatrix],
    map: F,
) -> Result<Option<Vec<TwistedMatrix>>>
where
    F: Fn(&[TwistedMatrix]) -> Result<Vec<TwistedMatrix>>,
{
    if !ring.is_commutative() {
        return Err(Error::Unsupported("exact linear solving needs a commutative ring".into()));
    }
    let t = flatten(target);
    if total_len(shapes) == 0 {
        return Ok(t.iter().all(Poly::is_zero).then(|| zero_blocks(ring, shapes)));
    }
    let m = linear_map_matrix(ring, shapes, t.len(), map)?;
    let tm = TwistedMatrix::new(ring, 1, t.len(), 0, t)?;
    match normal_form::solve_right(&m, &tm)? {
        None => Ok(None),
        Some(w) => Ok(Some(unflatten(ring, shapes, w.entries())?)),
    }
}

/// Prime-field coordinates of a polynomial, padded to degree `< len`.
fn poly_coords(ring: &RingRef, p: &Poly, len: usize, out: &mut Vec<Scalar>) {
    let f = ring.field();
    let e = f.degree() as usize;
    for d in 0..len {
        match p.coeff(d) {
            Some(c) => out.extend(f.prime_coords(c)),
            None => out.extend(std::iter::repeat_n(f.prime_field().zero(), e)),
        }
    }
}

/// Solves `map(u) = target` over the prime field, for unknowns whose
/// entries have degree at most `bound`. The map must be additive and
/// commute with multiplication by prime-field scalars.
pub fn solve_bounded<F>(
    ring: &RingRef,
    shapes: &[BlockShape],
    target: &[TwistedMatrix],
    bound: usize,
    map: F,
) -> Result<Option<Vec<TwistedMatrix>>>
where
    F: Fn(&[TwistedMatrix]) -> Result<Vec<TwistedMatrix>>,
{
    let f = ring.field();
    let k0 = f.prime_field();
    let basis = f.prime_basis();
    let t = flatten(target);
    let n = total_len(shapes);
    let mut images: Vec<(usize, usize, usize, Vec<Poly>)> = Vec::new();
    let mut max_deg = t.iter().map(Poly::deg).max().unwrap_or(-1);
    for k in 0..n {
        for d in 0..=bound {
            for (bi, b) in basis.iter().enumerate() {
                let img = flatten(&map(&basis_blocks(ring, shapes, k, ring.monomial(b.clone(), d)))?);
                if img.len() != t.len() {
                    return Err(Error::Internal("linear map image has the wrong length".into()));
                }
                max_deg = max_deg.max(img.iter().map(Poly::deg).max().unwrap_or(-1));
                images.push((k, d, bi, img));
            }
        }
    }
    let len = (max_deg + 1).max(0) as usize;
    let rows: Vec<Vec<Scalar>> = images
        .iter()
        .map(|(_, _, _, img)| {
            let mut row = Vec::new();
            for p in img {
                poly_coords(ring, p, len, &mut row);
            }
            row
        })
        .collect();
    let mut trow = Vec::new();
    for p in &t {
        poly_coords(ring, p, len, &mut trow);
    }
    let cols = trow.len();
    if images.is_empty() {
        return Ok(trow.iter().all(|c| k0.is_zero(c)).then(|| zero_blocks(ring, shapes)));
    }
    let m = KMatrix::from_rows(rows, cols);
    let target_row = KMatrix::from_rows(vec![trow], cols);
    let Some(sol) = m.solve_left(&k0, &target_row) else { return Ok(None) };
    let mut v = vec![Poly::zero(); n];
    for (idx, (k, d, bi, _)) in images.iter().enumerate() {
        let c = sol.get(0, idx);
        if k0.is_zero(c) {
            continue;
        }
        // the prime field embeds in the coefficient field
        let scalar = f.mul(&embed_prime(ring, c), &basis[*bi]);
        v[*k] = ring.add(&v[*k], &ring.monomial(scalar, *d));
    }
    Ok(Some(unflatten(ring, shapes, &v)?))
}

fn embed_prime(ring: &RingRef, c: &Scalar) -> Scalar {
    let f = ring.field();
    let mut coords = vec![f.prime_field().zero(); f.degree() as usize];
    coords[0] = c.clone();
    f.from_prime_coords(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::ring::Ring;

    #[test]
    fn bounded_solver_handles_semilinear_maps() {
        // u ↦ σ(u)·x + u over F_4[x; Frob], ω = x
        let r = Ring::new(FieldSpec::Finite { p: 2, e: 2, modulus: vec![1, 1, 1] }, 1, vec![
            Scalar::Fin(0),
            Scalar::Fin(1),
        ])
        .unwrap();
        let shapes = [BlockShape::new(1, 1, 0)];
        let xm = TwistedMatrix::scalar(&r, 1, &r.x(), 0);
        let map = |u: &[TwistedMatrix]| -> Result<Vec<TwistedMatrix>> {
            Ok(vec![u[0].twist_matrix(1).mul(&xm)?.add(&u[0])?])
        };
        let u0 = TwistedMatrix::scalar(&r, 1, &r.poly(vec![Scalar::Fin(2), Scalar::Fin(3)]), 0);
        let t = map(std::slice::from_ref(&u0)).unwrap();
        let sol = solve_bounded(&r, &shapes, &t, 2, map).unwrap().unwrap();
        assert_eq!(map(&sol).unwrap(), t);
        // x^5 is out of reach with degree-0 unknowns
        let far = vec![TwistedMatrix::scalar(&r, 1, &r.monomial(Scalar::Fin(1), 5), 0)];
        assert!(solve_bounded(&r, &shapes, &far, 0, map).unwrap().is_none());
    }

    #[test]
    fn exact_solver_over_q() {
        let f = Field::rationals();
        let r = Ring::with_field(f.clone(), 0, vec![f.zero(), f.one()]).unwrap();
        let shapes = [BlockShape::new(1, 2, 0)];
        let a = TwistedMatrix::from_int_rows(&r, 0, &[vec![vec![0, 1], vec![1]], vec![vec![1], vec![0, 0, 1]]]).unwrap();
        let map = |u: &[TwistedMatrix]| -> Result<Vec<TwistedMatrix>> { Ok(vec![u[0].mul(&a)?]) };
        let u0 = TwistedMatrix::from_int_rows(&r, 0, &[vec![vec![1, 2], vec![3]]]).unwrap();
        let t = map(&[u0]).unwrap();
        let sol = solve_linear(&r, &shapes, &t, map).unwrap().unwrap();
        assert_eq!(map(&sol).unwrap(), t);
    }
}
