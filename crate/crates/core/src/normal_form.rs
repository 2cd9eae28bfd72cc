//! Hermite and Smith normal forms over `A`, exact solving of `w·M = T`,
//! and left kernels.
//!
//! All row operations are left multiplications, so the Hermite form works
//! over the skew rings as well. Pivots are monic; the pivot in a column is
//! chosen by lowest degree, ties by lowest row index.

use crate::error::{Error, Result};
use crate::matrix::TwistedMatrix;
use crate::ring::{Poly, Ring};

type Rows = Vec<Vec<Poly>>;

#[derive(Clone, Debug)]
pub struct Hermite {
    /// Row echelon form `u·m`.
    pub h: TwistedMatrix,
    /// Invertible transform with `u·m = h`.
    pub u: TwistedMatrix,
    /// `(row, column)` of each pivot, rows in order.
    pub pivots: Vec<(usize, usize)>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries, length `min(rows, cols)`: monic nonzero invariant
    /// factors in divisibility order followed by zeros.
    pub diag: Vec<Poly>,
    pub u: TwistedMatrix,
    pub v: TwistedMatrix,
    pub u_inv: TwistedMatrix,
    pub v_inv: TwistedMatrix,
}

impl Smith {
    pub fn nonzero_factors(&self) -> impl Iterator<Item = &Poly> {
        self.diag.iter().filter(|p| !p.is_zero())
    }
}

fn identity_rows(ring: &Ring, n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { Poly::zero() }).collect())
        .collect()
}

/// `rows[i] -= q · rows[p]`.
fn row_sub(ring: &Ring, rows: &mut Rows, i: usize, p: usize, q: &Poly) {
    if q.is_zero() {
        return;
    }
    let src = rows[p].clone();
    for (a, b) in rows[i].iter_mut().zip(&src) {
        if !b.is_zero() {
            *a = ring.sub(a, &ring.mul(q, b));
        }
    }
}

/// Hermite form of raw rows; returns `(h, u, pivots)`.
pub(crate) fn hermite_rows(ring: &Ring, m: Rows, cols: usize) -> (Rows, Rows, Vec<(usize, usize)>) {
    let rows = m.len();
    let mut h = m;
    let mut u = identity_rows(ring, rows);
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        loop {
            let best = (prow..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by_key(|&i| (h[i][c].deg(), i));
            let Some(best) = best else { break };
            h.swap(prow, best);
            u.swap(prow, best);
            let mut clean = true;
            for i in prow + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let (q, r) = ring.left_divmod(&h[i][c], &h[prow][c]).expect("nonzero pivot");
                row_sub(ring, &mut h, i, prow, &q);
                row_sub(ring, &mut u, i, prow, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[prow][c].is_zero() {
            continue;
        }
        let (_, inv) = ring.monic(&h[prow][c]);
        for a in h[prow].iter_mut() {
            *a = ring.scale_left(&inv, a);
        }
        for a in u[prow].iter_mut() {
            *a = ring.scale_left(&inv, a);
        }
        for i in 0..prow {
            if h[i][c].is_zero() {
                continue;
            }
            let (q, _) = ring.left_divmod(&h[i][c], &h[prow][c]).expect("nonzero pivot");
            row_sub(ring, &mut h, i, prow, &q);
            row_sub(ring, &mut u, i, prow, &q);
        }
        pivots.push((prow, c));
        prow += 1;
    }
    (h, u, pivots)
}

fn require_twist_zero(m: &TwistedMatrix) -> Result<()> {
    if m.twist() != 0 {
        return Err(Error::Precondition(format!("expected a twist 0 matrix, got twist {}", m.twist())));
    }
    Ok(())
}

pub fn hermite_form(m: &TwistedMatrix) -> Result<Hermite> {
    require_twist_zero(m)?;
    let ring = m.ring();
    let (h, u, pivots) = hermite_rows(ring, m.row_vecs(), m.cols());
    Ok(Hermite {
        h: TwistedMatrix::new(ring, m.rows(), m.cols(), 0, h.into_iter().flatten().collect())?,
        u: TwistedMatrix::new(ring, m.rows(), m.rows(), 0, u.into_iter().flatten().collect())?,
        pivots,
    })
}

/// Reduces each target row against an echelon basis; returns coefficients
/// in terms of the echelon rows, or `None` if some row is not in the span.
fn reduce_against(ring: &Ring, h: &Rows, pivots: &[(usize, usize)], target: &[Poly]) -> Option<Vec<Poly>> {
    let mut t = target.to_vec();
    let mut coeffs = vec![Poly::zero(); h.len()];
    for &(r, c) in pivots {
        if t[c].is_zero() {
            continue;
        }
        let (q, rem) = ring.left_divmod(&t[c], &h[r][c]).expect("nonzero pivot");
        if !rem.is_zero() {
            return None;
        }
        for (a, b) in t.iter_mut().zip(&h[r]) {
            if !b.is_zero() {
                *a = ring.sub(a, &ring.mul(&q, b));
            }
        }
        coeffs[r] = q;
    }
    t.iter().all(Poly::is_zero).then_some(coeffs)
}

/// Finds `w` with `w·m = target` (both twist 0), or `None` if some row of
/// `target` lies outside the row space of `m`.
pub fn solve_right(m: &TwistedMatrix, target: &TwistedMatrix) -> Result<Option<TwistedMatrix>> {
    require_twist_zero(m)?;
    if target.cols() != m.cols() {
        return Err(Error::Shape(format!("target has {} columns, system has {}", target.cols(), m.cols())));
    }
    let ring = m.ring();
    let (h, u, pivots) = hermite_rows(ring, m.row_vecs(), m.cols());
    let u = TwistedMatrix::new(ring, m.rows(), m.rows(), 0, u.into_iter().flatten().collect())?;
    let mut out = Vec::with_capacity(target.rows() * m.rows());
    for i in 0..target.rows() {
        match reduce_against(ring, &h, &pivots, target.row(i)) {
            Some(c) => out.extend(c),
            None => return Ok(None),
        }
    }
    let w = TwistedMatrix::new(ring, target.rows(), m.rows(), 0, out)?;
    Ok(Some(w.mul(&u)?))
}

/// Rows spanning `{v : v·m = 0}`; they form a basis of the left kernel.
pub fn left_kernel(m: &TwistedMatrix) -> Result<TwistedMatrix> {
    let ring = m.ring();
    let (_, u, pivots) = hermite_rows(ring, m.row_vecs(), m.cols());
    let rank = pivots.len();
    let entries = u.into_iter().skip(rank).flatten().collect();
    TwistedMatrix::new(ring, m.rows() - rank, m.rows(), 0, entries)
}

/// Finds `x` with `m·x = target` (commutative rings only).
pub fn solve_left(m: &TwistedMatrix, target: &TwistedMatrix) -> Result<Option<TwistedMatrix>> {
    if !m.ring().is_commutative() {
        return Err(Error::Unsupported("column solving over a skew ring".into()));
    }
    Ok(solve_right(&m.transpose(), &target.transpose())?.map(|w| w.transpose()))
}

/// Smith form `u·m·v = diag` (commutative rings only).
pub fn smith_form(m: &TwistedMatrix) -> Result<Smith> {
    require_twist_zero(m)?;
    let ring = m.ring().clone();
    if !ring.is_commutative() {
        return Err(Error::Unsupported("Smith form over a skew ring".into()));
    }
    let (r, c) = m.shape();
    let mut a = m.row_vecs();
    let mut u = identity_rows(&ring, r);
    let mut u_inv = identity_rows(&ring, r);
    // v and v_inv are kept transposed so column operations become row operations
    let mut vt = identity_rows(&ring, c);
    let mut v_inv = identity_rows(&ring, c);
    let k = r.min(c);

    for t in 0..k {
        loop {
            // entry of least degree in the trailing block
            let best = (t..r)
                .flat_map(|i| (t..c).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .map(|(i, j)| (a[i][j].deg(), i, j))
                .min();
            let Some((_, bi, bj)) = best else { break };
            // row swap t <-> bi
            a.swap(t, bi);
            u.swap(t, bi);
            for row in u_inv.iter_mut() {
                row.swap(t, bi);
            }
            // column swap t <-> bj
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            vt.swap(t, bj);
            v_inv.swap(t, bj);

            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, rem) = ring.left_divmod(&a[i][t], &a[t][t])?;
                row_sub(&ring, &mut a, i, t, &q);
                row_sub(&ring, &mut u, i, t, &q);
                // u_inv: column t += column i · q
                for row in u_inv.iter_mut() {
                    let add = ring.mul(&row[i], &q);
                    row[t] = ring.add(&row[t], &add);
                }
                clean &= rem.is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, rem) = ring.left_divmod(&a[t][j], &a[t][t])?;
                // column j -= column t · q
                for row in a.iter_mut() {
                    let sub = ring.mul(&row[t], &q);
                    row[j] = ring.sub(&row[j], &sub);
                }
                row_sub(&ring, &mut vt, j, t, &q);
                // v_inv: row t += q · row j
                let neg = ring.neg(&q);
                row_sub(&ring, &mut v_inv, t, j, &neg);
                clean &= rem.is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !ring.left_divmod(&a[i][j], &a[t][t]).map_or(true, |(_, rem)| rem.is_zero()))
            });
            match bad {
                Some(i) => {
                    // row t += row i
                    let one = ring.neg(&ring.one());
                    row_sub(&ring, &mut a, t, i, &one);
                    row_sub(&ring, &mut u, t, i, &one);
                    // u_inv: column i -= column t
                    for row in u_inv.iter_mut() {
                        let s = row[t].clone();
                        row[i] = ring.sub(&row[i], &s);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }
        let (_, inv) = ring.monic(&a[t][t]);
        let lead = ring.field().inv(&inv);
        for x in a[t].iter_mut() {
            *x = ring.scale_left(&inv, x);
        }
        for x in u[t].iter_mut() {
            *x = ring.scale_left(&inv, x);
        }
        for row in u_inv.iter_mut() {
            row[t] = ring.scale_left(&lead, &row[t]);
        }
    }

    let diag = (0..k).map(|i| a[i][i].clone()).collect();
    let mk = |rows: Rows, n: usize| TwistedMatrix::new(&ring, n, n, 0, rows.into_iter().flatten().collect());
    Ok(Smith {
        diag,
        u: mk(u, r)?,
        v: mk(vt, c)?.transpose(),
        u_inv: mk(u_inv, r)?,
        v_inv: mk(v_inv, c)?,
    })
}

/// True when every row of `target` lies in the row space of `m`.
pub fn row_space_contains(m: &TwistedMatrix, target: &TwistedMatrix) -> Result<bool> {
    Ok(solve_right(m, target)?.is_some())
}
