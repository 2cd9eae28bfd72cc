//! Dense linear algebra over a coefficient field, row-vector convention.

use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl KMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        KMatrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let r = rows.len();
        debug_assert!(rows.iter().all(|x| x.len() == cols));
        KMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        KMatrix { rows, cols, data }
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vec<Scalar>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn transpose(&self) -> KMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        KMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, field: &Field, other: &KMatrix) -> KMatrix {
        assert_eq!(self.cols, other.rows, "k-matrix shape mismatch");
        let mut out = Self::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if field.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = field.add(&out.data[idx], &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, field: &Field, other: &KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| field.add(a, b)).collect();
        KMatrix { data, ..*self }
    }

    pub fn sub(&self, field: &Field, other: &KMatrix) -> KMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| field.sub(a, b)).collect();
        KMatrix { data, ..*self }
    }

    pub fn scale(&self, field: &Field, c: &Scalar) -> KMatrix {
        let data = self.data.iter().map(|a| field.mul(c, a)).collect();
        KMatrix { data, ..*self }
    }

    pub fn vstack(parts: &[&KMatrix]) -> KMatrix {
        let cols = parts.first().map_or(0, |p| p.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        KMatrix { rows, cols, data }
    }

    pub fn hstack(parts: &[&KMatrix]) -> KMatrix {
        let ts: Vec<KMatrix> = parts.iter().map(|p| p.transpose()).collect();
        Self::vstack(&ts.iter().collect::<Vec<_>>()).transpose()
    }

    pub fn block_diag(field: &Field, parts: &[&KMatrix]) -> KMatrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for i in 0..p.rows {
                for j in 0..p.cols {
                    m.set(r0 + i, c0 + j, p.get(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> KMatrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        KMatrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> KMatrix {
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        KMatrix { rows: idx.len(), cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: &Field) -> (KMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else { continue };
            m.swap_rows(r, p);
            let inv = field.inv(m.get(r, c));
            for j in c..m.cols {
                let v = field.mul(&inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || field.is_zero(m.get(i, c)) {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = field.sub(m.get(i, j), &field.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    /// Rows forming a basis of `{x : M·xᵀ = 0}`.
    pub fn right_kernel(&self, field: &Field) -> KMatrix {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = KMatrix::zeros(field, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, field.one());
            for (pi, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, field.neg(r.get(pi, fc)));
            }
        }
        out
    }

    /// Rows forming a basis of `{v : v·M = 0}`.
    pub fn left_kernel(&self, field: &Field) -> KMatrix {
        self.transpose().right_kernel(field)
    }

    /// Some `X` with `X·M = target`, if one exists.
    pub fn solve_left(&self, field: &Field, target: &KMatrix) -> Option<KMatrix> {
        assert_eq!(self.cols, target.cols);
        // [Mᵀ | targetᵀ] in reduced form
        let aug = KMatrix::hstack(&[&self.transpose(), &target.transpose()]);
        let (r, pivots) = aug.rref(field);
        if pivots.iter().any(|&c| c >= self.rows) {
            return None;
        }
        let mut x = KMatrix::zeros(field, target.rows, self.rows);
        for (pi, &pc) in pivots.iter().enumerate() {
            for t in 0..target.rows {
                x.set(t, pc, r.get(pi, self.rows + t).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self, field: &Field) -> Option<KMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = KMatrix::hstack(&[self, &KMatrix::identity(field, n)]);
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.select_cols(&idx))
    }

    pub fn det(&self, field: &Field) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else { return field.zero() };
            if p != c {
                m.swap_rows(p, c);
                det = field.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = field.mul(&det, &piv);
            let inv = field.inv(&piv);
            for i in c + 1..m.rows {
                if field.is_zero(m.get(i, c)) {
                    continue;
                }
                let f = field.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = field.sub(m.get(i, j), &field.mul(&f, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Solution set of a linear system whose unknowns are matrices.
#[derive(Clone, Debug)]
pub struct MatrixSystemSolution {
    /// Some solution of the inhomogeneous system, if it is consistent.
    pub particular: Option<Vec<KMatrix>>,
    /// A basis of the solutions of the homogeneous system.
    pub kernel: Vec<Vec<KMatrix>>,
}

fn split_unknowns(shapes: &[(usize, usize)], v: &[Scalar]) -> Vec<KMatrix> {
    let mut out = Vec::with_capacity(shapes.len());
    let mut pos = 0;
    for &(r, c) in shapes {
        out.push(KMatrix::from_data(r, c, v[pos..pos + r * c].to_vec()));
        pos += r * c;
    }
    out
}

/// Solves `map(u) = target` for matrices `u` of the given shapes; `map`
/// must be linear over `field`.
pub fn solve_matrix_system<F>(
    field: &Field,
    shapes: &[(usize, usize)],
    target: &[KMatrix],
    map: F,
) -> MatrixSystemSolution
where
    F: Fn(&[KMatrix]) -> Vec<KMatrix>,
{
    let n: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let t: Vec<Scalar> = target.iter().flat_map(|m| m.data.iter().cloned()).collect();
    if n == 0 {
        let ok = t.iter().all(|c| field.is_zero(c));
        return MatrixSystemSolution { particular: ok.then(|| split_unknowns(shapes, &[])), kernel: vec![] };
    }
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = vec![field.zero(); n];
        v[k] = field.one();
        let img: Vec<Scalar> = map(&split_unknowns(shapes, &v)).into_iter().flat_map(|m| m.data).collect();
        assert_eq!(img.len(), t.len(), "linear map image has the wrong length");
        rows.push(img);
    }
    let m = KMatrix::from_rows(rows, t.len());
    let kernel = m.left_kernel(field).row_vecs().iter().map(|v| split_unknowns(shapes, v)).collect();
    let particular = m
        .solve_left(field, &KMatrix::from_rows(vec![t.clone()], t.len()))
        .map(|x| split_unknowns(shapes, x.row(0)));
    MatrixSystemSolution { particular, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> KMatrix {
        let f = Field::rationals();
        let cols = rows[0].len();
        KMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(), cols)
    }

    #[test]
    fn kernel_and_inverse() {
        let f = Field::rationals();
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(&f), 1);
        let k = m.right_kernel(&f);
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&f, &k.transpose()).is_zero(&f));
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv), KMatrix::identity(&f, 2));
        assert_eq!(a.det(&f), f.one());
        assert!(m.transpose().mul(&f, &m).inverse(&f).is_none());
    }

    #[test]
    fn solve_left_over_f3() {
        let f = Field::new(FieldSpec::Prime { p: 3 }).unwrap();
        let m = KMatrix::from_rows(vec![vec![f.from_i64(1), f.from_i64(2)], vec![f.from_i64(0), f.from_i64(1)]], 2);
        let t = KMatrix::from_rows(vec![vec![f.from_i64(2), f.from_i64(0)]], 2);
        let x = m.solve_left(&f, &t).unwrap();
        assert_eq!(x.mul(&f, &m), t);
    }

    proptest! {
        #[test]
        fn solve_left_is_sound(entries in proptest::collection::vec(-3i64..4, 12), w in proptest::collection::vec(-3i64..4, 3)) {
            let f = Field::rationals();
            let m = KMatrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(), 4);
            let w = KMatrix::from_rows(vec![w.iter().map(|&x| f.from_i64(x)).collect()], 3);
            let t = w.mul(&f, &m);
            let x = m.solve_left(&f, &t).unwrap();
            prop_assert_eq!(x.mul(&f, &m), t);
            let lk = m.left_kernel(&f);
            prop_assert_eq!(lk.rows() + m.rank(&f), 3);
        }
    }
}
