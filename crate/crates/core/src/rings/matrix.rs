//! Dense matrices over a chain ring and the row-space computations built on
//! Smith normal form.
//!
//! Row vectors throughout: a module `R^g / rowspace(A)` and maps `x ↦ x D`.

use super::chain::ChainRing;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(r: &ChainRing, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, r.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&row);
        }
        m
    }

    /// An `n × n` diagonal matrix.
    pub fn diagonal(diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack width mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack height mismatch");
        let cols = self.cols + other.cols;
        let mut m = Mat::zeros(self.rows, cols);
        for i in 0..self.rows {
            m.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        m
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, r: &ChainRing, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "product shape mismatch");
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b != 0 {
                        let cur = m.get(i, j);
                        m.set(i, j, r.add(cur, r.mul(a, b)));
                    }
                }
            }
        }
        m
    }

    pub fn scale(&self, r: &ChainRing, c: u64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| r.mul(c, x)).collect() }
    }

    pub fn add(&self, r: &ChainRing, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| r.add(a, b)).collect(),
        }
    }

    /// `x ↦ x self` applied to one row vector.
    pub fn apply(&self, r: &ChainRing, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = r.add(*o, r.mul(a, self.get(i, j)));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Mat {
        let cols = range.len();
        let mut m = Mat::zeros(self.rows, cols);
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_dst -= c row_src`.
    fn row_axpy(&mut self, r: &ChainRing, dst: usize, src: usize, c: u64) {
        let nc = r.neg(c);
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s != 0 {
                let d = self.get(dst, j);
                self.set(dst, j, r.add(d, r.mul(nc, s)));
            }
        }
    }

    fn col_axpy(&mut self, r: &ChainRing, dst: usize, src: usize, c: u64) {
        let nc = r.neg(c);
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s != 0 {
                let d = self.get(i, dst);
                self.set(i, dst, r.add(d, r.mul(nc, s)));
            }
        }
    }
}

/// Valuations of the Smith form `P A Q = diag(π^{v_i} u_i)` and the row
/// transform `P`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub valuations: Vec<u32>,
    pub p: Option<Mat>,
}

pub fn snf(r: &ChainRing, a: &Mat, track_rows: bool) -> Snf {
    let mut m = a.clone();
    let mut p = if track_rows { Some(Mat::identity(r, a.rows)) } else { None };
    let n = a.rows.min(a.cols);
    let k = r.k();
    let mut valuations = Vec::with_capacity(n);
    for t in 0..n {
        let mut best = (k, t, t);
        'search: for i in t..m.rows {
            for j in t..m.cols {
                let x = m.get(i, j);
                if x != 0 {
                    let v = r.valuation(x);
                    if v < best.0 {
                        best = (v, i, j);
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let (v, bi, bj) = best;
        if v == k {
            valuations.extend(std::iter::repeat_n(k, n - t));
            break;
        }
        m.swap_rows(t, bi);
        if let Some(p) = p.as_mut() {
            p.swap_rows(t, bi);
        }
        m.swap_cols(t, bj);
        let pivot = m.get(t, t);
        for i in t + 1..m.rows {
            let x = m.get(i, t);
            if x != 0 {
                let c = r.div_exact(x, pivot).expect("pivot has minimal valuation");
                m.row_axpy(r, i, t, c);
                if let Some(p) = p.as_mut() {
                    p.row_axpy(r, i, t, c);
                }
            }
        }
        for j in t + 1..m.cols {
            let x = m.get(t, j);
            if x != 0 {
                let c = r.div_exact(x, pivot).expect("pivot has minimal valuation");
                m.col_axpy(r, j, t, c);
            }
        }
        valuations.push(v);
    }
    Snf { valuations, p }
}

/// `log_q |rowspace(A)|`.
pub fn span_log(r: &ChainRing, a: &Mat) -> u32 {
    if a.rows == 0 || a.cols == 0 {
        return 0;
    }
    snf(r, a, false).valuations.iter().map(|&v| r.k() - v).sum()
}

/// Generators of the left kernel `{x | x A = 0}` as rows.
pub fn kernel(r: &ChainRing, a: &Mat) -> Mat {
    let k = r.k();
    if a.cols == 0 {
        return Mat::identity(r, a.rows);
    }
    let s = snf(r, a, true);
    let p = s.p.expect("tracked");
    let mut out = Mat::zeros(0, a.rows);
    for (i, &v) in s.valuations.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let c = r.pi_pow(k - v.min(k));
        let c = if v == k { r.one() } else { c };
        let row: Vec<u64> = p.row(i).iter().map(|&x| r.mul(c, x)).collect();
        out.push_row(&row);
    }
    for i in s.valuations.len()..a.rows {
        out.push_row(p.row(i));
    }
    out
}

/// Whether `x` lies in the row space of `a`.
pub fn in_rowspace(r: &ChainRing, a: &Mat, x: &[u64]) -> bool {
    if x.iter().all(|&c| c == 0) {
        return true;
    }
    let mut with = a.clone();
    with.push_row(x);
    span_log(r, &with) == span_log(r, a)
}

/// Whether `rowspace(b) ⊆ rowspace(a)`.
pub fn rowspace_contains(r: &ChainRing, a: &Mat, b: &Mat) -> bool {
    if b.is_zero() {
        return true;
    }
    span_log(r, &a.vstack(b)) == span_log(r, a)
}

/// Exponents `a_1 >= a_2 >= ...` of `rowspace(z) / rowspace(b)
/// ≅ ⊕ R/π^{a_l}`, assuming `rowspace(b) ⊆ rowspace(z)`.
pub fn quotient_parts(r: &ChainRing, z: &Mat, b: &Mat) -> Vec<u32> {
    let k = r.k();
    let base = span_log(r, b);
    // s[j] = log |π^j (Z/B)|
    let s: Vec<u32> = (0..=k)
        .map(|j| {
            if j == k {
                0
            } else {
                span_log(r, &z.scale(r, r.pi_pow(j)).vstack(b)) - base
            }
        })
        .collect();
    // c[j] = #{l | a_l > j} for j in 0..k
    let c: Vec<u32> = (0..k as usize).map(|j| s[j] - s[j + 1]).collect();
    let mut parts = Vec::new();
    for j in (0..k as usize).rev() {
        let above = if j + 1 < k as usize { c[j + 1] } else { 0 };
        for _ in 0..(c[j] - above) {
            parts.push(j as u32 + 1);
        }
    }
    parts
}

/// Invariant factors of `R^g / rowspace(a)` read off the Smith form.
pub fn cokernel_parts(r: &ChainRing, a: &Mat) -> Vec<u32> {
    let g = a.cols;
    let mut parts: Vec<u32> = if a.rows == 0 {
        Vec::new()
    } else {
        snf(r, a, false).valuations.into_iter().filter(|&v| v > 0).collect()
    };
    let n = a.rows.min(g);
    parts.extend(std::iter::repeat_n(r.k(), g - n));
    parts.sort_unstable_by(|x, y| y.cmp(x));
    parts
}

/// `{x ∈ R^{m.rows} | x m ∈ rowspace(s)}` as generating rows.
pub fn preimage(r: &ChainRing, m: &Mat, s: &Mat) -> Mat {
    let stacked = m.vstack(s);
    kernel(r, &stacked).select_cols(0..m.rows)
}
