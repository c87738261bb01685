//! Dense matrices over a subfield of the tower's big field, with exact row
//! reduction, rank, kernel and row-space membership.
//!
//! Entries always use the big-field encoding; `field_order` names the
//! subfield they are known to lie in.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{GaloisTower, Gf};

#[derive(Clone)]
pub struct GfMatrix {
    tower: Arc<GaloisTower>,
    field_order: u32,
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl std::fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.export())
    }
}

impl PartialEq for GfMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_field(&other.tower)
            && self.field_order == other.field_order
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for GfMatrix {}

/// `dst -= factor * src`, entrywise.
#[inline]
pub(crate) fn axpy(t: &GaloisTower, dst: &mut [Gf], src: &[Gf], factor: Gf) {
    if factor.is_zero() {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = t.sub(*d, t.mul(factor, s));
        }
    }
}

impl GfMatrix {
    pub fn new(
        tower: Arc<GaloisTower>,
        field_order: u32,
        rows: usize,
        cols: usize,
        data: Vec<Gf>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if !tower.is_subfield_order(field_order) {
            return Err(Error::NotASubfield { order: field_order, big: tower.order() });
        }
        if let Some(bad) = data
            .iter()
            .find(|&&x| !tower.contains(x) || !tower.in_subfield(x, field_order))
        {
            return Err(Error::Parse(format!("entry {bad} is not in F_{field_order}")));
        }
        Ok(GfMatrix { tower, field_order, rows, cols, data })
    }

    /// Builds a matrix without the subfield membership check.
    pub(crate) fn from_raw(
        tower: Arc<GaloisTower>,
        field_order: u32,
        rows: usize,
        cols: usize,
        data: Vec<Gf>,
    ) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        GfMatrix { tower, field_order, rows, cols, data }
    }

    pub fn from_rows(
        tower: Arc<GaloisTower>,
        field_order: u32,
        cols: usize,
        rows: &[Vec<Gf>],
    ) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        let data = rows.iter().flatten().copied().collect();
        GfMatrix::new(tower, field_order, rows.len(), cols, data)
    }

    pub fn zeros(tower: Arc<GaloisTower>, field_order: u32, rows: usize, cols: usize) -> Self {
        GfMatrix::from_raw(tower, field_order, rows, cols, vec![Gf::ZERO; rows * cols])
    }

    pub fn identity(tower: Arc<GaloisTower>, field_order: u32, n: usize) -> Self {
        let mut m = GfMatrix::zeros(tower, field_order, n, n);
        for i in 0..n {
            m.data[i * n + i] = Gf::ONE;
        }
        m
    }

    pub fn tower(&self) -> &Arc<GaloisTower> {
        &self.tower
    }
    pub fn field_order(&self) -> u32 {
        self.field_order
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Gf] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Gf {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Gf] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Gf]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    fn check_tower(&self, other: &GfMatrix) -> Result<()> {
        if !self.tower.same_field(&other.tower) {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    /// Same entries, declared to live in a different subfield. Fails when an
    /// entry is outside it.
    pub fn with_field_order(&self, field_order: u32) -> Result<GfMatrix> {
        GfMatrix::new(self.tower.clone(), field_order, self.rows, self.cols, self.data.clone())
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        GfMatrix::from_raw(self.tower.clone(), self.field_order, self.cols, self.rows, data)
    }

    /// Applies `f` to every entry; the caller vouches for the target field.
    pub(crate) fn map(&self, field_order: u32, f: impl Fn(Gf) -> Gf) -> GfMatrix {
        let data = self.data.iter().map(|&x| f(x)).collect();
        GfMatrix::from_raw(self.tower.clone(), field_order, self.rows, self.cols, data)
    }

    /// Keeps the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        GfMatrix::from_raw(self.tower.clone(), self.field_order, self.rows, cols.len(), data)
    }

    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let data = rows.iter().flat_map(|&r| self.row(r).iter().copied()).collect();
        GfMatrix::from_raw(self.tower.clone(), self.field_order, rows.len(), self.cols, data)
    }

    /// Stacks `other` below `self`; the result lives in the larger field.
    pub fn vstack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_tower(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        let order = self.field_order.max(other.field_order);
        Ok(GfMatrix::from_raw(self.tower.clone(), order, self.rows + other.rows, self.cols, data))
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_tower(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let t = &self.tower;
        let mut data = vec![Gf::ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let out = &mut data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out.iter_mut().zip(other.row(k)) {
                    *o = t.add(*o, t.mul(a, b));
                }
            }
        }
        let order = self.field_order.max(other.field_order);
        Ok(GfMatrix::from_raw(t.clone(), order, self.rows, other.cols, data))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form (same shape, zero rows last) and pivot columns.
    /// Pivots are chosen as the leftmost nonzero column, topmost row.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let t = &self.tower;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    m.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = t.inv(m[r * cols + c]).expect("pivot is nonzero");
            for k in c..cols {
                m[r * cols + k] = t.mul(m[r * cols + k], inv);
            }
            let pivot_row: Vec<Gf> = m[r * cols..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = m[i * cols + c];
                axpy(t, &mut m[i * cols..(i + 1) * cols], &pivot_row, f);
            }
            pivots.push(c);
            r += 1;
        }
        (GfMatrix::from_raw(t.clone(), self.field_order, rows, cols, m), pivots)
    }

    /// RREF with zero rows stripped: the canonical witness of the row space.
    pub fn canonical(&self) -> GfMatrix {
        let (r, pivots) = self.rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{x : M x^T = 0}`.
    pub fn kernel(&self) -> GfMatrix {
        let t = &self.tower;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut data = vec![Gf::ZERO; free.len() * self.cols];
        for (b, &f) in free.iter().enumerate() {
            let row = &mut data[b * self.cols..(b + 1) * self.cols];
            row[f] = Gf::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                row[pc] = t.neg(r.get(i, f));
            }
        }
        GfMatrix::from_raw(t.clone(), self.field_order, free.len(), self.cols, data)
    }

    pub fn row_space_equal(&self, other: &GfMatrix) -> Result<bool> {
        self.check_tower(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let a = self.canonical();
        let b = other.canonical();
        Ok(a.rows == b.rows && a.data == b.data)
    }

    pub fn in_row_space(&self, v: &[Gf]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let (r, pivots) = self.rref();
        let mut w = v.to_vec();
        for (i, &pc) in pivots.iter().enumerate() {
            let f = w[pc];
            axpy(&self.tower, &mut w, r.row(i), f);
        }
        Ok(w.iter().all(|x| x.is_zero()))
    }

    /// True when every row of `other` lies in the row space of `self`.
    pub fn contains_row_space(&self, other: &GfMatrix) -> Result<bool> {
        self.check_tower(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let (r, pivots) = self.rref();
        for row in other.row_iter() {
            let mut w = row.to_vec();
            for (i, &pc) in pivots.iter().enumerate() {
                let f = w[pc];
                axpy(&self.tower, &mut w, r.row(i), f);
            }
            if w.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `rows cols field_order` followed by one line of element codes per row.
    pub fn export(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.field_order);
        for row in self.row_iter() {
            let line: Vec<String> = row.iter().map(|x| x.0.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse(tower: Arc<GaloisTower>, text: &str) -> Result<GfMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix".into()))?;
        let nums = parse_ints(header)?;
        let [rows, cols, field_order] = nums[..] else {
            return Err(Error::Parse(format!("bad matrix header {header:?}")));
        };
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for line in lines {
            let row = parse_ints(line)?;
            if row.len() as u64 != cols {
                return Err(Error::DimensionMismatch { expected: cols as usize, found: row.len() });
            }
            data.extend(row.into_iter().map(|c| Gf(c as u32)));
        }
        if data.len() as u64 != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: (rows * cols) as usize,
                found: data.len(),
            });
        }
        GfMatrix::new(tower, field_order as u32, rows as usize, cols as usize, data)
    }
}

fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|w| w.parse::<u64>().map_err(|e| Error::Parse(format!("{w:?}: {e}"))))
        .collect()
}
