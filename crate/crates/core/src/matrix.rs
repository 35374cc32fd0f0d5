//! Dense matrices over any field of a tower.
//!
//! Products and sums of matrices over different fields of one tower are
//! computed over the larger field, the smaller operand being embedded first.

use std::fmt;
use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldDescriptor};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Row-reduced echelon form of `A` together with the row operations: `p · A = r`.
#[derive(Clone, Debug)]
pub struct RreResult {
    pub r: Mat,
    pub p: Mat,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// JSON form of a matrix: field descriptor plus integer-encoded rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatJson {
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u128>>,
}

fn common_field(a: &Field, b: &Field) -> Result<Field> {
    if a.contains_subfield(b) {
        Ok(a.clone())
    } else if b.contains_subfield(a) {
        Ok(b.clone())
    } else {
        Err(Error::IncompatibleFields)
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { field: field.clone(), rows, cols, data }
    }

    pub fn from_elems(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        assert_eq!(data.len(), rows * cols, "data length must be rows * cols");
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from integer-encoded rows.
    pub fn from_ints<R: AsRef<[u128]>>(field: &Field, rows: &[R]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                data.push(field.from_int(v)?);
            }
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn to_ints(&self) -> Option<Vec<Vec<u128>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| self.field.to_int(e)).collect())
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// A uniformly random matrix of the given rank (as a product of random
    /// full-rank factors; retried until the rank is exact).
    pub fn random_with_rank<R: Rng + ?Sized>(
        field: &Field,
        rows: usize,
        cols: usize,
        rank: usize,
        rng: &mut R,
    ) -> Mat {
        assert!(rank <= rows.min(cols));
        loop {
            let a = Mat::random(field, rows, rank, rng);
            let b = Mat::random(field, rank, cols, rng);
            let m = a.mul(&b).expect("shapes agree");
            if m.rank() == rank {
                return m;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn slice(&self, rows: Range<usize>, cols: Range<usize>) -> Mat {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        Mat::from_fn(&self.field, rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        })
    }

    pub fn slice_rows(&self, rows: Range<usize>) -> Mat {
        self.slice(rows, 0..self.cols)
    }

    pub fn slice_cols(&self, cols: Range<usize>) -> Mat {
        self.slice(0..self.rows, cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// `[A_1 A_2 …]`; all operands are lifted to the largest field.
    pub fn hstack(parts: &[&Mat]) -> Result<Mat> {
        let field = parts
            .iter()
            .try_fold(parts[0].field.clone(), |f, m| common_field(&f, &m.field))?;
        let rows = parts[0].rows;
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack needs equal row counts".into()));
        }
        let lifted = parts.iter().map(|m| m.embed_into(&field)).collect::<Result<Vec<_>>>()?;
        let cols = lifted.iter().map(|m| m.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for m in &lifted {
                data.extend_from_slice(m.row(i));
            }
        }
        Ok(Mat { field, rows, cols, data })
    }

    /// `[A_1; A_2; …]`; all operands are lifted to the largest field.
    pub fn vstack(parts: &[&Mat]) -> Result<Mat> {
        let field = parts
            .iter()
            .try_fold(parts[0].field.clone(), |f, m| common_field(&f, &m.field))?;
        let cols = parts[0].cols;
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack needs equal column counts".into()));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            data.extend(m.embed_into(&field)?.data);
            rows += m.rows;
        }
        Ok(Mat { field, rows, cols, data })
    }

    /// The same matrix viewed over a field containing this one's.
    pub fn embed_into(&self, field: &Field) -> Result<Mat> {
        if *field == self.field {
            return Ok(self.clone());
        }
        let data = self
            .data
            .iter()
            .map(|e| field.embed_from(&self.field, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat { field: field.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// The same matrix over a subfield; fails if some entry lies outside it.
    pub fn project_to(&self, field: &Field) -> Result<Mat> {
        let data = self
            .data
            .iter()
            .map(|e| self.field.project_to(field, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat { field: field.clone(), rows: self.rows, cols: self.cols, data })
    }

    fn zip_with(&self, other: &Mat, op: impl Fn(&Field, &Elem, &Elem) -> Elem) -> Result<Mat> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let field = common_field(&self.field, &other.field)?;
        let a = self.embed_into(&field)?;
        let b = other.embed_into(&field)?;
        let data = a.data.iter().zip(&b.data).map(|(x, y)| op(&field, x, y)).collect();
        Ok(Mat { field, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |f, x, y| f.add(x, y))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |f, x, y| f.sub(x, y))
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|e| self.field.neg(e)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn scale(&self, c: &Elem) -> Mat {
        let data = self.data.iter().map(|e| self.field.mul(e, c)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let field = common_field(&self.field, &other.field)?;
        let a = self.embed_into(&field)?;
        let b = other.embed_into(&field)?;
        let mut out = Mat::zeros(&field, self.rows, other.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = b.get(k, j);
                    if y.is_zero() {
                        continue;
                    }
                    let t = field.mul(x, y);
                    field.add_assign(&mut out.data[i * b.cols + j], &t);
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan elimination; pivots are the first nonzero entry found
    /// scanning each column top to bottom.
    pub fn rre(&self) -> RreResult {
        let f = &self.field;
        let aug = Mat::hstack(&[self, &Mat::identity(f, self.rows)]).expect("same field");
        let mut work: Vec<Vec<Elem>> = (0..aug.rows).map(|i| aug.row(i).to_vec()).collect();
        let pivot_cols = eliminate(f, &mut work, self.cols);
        let rank = pivot_cols.len();
        let r = Mat::from_fn(f, self.rows, self.cols, |i, j| work[i][j].clone());
        let p = Mat::from_fn(f, self.rows, self.rows, |i, j| work[i][self.cols + j].clone());
        RreResult { r, p, pivot_cols, rank }
    }

    /// Row-reduced echelon form without tracking the transform.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut work: Vec<Vec<Elem>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let pivots = eliminate(&self.field, &mut work, self.cols);
        let r = Mat::from_fn(&self.field, self.rows, self.cols, |i, j| work[i][j].clone());
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `L` with `L · A = I_cols`, or [`Error::NotFullColumnRank`].
    pub fn left_inverse(&self) -> Result<Mat> {
        let res = self.rre();
        if res.rank < self.cols {
            return Err(Error::NotFullColumnRank);
        }
        // full column rank: R = [I; O], so the first `cols` rows of P invert A
        Ok(res.p.slice_rows(0..self.cols))
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        self.left_inverse()
    }

    /// Basis of `{x : A·x = 0}`, as the columns of a `cols × k` matrix.
    pub fn null_space(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = &self.field;
        let mut basis = Mat::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, f.neg(r.get(i, fc)));
            }
        }
        basis
    }

    /// Rows spanning `{y : y·A = 0}`.
    pub fn left_null_space(&self) -> Mat {
        self.transpose().null_space().transpose()
    }

    /// Basis of the row space (nonzero rows of the reduced form).
    pub fn row_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        r.slice_rows(0..pivots.len())
    }

    pub fn to_json(&self) -> Result<MatJson> {
        let data = self
            .to_ints()
            .ok_or_else(|| Error::Config("field too large for integer encoding".into()))?;
        Ok(MatJson { field: self.field.descriptor(), rows: self.rows, cols: self.cols, data })
    }

    pub fn from_json(json: &MatJson) -> Result<Mat> {
        let field = Field::from_descriptor(&json.field)?;
        Mat::from_json_in(&field, json)
    }

    /// Decodes into an already-constructed field, which must match the descriptor.
    pub fn from_json_in(field: &Field, json: &MatJson) -> Result<Mat> {
        if field.descriptor() != json.field {
            return Err(Error::IncompatibleFields);
        }
        if json.data.len() != json.rows || json.data.iter().any(|r| r.len() != json.cols) {
            return Err(Error::DimensionMismatch("matrix JSON shape disagrees with data".into()));
        }
        if json.rows == 0 {
            return Ok(Mat::zeros(field, 0, json.cols));
        }
        Mat::from_ints(field, &json.data)
    }
}

/// In-place Gauss-Jordan over the first `pivot_cols` columns of `rows`.
fn eliminate(f: &Field, rows: &mut [Vec<Elem>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..pivot_cols {
        if next == rows.len() {
            break;
        }
        let Some(src) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, src);
        let inv = f.inv(&rows[next][col]).expect("pivot is nonzero");
        for e in rows[next].iter_mut() {
            *e = f.mul(e, &inv);
        }
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (e, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    f.sub_assign(e, &f.mul(&factor, pv));
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

/// `dim(U + V) − dim(U ∩ V)` for the row spaces `U`, `V`, computed as
/// `2·rank([B1; B2]) − rank(B1) − rank(B2)`.
pub fn row_space_distance(b1: &Mat, b2: &Mat) -> Result<usize> {
    if b1.cols() != b2.cols() {
        return Err(Error::DimensionMismatch("row spaces of different ambient dimension".into()));
    }
    if b1.field() != b2.field() {
        return Err(Error::IncompatibleFields);
    }
    let union = Mat::vstack(&[b1, b2])?.rank();
    Ok(2 * union - b1.rank() - b2.rank())
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|e| self.field.to_int(e).map_or_else(|| format!("{:?}", e.coords()), |v| v.to_string()))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}
