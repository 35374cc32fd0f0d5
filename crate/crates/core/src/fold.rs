//! Folding `B^{m×ℓD}` into `E^{m×ℓ}` for an extension `E/B` of degree `D`,
//! and unfolding back.
//!
//! Each run of `D` consecutive base-field entries of a row becomes one
//! extension element. The basis used is `(α^{D−1}, …, α, 1)`: the first entry
//! of a run is the coefficient of `α^{D−1}`, so over `F_4 = F_2[x]/(x²+x+1)`
//! the row `(1, 0)` folds to `x ≡ 2` and `(1, 1)` to `x + 1 ≡ 3`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;

/// A fold from `from` to the extension `to` (with `to.base() == from`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldSpec {
    from: Field,
    to: Field,
}

impl FoldSpec {
    pub fn new(to: &Field) -> FoldSpec {
        let from = to.base().expect("folding needs an extension field").clone();
        FoldSpec { from, to: to.clone() }
    }

    pub fn from(&self) -> &Field {
        &self.from
    }

    pub fn to(&self) -> &Field {
        &self.to
    }

    /// Columns per folded column.
    pub fn block(&self) -> usize {
        self.to.degree()
    }

    pub fn fold(&self, a: &Mat) -> Result<Mat> {
        let a = a.embed_into(&self.from).map_err(|_| Error::IncompatibleFields)?;
        let block = self.block();
        if a.cols() % block != 0 {
            return Err(Error::ColumnCountNotDivisible { cols: a.cols(), block });
        }
        Ok(Mat::from_fn(&self.to, a.rows(), a.cols() / block, |i, j| {
            let mut coeffs: Vec<Elem> = a.row(i)[j * block..(j + 1) * block].to_vec();
            coeffs.reverse();
            self.to.from_coeffs(&coeffs)
        }))
    }

    pub fn unfold(&self, b: &Mat) -> Result<Mat> {
        if b.field() != &self.to {
            return Err(Error::IncompatibleFields);
        }
        let block = self.block();
        Ok(Mat::from_fn(&self.from, b.rows(), b.cols() * block, |i, j| {
            let coeffs = self.to.coeffs(b.get(i, j / block));
            coeffs[block - 1 - j % block].clone()
        }))
    }
}

/// Folds over the immediate base of `to`.
pub fn fold(a: &Mat, to: &Field) -> Result<Mat> {
    FoldSpec::new(to).fold(a)
}

/// Unfolds onto the immediate base of the matrix's field.
pub fn unfold(b: &Mat) -> Result<Mat> {
    FoldSpec::new(b.field()).unfold(b)
}

/// Unfolds repeatedly until the entries lie in `target` (a subfield of `b`'s field).
pub fn unfold_to(b: &Mat, target: &Field) -> Result<Mat> {
    if !b.field().contains_subfield(target) {
        return Err(Error::IncompatibleFields);
    }
    let mut cur = b.clone();
    while cur.field() != target {
        cur = unfold(&cur)?;
    }
    Ok(cur)
}
