//! The two-source codec.
//!
//! Source `S1` encodes `X1 ∈ F_q^{R1×kN}` with a Gabidulin code over
//! `F_q/F_p` of length `n = R1 + 2z`; source `S2` encodes `X2 ∈ F_Q^{R2×k}`
//! with a Gabidulin code over `F_Q/F_q` of length `N = R2 + 2z`. Both
//! codewords are unfolded to `F_p` matrices with `ℓ = k·n·N` columns. Since
//! `R1 + N = C`, the receiver can separate the sources through the square
//! matrix `D = [T1·G1 | T2]` over `F_q` and decodes `X2` first, then `X1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldTower;
use crate::fold::{fold, unfold};
use crate::gabidulin::{DecodeDiagnostics, GabidulinCode, SideInfo};
use crate::matrix::Mat;
use crate::netsim::CutProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Coherent,
    Noncoherent,
}

#[derive(Clone, Debug)]
pub struct ManiacParams {
    pub p: u64,
    pub z: usize,
    pub r1: usize,
    pub r2: usize,
    pub k: usize,
    pub n: usize,
    pub big_n: usize,
    pub ell: usize,
    pub c: usize,
    pub tower: FieldTower,
    pub code1: GabidulinCode,
    pub code2: GabidulinCode,
}

/// Validates the rate point against the cuts and builds both codes.
pub fn derive_params(
    p: u64,
    z: usize,
    r1: usize,
    r2: usize,
    k: usize,
    cuts: CutProfile,
) -> Result<ManiacParams> {
    let violation = |s: String| Err(Error::RateRegionViolation(s));
    if r1 == 0 || r2 == 0 {
        return violation(format!("both rates must be positive (R1 = {r1}, R2 = {r2})"));
    }
    if k == 0 {
        return Err(Error::BadDimensions("packet-length multiplier k must be at least 1".into()));
    }
    if r1 + 2 * z > cuts.c1 {
        return violation(format!("R1 <= C1 - 2z fails: {r1} > {} - {}", cuts.c1, 2 * z));
    }
    if r2 + 2 * z > cuts.c2 {
        return violation(format!("R2 <= C2 - 2z fails: {r2} > {} - {}", cuts.c2, 2 * z));
    }
    if r1 + r2 + 2 * z != cuts.c {
        return violation(format!("R1 + R2 + 2z = C fails: {} != {}", r1 + r2 + 2 * z, cuts.c));
    }
    let (n, big_n) = (r1 + 2 * z, r2 + 2 * z);
    let tower = FieldTower::new(p, n, big_n)?;
    let code1 = GabidulinCode::new(&tower.fq, n, r1)?;
    let code2 = GabidulinCode::new(&tower.fqq, big_n, r2)?;
    Ok(ManiacParams { p, z, r1, r2, k, n, big_n, ell: k * n * big_n, c: cuts.c, tower, code1, code2 })
}

/// Result of a successful decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub x1: Mat,
    pub x2: Mat,
    pub x1_diag: DecodeDiagnostics,
    pub x2_diag: DecodeDiagnostics,
}

/// Blocks of a lifted received matrix in reduced row echelon form:
/// padded to `t` rows, the transform part is `I_t + L̂·U_μᵀ` and the data
/// part is `r`, followed by `δ` rows `[O | Ê]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage1Extract {
    pub t_rre: Mat,
    pub m_rre: Mat,
    pub l_hat: Mat,
    pub r: Mat,
    pub e_hat: Mat,
    /// Non-pivot positions among the transform columns.
    pub u: Vec<usize>,
    pub u_mu: Mat,
    pub mu: usize,
    pub delta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncoherentOutcome {
    pub decoded: Decoded,
    pub stage1: Stage1Extract,
    pub stage2: Stage1Extract,
}

/// Splits the reduced form of `ya` after its first `t` (transform) columns.
pub fn rre_extract(ya: &Mat, t: usize) -> Result<Stage1Extract> {
    if t > ya.cols() {
        return Err(Error::MalformedRre(format!("{t} transform columns but only {} columns", ya.cols())));
    }
    let f = ya.field().clone();
    let w = ya.cols() - t;
    let (red, pivots) = ya.rref();
    let rank = pivots.len();
    let top = pivots.iter().take_while(|&&c| c < t).count();
    let u: Vec<usize> = (0..t).filter(|c| !pivots[..top].contains(c)).collect();
    let mu = u.len();

    let mut l_hat = Mat::zeros(&f, t, mu);
    let mut r = Mat::zeros(&f, t, w);
    for (i, &pc) in pivots[..top].iter().enumerate() {
        for (j, &uc) in u.iter().enumerate() {
            l_hat.set(pc, j, red.get(i, uc).clone());
        }
        for j in 0..w {
            r.set(pc, j, red.get(i, t + j).clone());
        }
    }
    for (j, &uc) in u.iter().enumerate() {
        l_hat.set(uc, j, f.neg(&f.one()));
    }
    let e_hat = red.slice(top..rank, t..ya.cols());
    let u_mu = Mat::from_fn(&f, t, mu, |i, j| if u[j] == i { f.one() } else { f.zero() });
    let ex = Stage1Extract {
        t_rre: red.slice(0..rank, 0..t),
        m_rre: red.slice(0..rank, t..ya.cols()),
        l_hat,
        r,
        delta: e_hat.rows(),
        e_hat,
        u,
        u_mu,
        mu,
    };
    ex.check()?;
    Ok(ex)
}

impl Stage1Extract {
    /// The structural identities `U_μᵀ·r = O`, `U_μᵀ·L̂ = −I_μ`, `rank Ê = δ`,
    /// and that the padded reduced form matches the blocks.
    pub fn check(&self) -> Result<()> {
        let f = self.l_hat.field();
        let ut = self.u_mu.transpose();
        if !ut.mul(&self.r)?.is_zero() {
            return Err(Error::MalformedRre("U^T r != 0".into()));
        }
        if ut.mul(&self.l_hat)? != Mat::identity(f, self.mu).neg() {
            return Err(Error::MalformedRre("U^T L != -I".into()));
        }
        if self.e_hat.rank() != self.delta {
            return Err(Error::MalformedRre("known error values are dependent".into()));
        }
        let t = self.u_mu.rows();
        let top = t - self.mu;
        if self.t_rre.rows() != top + self.delta || !self.t_rre.slice_rows(top..self.t_rre.rows()).is_zero() {
            return Err(Error::MalformedRre("transform rows below the pivots".into()));
        }
        let padded = Mat::identity(f, t).add(&self.l_hat.mul(&ut)?)?;
        let kept: Vec<usize> = (0..t).filter(|i| !self.u.contains(i)).collect();
        if padded.select_rows(&kept) != self.t_rre.slice_rows(0..top)
            || self.r.select_rows(&kept) != self.m_rre.slice_rows(0..top)
        {
            return Err(Error::MalformedRre("blocks disagree with the reduced form".into()));
        }
        Ok(())
    }
}

impl ManiacParams {
    pub fn mode_width(&self, mode: Mode) -> usize {
        match mode {
            Mode::Coherent => self.ell,
            Mode::Noncoherent => self.n + self.big_n + self.ell,
        }
    }

    /// Uniform random messages `(X1, X2)`.
    pub fn random_messages<R: Rng + ?Sized>(&self, rng: &mut R) -> (Mat, Mat) {
        let x1 = Mat::random(&self.tower.fq, self.r1, self.k * self.big_n, rng);
        let x2 = Mat::random(&self.tower.fqq, self.r2, self.k, rng);
        (x1, x2)
    }

    /// `M1 = unfold(G1·X1)`, an `n × ℓ` matrix over `F_p`.
    pub fn s1_encode(&self, x1: &Mat) -> Result<Mat> {
        let want = (self.r1, self.k * self.big_n);
        if x1.shape() != want || !self.tower.fq.contains_subfield(x1.field()) {
            return Err(Error::ShapeMismatch(format!("X1 is {:?} over {} elements, expected {want:?} over F_q",
                x1.shape(), describe(x1))));
        }
        self.code1.encode(x1)
    }

    /// `M2`: `G2·X2` unfolded twice, an `N × ℓ` matrix over `F_p`.
    pub fn s2_encode(&self, x2: &Mat) -> Result<Mat> {
        let want = (self.r2, self.k);
        if x2.shape() != want || !self.tower.fqq.contains_subfield(x2.field()) {
            return Err(Error::ShapeMismatch(format!("X2 is {:?} over {} elements, expected {want:?} over F_Q",
                x2.shape(), describe(x2))));
        }
        unfold(&self.code2.encode(x2)?)
    }

    /// `H1 = [I_n | O | M1]` and `H2 = [O | I_N | M2]`.
    pub fn lift_headers(&self, m1: &Mat, m2: &Mat) -> Result<(Mat, Mat)> {
        let f = &self.tower.fp;
        let h1 = Mat::hstack(&[&Mat::identity(f, self.n), &Mat::zeros(f, self.n, self.big_n), m1])?;
        let h2 = Mat::hstack(&[&Mat::zeros(f, self.big_n, self.n), &Mat::identity(f, self.big_n), m2])?;
        Ok((h1, h2))
    }

    /// Source-side messages for `mode`: plain codewords or lifted headers.
    pub fn source_messages(&self, x1: &Mat, x2: &Mat, mode: Mode) -> Result<(Mat, Mat)> {
        let (m1, m2) = (self.s1_encode(x1)?, self.s2_encode(x2)?);
        match mode {
            Mode::Coherent => Ok((m1, m2)),
            Mode::Noncoherent => self.lift_headers(&m1, &m2),
        }
    }

    /// `D = [T1·G1 | T2]` over `F_q`.
    pub fn d_matrix(&self, t1: &Mat, t2: &Mat) -> Result<Mat> {
        let t1g1 = t1.mul(self.code1.generator_matrix())?;
        Mat::hstack(&[&t1g1, &t2.embed_into(&self.tower.fq)?])
    }

    /// Decoding with known transforms `T1`, `T2`.
    pub fn coherent_decode(&self, y: &Mat, t1: &Mat, t2: &Mat) -> Result<Decoded> {
        let fp = &self.tower.fp;
        if y.field() != fp || y.cols() != self.ell || t1.shape() != (y.rows(), self.n)
            || t2.shape() != (y.rows(), self.big_n)
        {
            return Err(Error::ShapeMismatch(format!(
                "Y {:?}, T1 {:?}, T2 {:?} do not fit n = {}, N = {}, l = {}",
                y.shape(), t1.shape(), t2.shape(), self.n, self.big_n, self.ell
            )));
        }
        let yf = fold(y, &self.tower.fq)?;
        let d = self.d_matrix(t1, t2)?;
        let d_inv = d.inverse().map_err(|_| Error::SingularD)?;
        let sep = d_inv.mul(&yf)?;
        let r2 = sep.slice_rows(self.r1..self.c);
        let none2 = SideInfo::none(&self.tower.fq, self.big_n, r2.cols());
        let (x2, x2_diag) = self.code2.decode(&r2, &none2).map_err(|e| Error::X2DecodeFailure(e.to_string()))?;

        let m2 = self.s2_encode(&x2)?;
        let rest = y.sub(&t2.mul(&m2)?)?;
        let t1_inv = t1.left_inverse()?;
        let r1 = t1_inv.mul(&rest)?;
        let none1 = SideInfo::none(fp, self.n, self.ell);
        let (x1, x1_diag) = self.code1.decode(&r1, &none1).map_err(|e| Error::X1DecodeFailure(e.to_string()))?;
        Ok(Decoded { x1, x2, x1_diag, x2_diag })
    }

    /// Decoding from lifted packets alone.
    ///
    /// Stage 1 reduces `Y_a = [Y1·G1 | Y2 | fold(Y3)]` over `F_q` and decodes
    /// `X2` from the last `N` rows of the extracted blocks. Stage 2 removes
    /// `S2`'s contribution, leaving the single-source lifted matrix
    /// `Y' = [Y1 | Y3 − Y2·M2] = T1·[I_n | M1] + E'` over `F_p`, which is
    /// reduced and decoded with `S1`'s code.
    pub fn noncoherent_decode(&self, y: &Mat) -> Result<NoncoherentOutcome> {
        let fp = &self.tower.fp;
        let (n, big_n) = (self.n, self.big_n);
        if y.field() != fp || y.cols() != n + big_n + self.ell {
            return Err(Error::ShapeMismatch(format!(
                "Y is {:?}, expected {} columns over F_p",
                y.shape(),
                n + big_n + self.ell
            )));
        }
        let y1 = y.slice_cols(0..n);
        let y2 = y.slice_cols(n..n + big_n);
        let y3 = y.slice_cols(n + big_n..y.cols());

        let ya = Mat::hstack(&[&y1.mul(self.code1.generator_matrix())?, &y2, &fold(&y3, &self.tower.fq)?])?;
        let stage1 = rre_extract(&ya, self.r1 + big_n)?;
        let rows = self.r1..self.r1 + big_n;
        let side2 = SideInfo::new(stage1.l_hat.slice_rows(rows.clone()), stage1.e_hat.clone());
        let (x2, x2_diag) = self
            .code2
            .decode(&stage1.r.slice_rows(rows), &side2)
            .map_err(|e| Error::Stage1Failure(e.to_string()))?;

        let m2 = self.s2_encode(&x2)?;
        let y_prime = Mat::hstack(&[&y1, &y3.sub(&y2.mul(&m2)?)?])?;
        let stage2 = rre_extract(&y_prime, n)?;
        let side1 = SideInfo::new(stage2.l_hat.clone(), stage2.e_hat.clone());
        let (x1, x1_diag) = self
            .code1
            .decode(&stage2.r, &side1)
            .map_err(|e| Error::Stage2Failure(e.to_string()))?;
        Ok(NoncoherentOutcome { decoded: Decoded { x1, x2, x1_diag, x2_diag }, stage1, stage2 })
    }
}

fn describe(m: &Mat) -> String {
    match m.field().size() {
        Some(s) => s.to_string(),
        None => format!("{}^{}", m.field().p(), m.field().abs_degree()),
    }
}
