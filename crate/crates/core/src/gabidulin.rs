//! Gabidulin rank-metric codes with errors, erasures and deviations.
//!
//! A code over the extension `E/B` (degree `D`) with length `m ≤ D` and
//! dimension `R` has generator `G[i][j] = g_i^{|B|^j}` where `g_i = α^i` are
//! the first `m` polynomial-basis elements. A message column `x ∈ E^R` is the
//! linearized polynomial `f(y) = Σ_j x_j y^{[j]}`, and its codeword is
//! `(f(g_1), …, f(g_m))`. Codewords are transmitted unfolded over `B`, so a
//! message `X ∈ E^{R×c}` becomes an `m × cD` matrix over `B` and errors are
//! measured by rank over `B`.
//!
//! [`GabidulinCode::decode`] accepts side information about the error
//! `Z = Σ_{i≤τ} L_i E_i`: `μ` known location columns `L_i` and `δ` known
//! value rows `E_i`. It succeeds whenever `2τ − μ − δ ≤ d − 1`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::fold::FoldSpec;
use crate::matrix::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabidulinCode {
    ext: Field,
    base: Field,
    m: usize,
    r: usize,
    generators: Vec<Elem>,
    gen: Mat,
}

/// Known error structure handed to the decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideInfo {
    /// `m × μ` over the base field: known error locations, as columns.
    pub locations: Mat,
    /// `δ × w` over the base field: known error values, as rows.
    pub values: Mat,
}

impl SideInfo {
    pub fn new(locations: Mat, values: Mat) -> SideInfo {
        SideInfo { locations, values }
    }

    /// No side information for an `m × w` received matrix over `base`.
    pub fn none(base: &Field, m: usize, w: usize) -> SideInfo {
        SideInfo { locations: Mat::zeros(base, m, 0), values: Mat::zeros(base, 0, w) }
    }

    pub fn mu(&self) -> usize {
        self.locations.cols()
    }

    pub fn delta(&self) -> usize {
        self.values.rows()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeDiagnostics {
    /// Rank of the error decomposition: `μ + δ +` the rank of the error left
    /// after removing the known locations and values.
    pub tau: usize,
    pub mu: usize,
    pub delta: usize,
    pub success: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Unique { message: Mat, distance: usize },
    Ambiguous { distance: usize, count: usize },
}

impl GabidulinCode {
    /// Length-`m`, dimension-`r` code over `ext` (viewed over its immediate base).
    pub fn new(ext: &Field, m: usize, r: usize) -> Result<GabidulinCode> {
        let base = ext
            .base()
            .ok_or_else(|| Error::BadDimensions("code field must be an extension".into()))?
            .clone();
        if !(1 <= r && r <= m && m <= ext.degree()) {
            return Err(Error::BadDimensions(format!(
                "need 1 <= R <= m <= {} (got R = {r}, m = {m})",
                ext.degree()
            )));
        }
        let generators: Vec<Elem> = (0..m).map(|i| ext.basis_element(i)).collect();
        let gen = Mat::from_fn(ext, m, r, |i, j| ext.frobenius(&generators[i], j));
        let code = GabidulinCode { ext: ext.clone(), base, m, r, generators, gen };
        debug_assert_eq!(code.generator_coordinates().rank(), m);
        Ok(code)
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn length(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn distance(&self) -> usize {
        self.m - self.r + 1
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// The `m × R` Moore matrix `G`.
    pub fn generator_matrix(&self) -> &Mat {
        &self.gen
    }

    /// Generators unfolded over the base, one per row.
    pub fn generator_coordinates(&self) -> Mat {
        let g = Mat::from_elems(&self.ext, self.m, 1, self.generators.clone());
        FoldSpec::new(&self.ext).unfold(&g).expect("generator column is over ext")
    }

    /// `G · X` over the extension field.
    pub fn encode_folded(&self, x: &Mat) -> Result<Mat> {
        if x.rows() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "message has {} rows, code dimension is {}",
                x.rows(),
                self.r
            )));
        }
        let x = x.embed_into(&self.ext)?;
        self.gen.mul(&x)
    }

    /// `unfold(G · X)`: an `m × cD` matrix over the base field.
    pub fn encode(&self, x: &Mat) -> Result<Mat> {
        FoldSpec::new(&self.ext).unfold(&self.encode_folded(x)?)
    }

    /// Generalized rank-metric decoding.
    ///
    /// Returns the unique `X` with `received = encode(X) + Z` where `Z`
    /// decomposes with the given known locations and values and
    /// `2τ − μ − δ ≤ d − 1`, or [`Error::DecodeFailure`] if there is none.
    pub fn decode(&self, received: &Mat, side: &SideInfo) -> Result<(Mat, DecodeDiagnostics)> {
        let dim = self.ext.degree();
        let received = received.embed_into(&self.base)?;
        if received.rows() != self.m || received.cols() % dim != 0 {
            return Err(Error::DimensionMismatch(format!(
                "received {:?}, expected {} rows and a multiple of {} columns",
                received.shape(),
                self.m,
                dim
            )));
        }
        let w = received.cols();
        let locations = side.locations.embed_into(&self.base)?;
        let values = side.values.embed_into(&self.base)?;
        if locations.rows() != self.m || values.cols() != w {
            return Err(Error::DimensionMismatch("side information shape".into()));
        }
        let (mu, delta) = (side.mu(), side.delta());
        let spec = FoldSpec::new(&self.ext);
        let folded = spec.fold(&received)?;
        let folded_values = spec.fold(&values)?;

        // Rows of `annihilator` span the left kernel of the known locations:
        // applying it removes every known-location term of the error and
        // leaves a shorter Gabidulin code at the points `annihilator · g`.
        let annihilator = locations.left_null_space();
        let g = Mat::from_elems(&self.ext, self.m, 1, self.generators.clone());
        let points = annihilator.mul(&g)?.col(0);

        let mut x = Mat::zeros(&self.ext, self.r, folded.cols());
        for j in 0..folded.cols() {
            let known = folded_values.col(j);
            let gamma = linearized::subspace_poly(&self.ext, &known);
            let k = self.r + gamma.len() - 1;
            let shifted: Vec<Elem> =
                folded.col(j).iter().map(|y| linearized::eval(&self.ext, &gamma, y)).collect();
            let shifted = Mat::from_elems(&self.ext, self.m, 1, shifted);
            let punctured = annihilator.mul(&shifted)?.col(0);
            let composite = welch_berlekamp(&self.ext, &points, &punctured, k)
                .ok_or_else(|| Error::DecodeFailure("interpolation found no codeword".into()))?;
            let msg = linearized::left_divide(&self.ext, &gamma, &composite)
                .filter(|f| f.len() <= self.r)
                .ok_or_else(|| Error::DecodeFailure("known error values do not divide".into()))?;
            for (i, c) in msg.into_iter().enumerate() {
                x.set(i, j, c);
            }
        }

        let error = received.sub(&self.encode(&x)?)?;
        let rest = residual_rank(&error, &locations, &values)?;
        if mu + delta + 2 * rest > self.distance() - 1 {
            return Err(Error::DecodeFailure(format!(
                "error exceeds the decoding radius (mu = {mu}, delta = {delta}, residual rank = {rest}, d = {})",
                self.distance()
            )));
        }
        let diag = DecodeDiagnostics { tau: mu + delta + rest, mu, delta, success: true };
        Ok((x, diag))
    }

    /// Exhaustive nearest-codeword search in the rank metric. Test oracle
    /// for tiny codes; refuses searches above `limit` candidates.
    pub fn brute_force_decode(&self, received: &Mat, limit: u128) -> Result<BruteForceOutcome> {
        let dim = self.ext.degree();
        let received = received.embed_into(&self.base)?;
        if received.rows() != self.m || received.cols() % dim != 0 {
            return Err(Error::DimensionMismatch("received word shape".into()));
        }
        let c = received.cols() / dim;
        let size = self.ext.size().ok_or(Error::SearchSpaceTooLarge(u128::MAX))?;
        let count = size
            .checked_pow((self.r * c) as u32)
            .ok_or(Error::SearchSpaceTooLarge(u128::MAX))?;
        if count > limit {
            return Err(Error::SearchSpaceTooLarge(count));
        }
        let mut best: Option<(usize, usize, Mat)> = None;
        for v in 0..count {
            let mut rest = v;
            let x = Mat::from_fn(&self.ext, self.r, c, |_, _| {
                let e = self.ext.from_int(rest % size).expect("digit in range");
                rest /= size;
                e
            });
            let dist = received.sub(&self.encode(&x)?)?.rank();
            match &mut best {
                Some((d, n, _)) if dist == *d => *n += 1,
                Some((d, _, _)) if dist > *d => {}
                _ => best = Some((dist, 1, x)),
            }
        }
        let (distance, n, message) = best.expect("at least one candidate");
        Ok(if n == 1 {
            BruteForceOutcome::Unique { message, distance }
        } else {
            BruteForceOutcome::Ambiguous { distance, count: n }
        })
    }
}

/// Rank of `Z` once the column space of `locations` and the row space of
/// `values` are quotiented out: the least `ε` such that
/// `Z = locations·A + B·values + (rank-ε term)`.
pub fn residual_rank(z: &Mat, locations: &Mat, values: &Mat) -> Result<usize> {
    let left = locations.left_null_space();
    let right = values.null_space();
    Ok(left.mul(z)?.mul(&right)?.rank())
}

/// Linearized Welch–Berlekamp interpolation.
///
/// Finds `V ≠ 0` of q-degree `≤ t` and `N` of q-degree `≤ s − t − 1` with
/// `V(y_i) = N(h_i)` for the `s` base-independent points `h_i`, where
/// `t = ⌊(s − k)/2⌋`, and returns `f` with `N = V ∘ f` if `f` has q-degree
/// below `k`. Whenever `y_i = f(h_i) + e_i` with `rank(e) ≤ t`, every
/// solution satisfies `N = V ∘ f`.
fn welch_berlekamp(ext: &Field, points: &[Elem], received: &[Elem], k: usize) -> Option<Vec<Elem>> {
    let s = points.len();
    if k > s {
        return None;
    }
    let t = (s - k) / 2;
    let n_len = s - t;
    let sys = Mat::from_fn(ext, s, t + 1 + n_len, |i, j| {
        if j <= t {
            ext.frobenius(&received[i], j)
        } else {
            ext.neg(&ext.frobenius(&points[i], j - t - 1))
        }
    });
    let kernel = sys.null_space();
    if kernel.cols() == 0 {
        return None;
    }
    let sol = kernel.col(0);
    let v = &sol[..=t];
    let n = &sol[t + 1..];
    if v.iter().all(Elem::is_zero) {
        return None;
    }
    let f = linearized::left_divide(ext, v, n)?;
    (f.len() <= k).then(|| {
        let mut f = f;
        f.resize(k, ext.zero());
        f
    })
}

/// Linearized polynomials `Σ c_k y^{[k]}` over an extension, where `y^{[k]}`
/// is the `k`-th power of the base-field Frobenius.
pub mod linearized {
    use crate::field::{Elem, Field};

    fn trimmed(a: &[Elem]) -> &[Elem] {
        let n = a.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        &a[..n]
    }

    pub fn eval(ext: &Field, coeffs: &[Elem], x: &Elem) -> Elem {
        let mut acc = ext.zero();
        let mut pow = x.clone();
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                pow = ext.frobenius(&pow, 1);
            }
            if !c.is_zero() {
                ext.add_assign(&mut acc, &ext.mul(c, &pow));
            }
        }
        acc
    }

    /// `a ∘ b`, i.e. `y ↦ a(b(y))`.
    pub fn compose(ext: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let (a, b) = (trimmed(a), trimmed(b));
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![ext.zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = ext.mul(ai, &ext.frobenius(bj, i));
                ext.add_assign(&mut out[i + j], &t);
            }
        }
        trimmed(&out).to_vec()
    }

    /// `f` with `v ∘ f = n`, if it exists.
    pub fn left_divide(ext: &Field, v: &[Elem], n: &[Elem]) -> Option<Vec<Elem>> {
        let (v, n) = (trimmed(v), trimmed(n));
        if v.is_empty() {
            return None;
        }
        if n.is_empty() {
            return Some(Vec::new());
        }
        let dv = v.len() - 1;
        if n.len() - 1 < dv {
            return None;
        }
        let df = n.len() - 1 - dv;
        let lead_inv = ext.inv(&v[dv]).expect("trimmed leading coefficient");
        let mut f = vec![ext.zero(); df + 1];
        for j in (0..=df).rev() {
            let k = j + dv;
            let mut rhs = n[k].clone();
            for (i, vi) in v.iter().enumerate().take(dv) {
                if k - i <= df && !vi.is_zero() {
                    ext.sub_assign(&mut rhs, &ext.mul(vi, &ext.frobenius(&f[k - i], i)));
                }
            }
            f[j] = ext.frobenius_inv(&ext.mul(&rhs, &lead_inv), dv);
        }
        (compose(ext, v, &f) == n).then_some(f)
    }

    /// The monic linearized polynomial whose roots are exactly the base-field
    /// span of `elems`.
    pub fn subspace_poly(ext: &Field, elems: &[Elem]) -> Vec<Elem> {
        let mut gamma = vec![ext.one()];
        for w in elems {
            let u = eval(ext, &gamma, w);
            if u.is_zero() {
                continue;
            }
            // (y^{[1]} − u^{|B|−1} y) ∘ Γ vanishes on span ∪ {w}
            let c = ext.div(&ext.frobenius(&u, 1), &u).expect("u is nonzero");
            let mut next = vec![ext.zero(); gamma.len() + 1];
            for (k, gk) in gamma.iter().enumerate() {
                ext.add_assign(&mut next[k + 1], &ext.frobenius(gk, 1));
                ext.sub_assign(&mut next[k], &ext.mul(&c, gk));
            }
            gamma = next;
        }
        gamma
    }
}
