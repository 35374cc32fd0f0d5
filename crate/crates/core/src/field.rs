//! Prime fields and their (iterated) polynomial extensions.
//!
//! A [`Field`] is either `F_p` or `B[x]/(f)` for a monic irreducible `f` of
//! some degree over another [`Field`] `B`. Towers such as
//! `F_p ⊂ F_{p^n} ⊂ F_{p^{nN}}` are built by extending twice.
//!
//! Elements ([`Elem`]) are stored as flat vectors of `F_p` coordinates. For an
//! extension of degree `D` over a base whose own flat width is `w`, the vector
//! has length `D·w` and holds the coefficients `c_0, c_1, …, c_{D−1}` (of
//! `1, α, …, α^{D−1}`) one after another, each in the base's flat layout.
//! Consequences used throughout the crate:
//!
//! * embedding a subfield element is zero padding,
//! * addition is coordinate-wise modulo `p` at every level,
//! * the integer encoding `Σ coord_i · p^i` is the positional base-|B|
//!   encoding at every level (`2 ≡ x`, `3 ≡ x + 1` in `F_4`).

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of some [`Field`], as flat `F_p` coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Elem(Vec<u64>);

impl Elem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// A finite field handle. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u64,
    base: Option<Field>,
    /// Monic modulus over `base`, `degree + 1` coefficients low to high.
    modulus: Vec<Elem>,
    degree: usize,
    abs_degree: usize,
    /// Row `k` is the image of the `k`-th coordinate vector under `x ↦ x^p`.
    frob_p: Vec<Vec<u64>>,
    /// Same for `x ↦ x^{|base|}`.
    frob_base: Vec<Vec<u64>>,
}

/// JSON form of a field: the prime and the modulus of every extension level,
/// each coefficient integer-encoded in the level below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    #[serde(default)]
    pub moduli: Vec<Vec<u128>>,
}

/// Monic polynomial over a field, coefficients low to high.
pub type Poly = Vec<Elem>;

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + p as u128) - b as u128) as u64
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field {
    /// `F_p`. Fails with [`Error::NotPrime`] for composite `p`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(Inner {
            p,
            base: None,
            modulus: Vec::new(),
            degree: 1,
            abs_degree: 1,
            frob_p: vec![vec![1]],
            frob_base: vec![vec![1]],
        })))
    }

    /// Extension of `base` by the lexicographically smallest monic irreducible
    /// polynomial of the given degree.
    pub fn extend(base: &Field, degree: usize) -> Field {
        assert!(degree >= 1, "extension degree must be at least 1");
        let modulus = find_irreducible(base, degree);
        Self::with_modulus(base, modulus)
    }

    /// Extension of `base` by a caller-chosen modulus, which must be monic and
    /// irreducible.
    pub fn extend_with(base: &Field, modulus: Poly) -> Result<Field> {
        if modulus.len() < 2 || modulus.last() != Some(&base.one()) {
            return Err(Error::Config("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|c| c.0.len() != base.abs_degree()) {
            return Err(Error::Config("modulus coefficient has the wrong width".into()));
        }
        if !is_irreducible(base, &modulus) {
            return Err(Error::Config("modulus is reducible".into()));
        }
        Ok(Self::with_modulus(base, modulus))
    }

    fn with_modulus(base: &Field, modulus: Poly) -> Field {
        let degree = modulus.len() - 1;
        let abs_degree = degree * base.abs_degree();
        let draft = Field(Arc::new(Inner {
            p: base.p(),
            base: Some(base.clone()),
            modulus: modulus.clone(),
            degree,
            abs_degree,
            frob_p: Vec::new(),
            frob_base: Vec::new(),
        }));
        let p = base.p();
        let frob_p: Vec<Vec<u64>> = (0..abs_degree)
            .map(|k| {
                let mut e = vec![0; abs_degree];
                e[k] = 1;
                draft.pow(&Elem(e), p as u128).0
            })
            .collect();
        let frob_base: Vec<Vec<u64>> = (0..abs_degree)
            .map(|k| {
                let mut e = vec![0; abs_degree];
                e[k] = 1;
                for _ in 0..base.abs_degree() {
                    e = apply_linear(&frob_p, &e, p);
                }
                e
            })
            .collect();
        Field(Arc::new(Inner {
            p,
            base: Some(base.clone()),
            modulus,
            degree,
            abs_degree,
            frob_p,
            frob_base,
        }))
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field> {
        let mut field = Field::prime(desc.p)?;
        for level in &desc.moduli {
            let modulus = level
                .iter()
                .map(|&v| field.from_int(v))
                .collect::<Result<Vec<_>>>()?;
            field = Field::extend_with(&field, modulus)?;
        }
        Ok(field)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        let mut moduli = Vec::new();
        let mut cur = self.clone();
        while let Some(base) = cur.base().cloned() {
            let level = cur
                .modulus()
                .iter()
                .map(|c| base.to_int(c).expect("modulus coefficient fits in u128"))
                .collect();
            moduli.push(level);
            cur = base;
        }
        moduli.reverse();
        FieldDescriptor { p: self.p(), moduli }
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over `F_p`; also the length of every element's coordinate vector.
    pub fn abs_degree(&self) -> usize {
        self.0.abs_degree
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.0.modulus
    }

    /// `|F|`, or `None` if it does not fit in a `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.p() as u128).checked_pow(self.abs_degree() as u32)
    }

    /// Size of the immediate base field.
    pub fn base_size(&self) -> Option<u128> {
        match self.base() {
            Some(b) => b.size(),
            None => Some(self.p() as u128),
        }
    }

    /// Whether `sub` is this field or one of the fields below it in its tower.
    pub fn contains_subfield(&self, sub: &Field) -> bool {
        let mut cur = Some(self);
        while let Some(f) = cur {
            if f == sub {
                return true;
            }
            cur = f.base();
        }
        false
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.abs_degree()])
    }

    pub fn one(&self) -> Elem {
        let mut v = vec![0; self.abs_degree()];
        v[0] = 1 % self.p();
        Elem(v)
    }

    /// `α^i` for `i < degree`, the `i`-th polynomial-basis element.
    pub fn basis_element(&self, i: usize) -> Elem {
        assert!(i < self.degree());
        let w = self.abs_degree() / self.degree();
        let mut v = vec![0; self.abs_degree()];
        v[i * w] = 1 % self.p();
        Elem(v)
    }

    /// Reduces an arbitrary integer modulo `p` into the prime subfield.
    pub fn from_u64(&self, v: u64) -> Elem {
        let mut c = vec![0; self.abs_degree()];
        c[0] = v % self.p();
        Elem(c)
    }

    /// Decodes the positional integer encoding.
    pub fn from_int(&self, v: u128) -> Result<Elem> {
        if let Some(size) = self.size() {
            if v >= size {
                return Err(Error::BadEncoding(v));
            }
        }
        let p = self.p() as u128;
        let mut rest = v;
        let coords = (0..self.abs_degree())
            .map(|_| {
                let d = (rest % p) as u64;
                rest /= p;
                d
            })
            .collect();
        Ok(Elem(coords))
    }

    /// Positional integer encoding; `None` if it does not fit in a `u128`.
    pub fn to_int(&self, a: &Elem) -> Option<u128> {
        let p = self.p() as u128;
        let mut acc: u128 = 0;
        for &c in a.0.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    /// Builds an element from its coefficients over the immediate base.
    pub fn from_coeffs(&self, coeffs: &[Elem]) -> Elem {
        assert_eq!(coeffs.len(), self.degree());
        Elem(coeffs.iter().flat_map(|c| c.0.iter().copied()).collect())
    }

    /// Coefficients over the immediate base (for a prime field, the element itself).
    pub fn coeffs(&self, a: &Elem) -> Vec<Elem> {
        let w = self.abs_degree() / self.degree();
        a.0.chunks(w).map(|c| Elem(c.to_vec())).collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        let p = self.p();
        Elem((0..self.abs_degree()).map(|_| rng.gen_range(0..p)).collect())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// Every element, in integer-encoding order. Only for small fields.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let size = self.size().expect("field too large to enumerate");
        (0..size).map(move |v| self.from_int(v).expect("in range"))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p();
        Elem(a.0.iter().zip(&b.0).map(|(&x, &y)| add_mod(x, y, p)).collect())
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p();
        Elem(a.0.iter().zip(&b.0).map(|(&x, &y)| sub_mod(x, y, p)).collect())
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let p = self.p();
        Elem(a.0.iter().map(|&x| sub_mod(0, x, p)).collect())
    }

    pub fn add_assign(&self, a: &mut Elem, b: &Elem) {
        add_slice(&mut a.0, &b.0, self.p());
    }

    pub fn sub_assign(&self, a: &mut Elem, b: &Elem) {
        sub_slice(&mut a.0, &b.0, self.p());
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.mul_raw(&a.0, &b.0))
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p();
        let base = match self.base() {
            None => return vec![mul_mod(a[0], b[0], p)],
            Some(base) => base,
        };
        let w = base.abs_degree();
        let d = self.degree();
        let mut prod = vec![0u64; (2 * d - 1) * w];
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * w..(j + 1) * w];
                if bj.iter().all(|&c| c == 0) {
                    continue;
                }
                let t = base.mul_raw(ai, bj);
                add_slice(&mut prod[(i + j) * w..(i + j + 1) * w], &t, p);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let ck = prod[k * w..(k + 1) * w].to_vec();
            if ck.iter().all(|&c| c == 0) {
                continue;
            }
            for (i, m) in self.modulus()[..d].iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let t = base.mul_raw(&ck, &m.0);
                sub_slice(&mut prod[(k - d + i) * w..(k - d + i + 1) * w], &t, p);
            }
        }
        prod.truncate(d * w);
        prod
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut acc = self.one();
        let mut sq = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Multiplicative inverse; extended Euclid over the base for extensions.
    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivideByZero);
        }
        let base = match self.base() {
            None => {
                let p = self.p();
                return Ok(Elem(vec![pow_mod(a.0[0], p - 2, p)]));
            }
            Some(b) => b,
        };
        let mut r0: Poly = self.modulus().to_vec();
        let mut r1: Poly = self.coeffs(a);
        poly::trim(base, &mut r1);
        let mut s0: Poly = Vec::new();
        let mut s1: Poly = vec![base.one()];
        while !r1.is_empty() {
            let (q, r) = poly::divrem(base, &r0, &r1);
            let qs1 = poly::mul(base, &q, &s1);
            let s2 = poly::sub(base, &s0, &qs1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c_inv = base.inv(&r0[0])?;
        let mut coeffs: Vec<Elem> = s0.iter().map(|c| base.mul(c, &c_inv)).collect();
        coeffs.resize(self.degree(), base.zero());
        Ok(self.from_coeffs(&coeffs))
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `a^{|B|^i}` where `B` is the immediate base; the identity on a prime field.
    pub fn frobenius(&self, a: &Elem, i: usize) -> Elem {
        if self.is_prime_field() {
            return a.clone();
        }
        let mut v = a.0.clone();
        for _ in 0..i % self.degree() {
            v = apply_linear(&self.0.frob_base, &v, self.p());
        }
        Elem(v)
    }

    /// Inverse of [`Field::frobenius`].
    pub fn frobenius_inv(&self, a: &Elem, i: usize) -> Elem {
        let d = self.degree();
        self.frobenius(a, (d - i % d) % d)
    }

    /// `a^p`.
    pub fn frobenius_p(&self, a: &Elem) -> Elem {
        Elem(apply_linear(&self.0.frob_p, &a.0, self.p()))
    }

    /// Places an element of the immediate base as the constant coefficient.
    pub fn embed(&self, a: &Elem) -> Elem {
        let mut v = a.0.clone();
        v.resize(self.abs_degree(), 0);
        Elem(v)
    }

    /// Embeds an element of any subfield of this field's tower.
    pub fn embed_from(&self, sub: &Field, a: &Elem) -> Result<Elem> {
        if !self.contains_subfield(sub) {
            return Err(Error::IncompatibleFields);
        }
        let mut v = a.0.clone();
        v.resize(self.abs_degree(), 0);
        Ok(Elem(v))
    }

    /// Inverse of [`Field::embed`].
    pub fn project(&self, a: &Elem) -> Result<Elem> {
        let w = self.base().map_or(1, Field::abs_degree);
        self.project_to_width(a, w)
    }

    /// Projects onto a subfield of the tower.
    pub fn project_to(&self, sub: &Field, a: &Elem) -> Result<Elem> {
        if !self.contains_subfield(sub) {
            return Err(Error::IncompatibleFields);
        }
        self.project_to_width(a, sub.abs_degree())
    }

    fn project_to_width(&self, a: &Elem, w: usize) -> Result<Elem> {
        if a.0[w..].iter().any(|&c| c != 0) {
            return Err(Error::NotInSubfield);
        }
        Ok(Elem(a.0[..w].to_vec()))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.degree == other.0.degree
                && self.0.abs_degree == other.0.abs_degree
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base() {
            None => write!(f, "GF({})", self.p()),
            Some(base) => write!(f, "GF({}^{}) over {:?}", self.p(), self.abs_degree(), base),
        }
    }
}

fn add_slice(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = add_mod(*d, s, p);
    }
}

fn sub_slice(dst: &mut [u64], src: &[u64], p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = sub_mod(*d, s, p);
    }
}

fn apply_linear(rows: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; v.len()];
    for (k, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(&rows[k]) {
            *o = add_mod(*o, mul_mod(c, r, p), p);
        }
    }
    out
}

/// The lexicographically smallest monic irreducible polynomial of `degree`
/// over `field`: candidates `x^degree + g(x)` are tried in increasing order
/// of the integer encoding of `g`'s coefficient vector, which compares the
/// coefficients from high to low.
pub fn find_irreducible(field: &Field, degree: usize) -> Poly {
    assert!(degree >= 1);
    let base = field.size().unwrap_or(u128::MAX);
    for v in 0u128.. {
        let mut rest = v;
        let mut poly: Poly = (0..degree)
            .map(|_| {
                let digit = rest % base;
                rest /= base;
                field.from_int(digit).expect("digit below field size")
            })
            .collect();
        if rest != 0 {
            break;
        }
        poly.push(field.one());
        if is_irreducible(field, &poly) {
            return poly;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Ben-Or's test: a monic `f` of degree `d` is irreducible iff
/// `gcd(x^{|F|^i} − x, f) = 1` for every `1 ≤ i ≤ d/2`.
pub fn is_irreducible(field: &Field, f: &[Elem]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x: Poly = vec![field.zero(), field.one()];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        // h ← h^{|F|}, as abs_degree successive p-th powers
        for _ in 0..field.abs_degree() {
            h = poly::powmod(field, &h, field.p() as u128, f);
        }
        let diff = poly::sub(field, &h, &x);
        let g = poly::gcd(field, f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Dense univariate polynomials over a [`Field`], coefficients low to high;
/// the zero polynomial is the empty vector.
pub mod poly {
    use super::{Elem, Field, Poly};

    pub fn trim(field: &Field, a: &mut Poly) {
        let _ = field;
        while a.last().is_some_and(Elem::is_zero) {
            a.pop();
        }
    }

    pub fn sub(field: &Field, a: &[Elem], b: &[Elem]) -> Poly {
        let n = a.len().max(b.len());
        let zero = field.zero();
        let mut out: Poly = (0..n)
            .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        trim(field, &mut out);
        out
    }

    pub fn mul(field: &Field, a: &[Elem], b: &[Elem]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = field.mul(x, y);
                field.add_assign(&mut out[i + j], &t);
            }
        }
        trim(field, &mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(field: &Field, a: &[Elem], b: &[Elem]) -> (Poly, Poly) {
        let mut b = b.to_vec();
        trim(field, &mut b);
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = a.to_vec();
        trim(field, &mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead_inv = field.inv(b.last().unwrap()).expect("nonzero leading coefficient");
        let mut q = vec![field.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = field.mul(r.last().unwrap(), &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                let t = field.mul(&c, bi);
                field.sub_assign(&mut r[shift + i], &t);
            }
            q[shift] = c;
            r.pop();
            trim(field, &mut r);
        }
        trim(field, &mut q);
        (q, r)
    }

    pub fn rem(field: &Field, a: &[Elem], m: &[Elem]) -> Poly {
        divrem(field, a, m).1
    }

    pub fn powmod(field: &Field, a: &[Elem], mut e: u128, m: &[Elem]) -> Poly {
        let mut acc: Poly = vec![field.one()];
        let mut sq = rem(field, a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(field, &mul(field, &acc, &sq), m);
            }
            e >>= 1;
            if e > 0 {
                sq = rem(field, &mul(field, &sq, &sq), m);
            }
        }
        acc
    }

    pub fn gcd(field: &Field, a: &[Elem], b: &[Elem]) -> Poly {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(field, &mut x);
        trim(field, &mut y);
        while !y.is_empty() {
            let r = rem(field, &x, &y);
            x = std::mem::replace(&mut y, r);
        }
        x
    }
}

/// The three nested fields `F_p ⊂ F_q ⊂ F_Q` with `q = p^n`, `Q = q^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTower {
    pub fp: Field,
    pub fq: Field,
    pub fqq: Field,
}

impl FieldTower {
    pub fn new(p: u64, n: usize, big_n: usize) -> Result<FieldTower> {
        let fp = Field::prime(p)?;
        let fq = Field::extend(&fp, n);
        let fqq = Field::extend(&fq, big_n);
        Ok(FieldTower { fp, fq, fqq })
    }
}
