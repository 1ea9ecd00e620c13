//! Sparse multivariate power series truncated at a total degree.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

pub type ExponentVector = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// `e - f` when `f <= e` componentwise.
pub fn exponent_sub(e: &[u32], f: &[u32]) -> Option<ExponentVector> {
    e.iter().zip(f).map(|(a, b)| a.checked_sub(*b)).collect()
}

pub fn exponent_add(e: &[u32], f: &[u32]) -> ExponentVector {
    e.iter().zip(f).map(|(a, b)| a + b).collect()
}

/// All exponent vectors of total degree exactly `k`, lexicographically descending.
pub fn exponents_of_degree(n: usize, k: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(n, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of total degree `<= bound`, ordered by degree.
pub fn exponents_upto(n: usize, bound: u32) -> Vec<ExponentVector> {
    (0..=bound).flat_map(|k| exponents_of_degree(n, k)).collect()
}

/// Exponent of `z^{[i;j]} = z_i z_{i+1} ... z_j` with indices read mod `n`.
pub fn window_monomial(n: usize, i: usize, j: usize) -> Result<ExponentVector> {
    if n == 0 || i == 0 || i > n {
        return Err(Error::Index(format!("window start {i} outside 1..={n}")));
    }
    if j < i {
        return Err(Error::Index(format!("empty window [{i};{j}]")));
    }
    Ok(window_exponent(n, i, j - i + 1))
}

/// Exponent of the window starting at `i` of length `len` (no range checks).
pub(crate) fn window_exponent(n: usize, i: usize, len: usize) -> ExponentVector {
    let mut v = vec![0u32; n];
    for k in i..i + len {
        v[(k - 1) % n] += 1;
    }
    v
}

/// Truncated power series in `n` variables: every stored exponent has total degree `<= bound`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    bound: u32,
    terms: BTreeMap<ExponentVector, ExactScalar>,
}

impl TruncatedSeries {
    pub fn zero(n: usize, bound: u32) -> Self {
        Self { n, bound, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, bound: u32, c: ExactScalar) -> Self {
        let mut s = Self::zero(n, bound);
        s.add_term(vec![0; n], c);
        s
    }

    pub fn one(n: usize, bound: u32) -> Self {
        Self::constant(n, bound, ExactScalar::one())
    }

    /// `c * z^e`, or zero when `|e|` exceeds the bound.
    pub fn monomial(n: usize, bound: u32, e: ExponentVector, c: ExactScalar) -> Self {
        assert_eq!(e.len(), n, "exponent length");
        let mut s = Self::zero(n, bound);
        s.add_term(e, c);
        s
    }

    pub fn from_terms<I>(n: usize, bound: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, ExactScalar)>,
    {
        let mut s = Self::zero(n, bound);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::Dimension(format!("exponent {e:?} in a series of {n} variables")));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, ExactScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> ExactScalar {
        self.terms.get(e).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff(&vec![0; self.n])
    }

    /// Adds `c * z^e` in place, dropping it when out of range and deleting zeros.
    pub fn add_term(&mut self, e: ExponentVector, c: ExactScalar) {
        if c.is_zero() || total_degree(&e) > self.bound {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Same series seen with a smaller (or equal) bound.
    pub fn truncate(&self, bound: u32) -> Self {
        let bound = bound.min(self.bound);
        Self {
            n: self.n,
            bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reinterprets the stored terms under a different bound (terms beyond it are dropped).
    pub fn with_bound(&self, bound: u32) -> Self {
        let mut s = Self::zero(self.n, bound);
        for (e, c) in &self.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self {
            n: self.n,
            bound: self.bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.bound);
        }
        Self { n: self.n, bound: self.bound, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn map_coefficients<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&[u32], &ExactScalar) -> ExactScalar,
    {
        let mut s = Self::zero(self.n, self.bound);
        for (e, c) in &self.terms {
            let v = f(e, c);
            s.add_term(e.clone(), v);
        }
        s
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.bound != other.bound {
            return Err(Error::Dimension(format!(
                "series of shape (n={}, D={}) and (n={}, D={})",
                self.n, self.bound, other.n, other.bound
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(e.clone(), -c);
        }
        Ok(s)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = Self::zero(self.n, self.bound);
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > self.bound {
                    continue;
                }
                s.add_term(exponent_add(ea, eb), ca * cb);
            }
        }
        Ok(s)
    }

    /// Multiplicative inverse up to the bound.
    pub fn inv(&self) -> Result<Self> {
        let a0 = self.constant_term();
        let a0_inv = a0.inv().ok_or(Error::NotAUnit)?;
        let mut out: BTreeMap<ExponentVector, ExactScalar> = BTreeMap::new();
        for e in exponents_upto(self.n, self.bound) {
            let v = if total_degree(&e) == 0 {
                a0_inv.clone()
            } else {
                let mut acc = ExactScalar::zero();
                for (f, af) in &self.terms {
                    if total_degree(f) == 0 {
                        continue;
                    }
                    if let Some(rest) = exponent_sub(&e, f) {
                        if let Some(b) = out.get(&rest) {
                            acc += af * b;
                        }
                    }
                }
                -(acc * &a0_inv)
            };
            if !v.is_zero() {
                out.insert(e, v);
            }
        }
        Ok(Self { n: self.n, bound: self.bound, terms: out })
    }

    /// `self^alpha` for a series with constant term 1.
    ///
    /// Uses `a * E(f) = alpha * f * E(a)` where `E` multiplies `z^e` by `|e|`.
    pub fn pow_rational(&self, alpha: &ExactScalar) -> Result<Self> {
        let a0 = self.constant_term();
        if !a0.is_one() {
            return Err(Error::Normalization(a0.to_string()));
        }
        let mut out: BTreeMap<ExponentVector, ExactScalar> = BTreeMap::new();
        for e in exponents_upto(self.n, self.bound) {
            let k = total_degree(&e);
            if k == 0 {
                out.insert(e, ExactScalar::one());
                continue;
            }
            let mut acc = ExactScalar::zero();
            for (g, ag) in &self.terms {
                let dg = total_degree(g);
                if dg == 0 {
                    continue;
                }
                if let Some(rest) = exponent_sub(&e, g) {
                    if let Some(fr) = out.get(&rest) {
                        let w = alpha * ExactScalar::from(dg as i64) - ExactScalar::from((k - dg) as i64);
                        acc += ag * fr * w;
                    }
                }
            }
            let v = acc / ExactScalar::from(k as i64);
            if !v.is_zero() {
                out.insert(e, v);
            }
        }
        Ok(Self { n: self.n, bound: self.bound, terms: out })
    }

    /// Integer power by repeated multiplication (negative powers invert first).
    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.n, self.bound);
        for _ in 0..k.unsigned_abs() {
            acc = acc.try_mul(&base)?;
        }
        Ok(acc)
    }

    /// Serializable records, sorted lexicographically by exponent.
    pub fn records(&self) -> Vec<SeriesRecord> {
        self.terms.iter().map(|(e, c)| SeriesRecord { exponents: e.clone(), value: c.clone() }).collect()
    }

    pub fn from_records(n: usize, bound: u32, records: &[SeriesRecord]) -> Result<Self> {
        Self::from_terms(n, bound, records.iter().map(|r| (r.exponents.clone(), r.value.clone())))
    }

    /// Exponents where `self` and `other` differ, with both coefficients.
    pub fn diff(&self, other: &Self) -> Vec<(ExponentVector, ExactScalar, ExactScalar)> {
        let mut keys: Vec<&ExponentVector> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|e| {
                let a = self.coeff(e);
                let b = other.coeff(e);
                (a != b).then(|| (e.clone(), a, b))
            })
            .collect()
    }
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.try_mul(b)
}

pub fn series_inv(a: &TruncatedSeries) -> Result<TruncatedSeries> {
    a.inv()
}

pub fn series_pow_rational(a: &TruncatedSeries, alpha: &ExactScalar) -> Result<TruncatedSeries> {
    a.pow_rational(alpha)
}

impl std::ops::Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_add(rhs).expect("series shapes differ")
    }
}

impl std::ops::Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_sub(rhs).expect("series shapes differ")
    }
}

impl std::ops::Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_mul(rhs).expect("series shapes differ")
    }
}

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&ExactScalar::int(-1))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&ExponentVector> = self.terms.keys().collect();
        keys.sort_by(|a, b| total_degree(a).cmp(&total_degree(b)).then(b.cmp(a)));
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| if *p == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, p) })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}, D={}] {}", self.n, self.bound, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub exponents: ExponentVector,
    pub value: ExactScalar,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.records().serialize(serializer)
    }
}

/// `(prod z_k^{offset_k}) * body` with rational offsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffsetSeries {
    pub offset: Vec<ExactScalar>,
    pub body: TruncatedSeries,
}

impl OffsetSeries {
    pub fn new(offset: Vec<ExactScalar>, body: TruncatedSeries) -> Result<Self> {
        if offset.len() != body.n() {
            return Err(Error::Dimension(format!(
                "offset of length {} for a series in {} variables",
                offset.len(),
                body.n()
            )));
        }
        Ok(Self { offset, body })
    }

    pub fn n(&self) -> usize {
        self.body.n()
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self { offset: self.offset.clone(), body: self.body.scale(c) }
    }

    fn check_offset(&self, other: &Self) -> Result<()> {
        if self.offset != other.offset {
            return Err(Error::Dimension("offset series with different offsets".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_offset(other)?;
        Ok(Self { offset: self.offset.clone(), body: self.body.try_add(&other.body)? })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_offset(other)?;
        Ok(Self { offset: self.offset.clone(), body: self.body.try_sub(&other.body)? })
    }

    /// Multiplies the body by an ordinary power series; the offset is unchanged.
    pub fn mul_series(&self, s: &TruncatedSeries) -> Result<Self> {
        Ok(Self { offset: self.offset.clone(), body: self.body.try_mul(s)? })
    }

    /// Applies `z_k d/dz_k`: the monomial `z^{offset+e}` gets the factor `offset_k + e_k`.
    pub fn euler(&self, k: usize) -> Self {
        let off = self.offset[k].clone();
        Self {
            offset: self.offset.clone(),
            body: self.body.map_coefficients(|e, c| c * (&off + ExactScalar::from(e[k] as i64))),
        }
    }
}

/// Weyl determinant `prod_{i=1..n} prod_{j>=i} (1 - z^{[i;j]})` truncated at `bound`.
pub fn weyl_delta(n: usize, bound: u32) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(n, bound);
    for i in 1..=n {
        for len in 1..=bound as usize {
            let mut factor = TruncatedSeries::one(n, bound);
            factor.add_term(window_exponent(n, i, len), ExactScalar::int(-1));
            acc = &acc * &factor;
        }
    }
    acc
}
