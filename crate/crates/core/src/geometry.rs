//! Torus fixed points of affine Laumon spaces, their characters, and localization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::conventions::LocalizationConventions;
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::series::{exponents_upto, total_degree, ExponentVector, TruncatedSeries};

/// Equivariant parameters in units of the first torus weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivParams {
    pub n: usize,
    pub xi: Vec<ExactScalar>,
    pub eta: ExactScalar,
    pub m: ExactScalar,
}

impl EquivParams {
    pub fn new(xi: Vec<ExactScalar>, eta: ExactScalar, m: ExactScalar) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::Dimension("rank must be at least 1".into()));
        }
        Ok(Self { n: xi.len(), xi, eta, m })
    }

    pub fn with_m(&self, m: ExactScalar) -> Self {
        Self { m, ..self.clone() }
    }

    pub fn with_eta(&self, eta: ExactScalar) -> Self {
        Self { eta, ..self.clone() }
    }
}

/// Column `l` (1-based) lists `d_{l,l} >= d_{l+1,l} >= ...`; all other entries follow from
/// `d_{r+n,l+n} = d_{r,l}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "FixedPointRepr")]
pub struct FixedPoint {
    #[serde(skip)]
    n: usize,
    columns: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct FixedPointRepr {
    columns: Vec<Vec<u32>>,
}

impl TryFrom<FixedPointRepr> for FixedPoint {
    type Error = Error;

    fn try_from(r: FixedPointRepr) -> Result<Self> {
        FixedPoint::new(r.columns)
    }
}

impl FixedPoint {
    pub fn new(columns: Vec<Vec<u32>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Dimension("fixed point needs at least one column".into()));
        }
        let mut columns = columns;
        for col in &mut columns {
            if col.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Index(format!("column {col:?} is not weakly decreasing")));
            }
            while col.last() == Some(&0) {
                col.pop();
            }
        }
        Ok(Self { n: columns.len(), columns })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, columns: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    /// `d_{r,l}` for arbitrary integers, via periodic extension.
    pub fn entry(&self, r: i64, l: i64) -> u32 {
        let n = self.n as i64;
        let l0 = (l - 1).rem_euclid(n) + 1;
        let offset = r - l;
        if offset < 0 {
            return 0;
        }
        self.columns[(l0 - 1) as usize].get(offset as usize).copied().unwrap_or(0)
    }

    fn depth(&self) -> i64 {
        self.columns.iter().map(Vec::len).max().unwrap_or(0) as i64
    }

    /// Columns `l <= k` with `d_{k,l} > 0`.
    fn support_in_row(&self, k: i64) -> Vec<i64> {
        (0..self.depth()).map(|o| k - o).filter(|&l| self.entry(k, l) > 0).collect()
    }

    pub fn size(&self) -> u32 {
        self.columns.iter().flatten().sum()
    }
}

/// Entry `d_{r,l}` contributes to component `r mod n`.
pub fn fixed_point_degree(fp: &FixedPoint) -> ExponentVector {
    let n = fp.n;
    let mut d = vec![0u32; n];
    for (l0, col) in fp.columns.iter().enumerate() {
        for (o, v) in col.iter().enumerate() {
            d[(l0 + o) % n] += v;
        }
    }
    d
}

/// All fixed points of degree `d`.
pub fn enumerate_fixed_points(n: usize, d: &[u32]) -> Vec<FixedPoint> {
    assert_eq!(d.len(), n, "degree vector length");
    fn column(
        n: usize,
        l0: usize,
        cap: u32,
        rem: &mut Vec<u32>,
        col: &mut Vec<u32>,
        columns: &mut Vec<Vec<u32>>,
        out: &mut Vec<FixedPoint>,
    ) {
        next_column(n, l0 + 1, rem, columns, col, out);
        let slot = (l0 + col.len()) % n;
        let top = cap.min(rem[slot]);
        for v in 1..=top {
            rem[slot] -= v;
            col.push(v);
            column(n, l0, v, rem, col, columns, out);
            col.pop();
            rem[slot] += v;
        }
    }
    fn next_column(
        n: usize,
        l0_next: usize,
        rem: &mut Vec<u32>,
        columns: &mut Vec<Vec<u32>>,
        col: &[u32],
        out: &mut Vec<FixedPoint>,
    ) {
        columns.push(col.to_vec());
        if l0_next == n {
            if rem.iter().all(|&x| x == 0) {
                out.push(FixedPoint { n, columns: columns.clone() });
            }
        } else {
            let cap = rem.iter().sum();
            column(n, l0_next, cap, rem, &mut Vec::new(), columns, out);
        }
        columns.pop();
    }
    let mut rem = d.to_vec();
    let mut out = Vec::new();
    let cap = rem.iter().sum();
    column(n, 0, cap, &mut rem, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Monomial `t^u q^a q'^b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharMonomial {
    pub t: Vec<i64>,
    pub q: i64,
    pub qp: i64,
}

/// Integer Laurent polynomial in `t_1..t_n, q, q'`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterPolynomial {
    terms: BTreeMap<CharMonomial, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharRecord {
    pub t: Vec<i64>,
    pub q: i64,
    pub qp: i64,
    pub c: i64,
}

impl CharacterPolynomial {
    pub fn add(&mut self, m: CharMonomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<CharMonomial, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn records(&self) -> Vec<CharRecord> {
        self.terms.iter().map(|(m, c)| CharRecord { t: m.t.clone(), q: m.q, qp: m.qp, c: *c }).collect()
    }
}

impl Serialize for CharacterPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.records().serialize(s)
    }
}

/// `t_num / t_den` reduced to framing characters in `1..n` times a power of `q'`.
fn t_ratio(n: usize, num: i64, den: i64, sign: i8) -> (Vec<i64>, i64) {
    let n_i = n as i64;
    let mut t = vec![0i64; n];
    let mut qp = 0i64;
    for (l, s) in [(num, 1i64), (den, -1i64)] {
        let l0 = (l - 1).rem_euclid(n_i) + 1;
        t[(l0 - 1) as usize] += s;
        qp += s * (sign as i64) * (l - l0) / n_i;
    }
    (t, qp)
}

/// The RHom character between two fixed points; `a` supplies the unprimed entries and `b`
/// the primed ones. Geometric-series quotients are expanded into finite sums.
pub fn rhom_character(n: usize, a: &FixedPoint, b: &FixedPoint) -> CharacterPolynomial {
    rhom_character_with(n, a, b, 1)
}

pub fn rhom_character_with(n: usize, a: &FixedPoint, b: &FixedPoint, sign: i8) -> CharacterPolynomial {
    assert_eq!(a.n, n);
    assert_eq!(b.n, n);
    let mut ch = CharacterPolynomial::default();
    let mono = |num: i64, den: i64, q: i64| {
        let (t, qp) = t_ratio(n, num, den, sign);
        CharMonomial { t, q, qp }
    };
    for k in 1..=n as i64 {
        let b_row = b.support_in_row(k);
        let a_prev = a.support_in_row(k - 1);
        let a_row = a.support_in_row(k);
        // -(t_l/t_k) (q^{-d'_{kl}} - 1)/(q^{-1} - 1)
        for &l in &b_row {
            let dp = b.entry(k, l) as i64;
            for s in 0..dp {
                ch.add(mono(l, k, -s), -1);
            }
        }
        // -(t_k/t_l') (q^{d_{k-1,l'}+1} - q)/(q - 1)
        for &lp in &a_prev {
            let d = a.entry(k - 1, lp) as i64;
            for s in 1..=d {
                ch.add(mono(k, lp, s), -1);
            }
        }
        // mixed terms: -(t_l/t_l') [q + .. + q^{d_{k-1,l'}}] (q^{-d'_{kl}} - 1), then the same
        // with d_{k,l'} and the opposite sign
        for &l in &b_row {
            let dp = b.entry(k, l) as i64;
            for &lp in &a_prev {
                let d = a.entry(k - 1, lp) as i64;
                for s in 1..=d {
                    ch.add(mono(l, lp, s - dp), -1);
                    ch.add(mono(l, lp, s), 1);
                }
            }
            for &lp in &a_row {
                let d = a.entry(k, lp) as i64;
                for s in 1..=d {
                    ch.add(mono(l, lp, s - dp), 1);
                    ch.add(mono(l, lp, s), -1);
                }
            }
        }
    }
    ch
}

/// Negated self-character: the tangent space at a fixed point.
pub fn tangent_character(fp: &FixedPoint, sign: i8) -> CharacterPolynomial {
    rhom_character_with(fp.n, fp, fp, sign).neg()
}

/// Weight of a character monomial in units of the first torus weight.
pub fn monomial_weight(m: &CharMonomial, params: &EquivParams, conv: &LocalizationConventions) -> ExactScalar {
    let (a, b) = if conv.swap_q { (m.qp, m.q) } else { (m.q, m.qp) };
    let mut w = ExactScalar::int(a) + &params.eta * ExactScalar::int(b);
    for (u, x) in m.t.iter().zip(&params.xi) {
        if *u != 0 {
            w += x * ExactScalar::int(*u);
        }
    }
    if conv.dual {
        -w
    } else {
        w
    }
}

/// Tangent weights of a fixed point, with multiplicity.
pub fn tangent_weights(
    fp: &FixedPoint,
    params: &EquivParams,
    conv: &LocalizationConventions,
) -> Result<Vec<ExactScalar>> {
    let ch = tangent_character(fp, conv.t_shift_sign);
    let mut out = Vec::new();
    for (m, &c) in ch.terms() {
        if c <= 0 {
            return Err(Error::NonGeneric(format!(
                "tangent character of {:?} has coefficient {c} at {m:?}",
                fp.columns
            )));
        }
        let w = monomial_weight(m, params, conv);
        if w.is_zero() {
            return Err(Error::NonGeneric(format!("zero tangent weight at {:?} from {m:?}", fp.columns)));
        }
        out.extend(std::iter::repeat_n(w, c as usize));
    }
    Ok(out)
}

/// Contribution `prod (w + m)/w` of one fixed point.
pub fn fixed_point_contribution(
    fp: &FixedPoint,
    params: &EquivParams,
    conv: &LocalizationConventions,
) -> Result<ExactScalar> {
    let mut acc = ExactScalar::one();
    for w in tangent_weights(fp, params, conv)? {
        acc *= (&w + &params.m) / &w;
    }
    Ok(acc)
}

/// `Z(m)` summed over fixed points, through total degree `bound`.
pub fn localization_partition_function(
    params: &EquivParams,
    bound: u32,
    conv: &LocalizationConventions,
) -> Result<TruncatedSeries> {
    let n = params.n;
    let mut z = TruncatedSeries::zero(n, bound);
    for d in exponents_upto(n, bound) {
        let mut total = ExactScalar::zero();
        for fp in enumerate_fixed_points(n, &d) {
            total += fixed_point_contribution(&fp, params, conv)?;
        }
        debug_assert!(total_degree(&d) <= bound);
        z.add_term(d, total);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn fp(cols: &[&[u32]]) -> FixedPoint {
        FixedPoint::new(cols.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(fixed_point_degree(&FixedPoint::empty(3)), vec![0, 0, 0]);
        assert_eq!(fixed_point_degree(&fp(&[&[2, 1]])), vec![3]);
        assert_eq!(fixed_point_degree(&fp(&[&[1], &[]])), vec![1, 0]);
        assert_eq!(fixed_point_degree(&fp(&[&[], &[2, 1]])), vec![1, 2]);
    }

    #[test]
    fn periodic_entries() {
        let p = fp(&[&[3, 2], &[1]]);
        assert_eq!(p.entry(1, 1), 3);
        assert_eq!(p.entry(2, 1), 2);
        assert_eq!(p.entry(3, 3), 3);
        assert_eq!(p.entry(4, 3), 2);
        assert_eq!(p.entry(0, 0), 1);
        assert_eq!(p.entry(1, 0), 0);
        assert_eq!(p.entry(0, 1), 0);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_fixed_points(2, &[0, 0]), vec![FixedPoint::empty(2)]);
        let mut got: Vec<_> = enumerate_fixed_points(1, &[3]).into_iter().map(|f| f.columns()[0].clone()).collect();
        got.sort();
        assert_eq!(got, vec![vec![1, 1, 1], vec![2, 1], vec![3]]);
    }

    #[test]
    fn invalid_column_rejected() {
        assert!(FixedPoint::new(vec![vec![1, 2]]).is_err());
        assert_eq!(FixedPoint::new(vec![vec![1, 0, 0]]).unwrap(), fp(&[&[1]]));
    }

    #[test]
    fn character_examples() {
        let e = FixedPoint::empty(2);
        assert!(rhom_character(2, &e, &e).is_zero());
        let one = fp(&[&[1]]);
        let ch = rhom_character(1, &one, &one);
        let mut expect = CharacterPolynomial::default();
        expect.add(CharMonomial { t: vec![0], q: 1, qp: 0 }, -1);
        expect.add(CharMonomial { t: vec![0], q: 0, qp: 1 }, -1);
        assert_eq!(ch, expect);
        let two = tangent_character(&fp(&[&[2]]), 1);
        assert_eq!(two.terms().len(), 4);
        assert!(two.terms().values().all(|&c| c == 1));
    }

    #[test]
    fn weight_examples() {
        let params = EquivParams::new(vec![q(3, 7)], q(2, 5), q(2, 1)).unwrap();
        let conv = LocalizationConventions::default();
        assert!(tangent_weights(&FixedPoint::empty(1), &params, &conv).unwrap().is_empty());
        let mut w = tangent_weights(&fp(&[&[1]]), &params, &conv).unwrap();
        w.sort();
        assert_eq!(w, vec![q(2, 5), q(1, 1)]);
    }

    #[test]
    fn n2_degree_one_weights() {
        let params = EquivParams::new(vec![q(1, 3), q(-2, 5)], q(4, 7), q(1, 2)).unwrap();
        let conv = LocalizationConventions::default();
        let pts = enumerate_fixed_points(2, &[1, 0]);
        assert_eq!(pts.len(), 1);
        let mut w = tangent_weights(&pts[0], &params, &conv).unwrap();
        w.sort();
        let mut expect = vec![q(1, 1), q(1, 1) + q(-2, 5) - q(1, 3)];
        expect.sort();
        assert_eq!(w, expect);
        let pts = enumerate_fixed_points(2, &[0, 1]);
        let mut w = tangent_weights(&pts[0], &params, &conv).unwrap();
        w.sort();
        let mut expect = vec![q(1, 1), q(1, 1) + q(4, 7) + q(1, 3) - q(-2, 5)];
        expect.sort();
        assert_eq!(w, expect);
    }

    #[test]
    fn localization_degree_one_rank_one() {
        let (m, eta) = (q(2, 1), q(3, 5));
        let params = EquivParams::new(vec![q(1, 9)], eta.clone(), m.clone()).unwrap();
        let z = localization_partition_function(&params, 2, &LocalizationConventions::default()).unwrap();
        assert_eq!(z.constant_term(), ExactScalar::one());
        let expect = (&m + ExactScalar::one()) * (&eta + &m) / &eta;
        assert_eq!(z.coeff(&[1]), expect);
        assert_eq!(z.coeff(&[1]), q(13, 1));
    }

    #[test]
    fn zero_weight_is_non_generic() {
        let params = EquivParams::new(vec![q(0, 1)], q(0, 1), q(1, 1)).unwrap();
        let r = tangent_weights(&fp(&[&[1]]), &params, &LocalizationConventions::default());
        assert!(matches!(r, Err(Error::NonGeneric(_))));
    }
}
