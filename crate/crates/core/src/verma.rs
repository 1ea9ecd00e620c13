//! The graded Verma module of affine gl_n, the evaluation module `S^m`, the intertwiner
//! `Phi_m`, the operators `B`, `A(m)` and the energy operator, and their graded traces.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::affine::{bracket_basis, is_lowering, lowering, lowering_window, raising, AlgebraElement, LoopMatrix};
use crate::affine::{g_element, loop_generator};
use crate::conventions::Normalization;
use crate::error::{Error, Result};
use crate::geometry::EquivParams;
use crate::linalg;
use crate::scalar::ExactScalar;
use crate::series::{exponent_sub, exponents_upto, total_degree, window_exponent, ExponentVector, TruncatedSeries};

/// Affine window `[start; start+len-1]`, `1 <= start <= n`. Orders by length, then start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub len: usize,
    pub start: usize,
}

impl Window {
    pub fn new(start: usize, len: usize) -> Self {
        Self { len, start }
    }

    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Window", 2)?;
        st.serialize_field("i", &self.start)?;
        st.serialize_field("j", &self.end())?;
        st.end()
    }
}

/// Canonically ordered product of lowering generators applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PBWMonomial(Vec<Window>);

impl PBWMonomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Sorts the windows into canonical order.
    pub fn from_windows(mut windows: Vec<Window>) -> Self {
        windows.sort();
        Self(windows)
    }

    pub fn windows(&self) -> &[Window] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, n: usize) -> ExponentVector {
        let mut d = vec![0u32; n];
        for w in &self.0 {
            for t in w.start..=w.end() {
                d[(t - 1) % n] += 1;
            }
        }
        d
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|w| w.len).sum()
    }
}

/// All canonical monomials of degree exactly `d`.
pub fn pbw_basis(n: usize, d: &[u32]) -> Vec<PBWMonomial> {
    let total = total_degree(d) as usize;
    let mut windows = Vec::new();
    for len in 1..=total {
        for start in 1..=n {
            windows.push((Window::new(start, len), window_exponent(n, start, len)));
        }
    }
    fn rec(
        windows: &[(Window, ExponentVector)],
        from: usize,
        rem: &[u32],
        acc: &mut Vec<Window>,
        out: &mut Vec<PBWMonomial>,
    ) {
        if rem.iter().all(|&x| x == 0) {
            out.push(PBWMonomial(acc.clone()));
            return;
        }
        for (idx, (w, e)) in windows.iter().enumerate().skip(from) {
            if let Some(r) = exponent_sub(rem, e) {
                acc.push(*w);
                rec(windows, idx, &r, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&windows, 0, d, &mut Vec::new(), &mut out);
    out
}

fn add_into<K: Ord + Clone>(map: &mut BTreeMap<K, ExactScalar>, k: K, c: ExactScalar) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(k.clone()).or_insert_with(ExactScalar::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&k);
    }
}

/// Finite combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VermaVector {
    terms: BTreeMap<PBWMonomial, ExactScalar>,
}

#[derive(Serialize)]
struct VermaTerm<'a> {
    monomial: &'a PBWMonomial,
    value: &'a ExactScalar,
}

impl Serialize for VermaVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(monomial, value)| VermaTerm { monomial, value }))
    }
}

impl VermaVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(u: PBWMonomial) -> Self {
        let mut v = Self::zero();
        v.add_term(u, ExactScalar::one());
        v
    }

    pub fn vacuum() -> Self {
        Self::basis(PBWMonomial::vacuum())
    }

    pub fn terms(&self) -> &BTreeMap<PBWMonomial, ExactScalar> {
        &self.terms
    }

    pub fn coeff(&self, u: &PBWMonomial) -> ExactScalar {
        self.terms.get(u).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, u: PBWMonomial, c: ExactScalar) {
        add_into(&mut self.terms, u, c);
    }

    pub fn add_scaled(&mut self, other: &Self, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        for (u, v) in &other.terms {
            self.add_term(u.clone(), v * c);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &ExactScalar::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &ExactScalar::int(-1));
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Drops monomials of total degree above `bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(u, _)| u.total_degree() <= bound)
                .map(|(u, c)| (u.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(PBWMonomial::total_degree).max().unwrap_or(0)
    }
}

/// The Verma module with vacuum weights `h_k v = (xi_k + k) v` and central charge
/// `c = -n - eta`. The second central element of the geometric normalization acts by 1.
pub struct VermaModule {
    n: usize,
    xi: Vec<ExactScalar>,
    eta: ExactScalar,
    c: ExactScalar,
    norm: Normalization,
    cache: Mutex<HashMap<(LoopMatrix, PBWMonomial), VermaVector>>,
}

impl VermaModule {
    pub fn new(params: &EquivParams, norm: Normalization) -> Self {
        let n = params.n;
        Self {
            n,
            xi: params.xi.clone(),
            eta: params.eta.clone(),
            c: -ExactScalar::int(n as i64) - &params.eta,
            norm,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn central_charge(&self) -> &ExactScalar {
        &self.c
    }

    pub fn eta(&self) -> &ExactScalar {
        &self.eta
    }

    pub fn normalization(&self) -> Normalization {
        self.norm
    }

    /// Eigenvalue of `h_k` (`k` any integer) on a monomial of degree `d`:
    /// `xi_k + k - d_k + d_{k-1}`, shifted by `-c` per period.
    pub fn h_value(&self, k: i64, d: &[u32]) -> ExactScalar {
        let n = self.n as i64;
        let k0 = (k - 1).rem_euclid(n) + 1;
        let shift = (k - k0) / n;
        let cur = d[(k0 - 1) as usize] as i64;
        let prev = d[((k0 - 2).rem_euclid(n)) as usize] as i64;
        &self.xi[(k0 - 1) as usize] + ExactScalar::int(k0 - cur + prev) - &self.c * ExactScalar::int(shift)
    }

    /// `h_k` applied to a vector.
    pub fn apply_h(&self, k: i64, v: &VermaVector) -> VermaVector {
        let mut out = VermaVector::zero();
        for (u, c) in v.terms() {
            out.add_term(u.clone(), c * self.h_value(k, &u.degree(self.n)));
        }
        out
    }

    fn lowering_of(&self, w: Window) -> LoopMatrix {
        lowering(self.n, w.start, w.len)
    }

    /// Action of one loop matrix on one PBW monomial.
    pub fn act_basis(&self, x: LoopMatrix, u: &PBWMonomial) -> VermaVector {
        let key = (x, u.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let (a, k, l) = x;
        let result = if a == 0 && k == l {
            let mut v = VermaVector::zero();
            v.add_term(u.clone(), self.h_value(k as i64, &u.degree(self.n)));
            v
        } else if is_lowering(x) {
            let w = {
                let (start, len) = lowering_window(self.n, x);
                Window::new(start, len)
            };
            match u.0.first() {
                Some(first) if w > *first => self.commute_past_first(x, u),
                _ => {
                    let mut ws = Vec::with_capacity(u.0.len() + 1);
                    ws.push(w);
                    ws.extend_from_slice(&u.0);
                    VermaVector::basis(PBWMonomial(ws))
                }
            }
        } else if u.is_vacuum() {
            VermaVector::zero()
        } else {
            self.commute_past_first(x, u)
        };
        self.cache.lock().expect("cache lock").insert(key, result.clone());
        result
    }

    /// `x (y_1 rest) = y_1 (x rest) + [x, y_1] rest`.
    fn commute_past_first(&self, x: LoopMatrix, u: &PBWMonomial) -> VermaVector {
        let y1 = self.lowering_of(u.0[0]);
        let rest = VermaVector::basis(PBWMonomial(u.0[1..].to_vec()));
        let moved = self.act_loop(x, &rest);
        let mut out = self.act_loop(y1, &moved);
        let br = bracket_basis(x, y1, self.norm);
        out = out.add(&self.act(&br, &rest));
        out
    }

    pub fn act_loop(&self, x: LoopMatrix, v: &VermaVector) -> VermaVector {
        let mut out = VermaVector::zero();
        for (u, c) in v.terms() {
            out.add_scaled(&self.act_basis(x, u), c);
        }
        out
    }

    /// Action of an algebra element, central parts included.
    pub fn act(&self, x: &AlgebraElement, v: &VermaVector) -> VermaVector {
        let mut out = VermaVector::zero();
        for (k, c) in &x.terms {
            out.add_scaled(&self.act_loop(*k, v), c);
        }
        let scalar = &x.central * &self.c + &x.trace_central;
        out.add_scaled(v, &scalar);
        out
    }
}

/// Element of `S^m`: offsets `k` (the monomial `prod y_i^{m+k_i}`) with coefficients.
pub type SModVector = BTreeMap<Vec<i64>, ExactScalar>;

/// Action of `z^a E_ij` on the basis vector with offset `k`.
pub fn smodule_act_basis(
    x: LoopMatrix,
    k: &[i64],
    m: &ExactScalar,
    norm: Normalization,
) -> Option<(Vec<i64>, ExactScalar)> {
    let (a, i, j) = x;
    let coef = -(m + ExactScalar::int(k[i - 1]));
    let mut kk = k.to_vec();
    let c = if i == j {
        let mut c = coef;
        if a == 0 {
            c += m;
        } else if a < 0 && norm == Normalization::Geometric {
            c -= ExactScalar::one();
        }
        c
    } else {
        kk[i - 1] -= 1;
        kk[j - 1] += 1;
        coef
    };
    (!c.is_zero()).then_some((kk, c))
}

/// Action on `S^m`; both central elements act by zero.
pub fn smodule_act(x: &AlgebraElement, s: &SModVector, m: &ExactScalar, norm: Normalization) -> SModVector {
    let mut out = SModVector::new();
    for (key, c) in &x.terms {
        for (k, v) in s {
            if let Some((k2, f)) = smodule_act_basis(*key, k, m, norm) {
                add_into(&mut out, k2, c * v * f);
            }
        }
    }
    out
}

/// The weight-zero vector `(y_1 ... y_n)^m`.
pub fn smodule_vacuum(n: usize) -> SModVector {
    SModVector::from([(vec![0i64; n], ExactScalar::one())])
}

/// Offset of the `S^m` factor paired with an `H` vector of degree `d`.
pub fn offset_for_degree(d: &[u32]) -> Vec<i64> {
    let n = d.len();
    (0..n).map(|i| d[(i + n - 1) % n] as i64 - d[i] as i64).collect()
}

/// Element of `H (x) S^m`.
pub type TensorVector = BTreeMap<(PBWMonomial, Vec<i64>), ExactScalar>;

fn apply_coproduct(
    module: &VermaModule,
    m: &ExactScalar,
    x: LoopMatrix,
    t: &TensorVector,
    bound: usize,
) -> TensorVector {
    let mut out = TensorVector::new();
    for ((u, k), c) in t {
        for (u2, c2) in module.act_basis(x, u).terms() {
            if u2.total_degree() <= bound {
                add_into(&mut out, (u2.clone(), k.clone()), c * c2);
            }
        }
        if let Some((k2, f)) = smodule_act_basis(x, k, m, module.norm) {
            add_into(&mut out, (u.clone(), k2), c * f);
        }
    }
    out
}

/// `Delta(x) = x (x) 1 + 1 (x) x` on `H (x) S^m`, dropping `H`-degrees above `bound`.
pub fn tensor_act(
    module: &VermaModule,
    m: &ExactScalar,
    x: &AlgebraElement,
    t: &TensorVector,
    bound: usize,
) -> TensorVector {
    let mut out = TensorVector::new();
    for (key, c) in &x.terms {
        for (k, v) in apply_coproduct(module, m, *key, t, bound) {
            add_into(&mut out, k, c * v);
        }
    }
    let scalar = &x.central * &module.c + &x.trace_central;
    for (k, v) in t {
        add_into(&mut out, k.clone(), &scalar * v);
    }
    out
}

/// Annihilation conditions for the intertwiner: `e^+_i` and loop generators `a^+_k`.
fn raising_generators(n: usize, bound: u32) -> Vec<(AlgebraElement, ExponentVector)> {
    let mut gens = Vec::new();
    for i in 1..=n {
        let (a, r, c) = raising(n, i, 1);
        gens.push((AlgebraElement::basis(a, r, c), window_exponent(n, i, 1)));
    }
    let mut k = 1u32;
    while n as u32 * k <= bound {
        gens.push((loop_generator(n, k as i64), vec![k; n]));
        k += 1;
    }
    gens
}

/// `Phi_m(v)` in PBW coordinates through a total-degree bound, with per-degree nullities.
pub struct IntertwinerData {
    n: usize,
    m: ExactScalar,
    bound: usize,
    vacuum_image: BTreeMap<PBWMonomial, ExactScalar>,
    nullities: BTreeMap<ExponentVector, usize>,
    cache: Mutex<HashMap<PBWMonomial, TensorVector>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerDegree {
    pub degree: ExponentVector,
    pub offset: Vec<i64>,
    pub basis: Vec<PBWMonomial>,
    pub coefficients: Vec<ExactScalar>,
    pub solution_dimension: usize,
}

impl IntertwinerData {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn m(&self) -> &ExactScalar {
        &self.m
    }

    /// Null space dimension of the annihilation system at each nonzero degree.
    pub fn nullities(&self) -> &BTreeMap<ExponentVector, usize> {
        &self.nullities
    }

    /// Dimension of the space of intertwiners truncated at degree `d`, counting the scale.
    pub fn solution_dimension(&self, d: &[u32]) -> usize {
        1 + self.nullities.get(d).copied().unwrap_or(0)
    }

    pub fn vacuum_image(&self) -> &BTreeMap<PBWMonomial, ExactScalar> {
        &self.vacuum_image
    }

    /// Per-degree coordinates of `Phi_m(v)`.
    pub fn degrees(&self) -> Vec<IntertwinerDegree> {
        exponents_upto(self.n, self.bound as u32)
            .into_iter()
            .map(|d| {
                let basis = pbw_basis(self.n, &d);
                let coefficients =
                    basis.iter().map(|u| self.vacuum_image.get(u).cloned().unwrap_or_else(ExactScalar::zero)).collect();
                let solution_dimension = self.solution_dimension(&d);
                IntertwinerDegree { offset: offset_for_degree(&d), degree: d, basis, coefficients, solution_dimension }
            })
            .collect()
    }

    /// `Phi_m(u) = Delta(y_1) ... Delta(y_r) Phi_m(v)`, truncated at the solved bound.
    pub fn phi_of(&self, module: &VermaModule, u: &PBWMonomial) -> TensorVector {
        if let Some(t) = self.cache.lock().expect("cache lock").get(u) {
            return t.clone();
        }
        let result = if u.is_vacuum() {
            self.vacuum_image
                .iter()
                .map(|(w, c)| ((w.clone(), offset_for_degree(&w.degree(self.n))), c.clone()))
                .collect()
        } else {
            let rest = PBWMonomial(u.0[1..].to_vec());
            let inner = self.phi_of(module, &rest);
            apply_coproduct(module, &self.m, module.lowering_of(u.0[0]), &inner, self.bound)
        };
        self.cache.lock().expect("cache lock").insert(u.clone(), result.clone());
        result
    }
}

/// Solves for `Phi_m(v)` degree by degree through total degree `bound`.
pub fn solve_intertwiner(module: &VermaModule, m: &ExactScalar, bound: usize) -> Result<IntertwinerData> {
    let n = module.n;
    let mut phi: BTreeMap<PBWMonomial, ExactScalar> = BTreeMap::new();
    phi.insert(PBWMonomial::vacuum(), ExactScalar::one());
    let mut nullities = BTreeMap::new();
    let gens = raising_generators(n, bound as u32);
    for d in exponents_upto(n, bound as u32) {
        if total_degree(&d) == 0 {
            continue;
        }
        let basis = pbw_basis(n, &d);
        let index: HashMap<&PBWMonomial, usize> = basis.iter().enumerate().map(|(t, u)| (u, t)).collect();
        let target_offset = offset_for_degree(&d);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (g, gdeg) in &gens {
            let Some(dp) = exponent_sub(&d, gdeg) else { continue };
            let lower = pbw_basis(n, &dp);
            let lindex: HashMap<&PBWMonomial, usize> = lower.iter().enumerate().map(|(t, u)| (u, t)).collect();
            let mut mat = vec![vec![ExactScalar::zero(); basis.len()]; lower.len()];
            for u in &basis {
                let img = module.act(g, &VermaVector::basis(u.clone()));
                for (w, c) in img.terms() {
                    mat[lindex[w]][index[u]] += c;
                }
            }
            // the S^m factor of a degree-dp term moves to the offset of degree d
            let s_img =
                smodule_act(g, &SModVector::from([(offset_for_degree(&dp), ExactScalar::one())]), m, module.norm);
            let s_scalar = s_img.get(&target_offset).cloned().unwrap_or_else(ExactScalar::zero);
            debug_assert!(s_img.keys().all(|k| *k == target_offset));
            let mut r = vec![ExactScalar::zero(); lower.len()];
            for up in &lower {
                if let Some(p) = phi.get(up) {
                    r[lindex[up]] -= p * &s_scalar;
                }
            }
            rows.extend(mat);
            rhs.extend(r);
        }
        let sol = linalg::solve(&rows, &rhs, basis.len()).ok_or_else(|| Error::Inconsistent { degree: d.clone() })?;
        if sol.nullity != 0 {
            return Err(Error::SolutionDimension { degree: d, dimension: sol.nullity + 1 });
        }
        nullities.insert(d, sol.nullity);
        for (u, v) in basis.into_iter().zip(sol.particular) {
            if !v.is_zero() {
                phi.insert(u, v);
            }
        }
    }
    Ok(IntertwinerData { n, m: m.clone(), bound, vacuum_image: phi, nullities, cache: Mutex::new(HashMap::new()) })
}

/// `B = exp(sum_{windows} e^+_{[i;j]}/(j-i+1))` applied to a vector.
pub fn apply_b(module: &VermaModule, v: &VermaVector) -> VermaVector {
    let n = module.n;
    let top = v.max_degree();
    let mut x = AlgebraElement::zero();
    for i in 1..=n {
        for len in 1..=top {
            x.add_term(raising(n, i, len), ExactScalar::ratio(1, len as i64));
        }
    }
    let mut result = v.clone();
    let mut term = v.clone();
    let mut k = 1i64;
    while !term.is_zero() {
        term = module.act(&x, &term).scale(&ExactScalar::ratio(1, k));
        result = result.add(&term);
        k += 1;
    }
    result
}

/// `A(m) = (Id (x) ev) Phi_m B`, truncated at total degree `bound`.
pub fn operator_a(module: &VermaModule, data: &IntertwinerData, v: &VermaVector, bound: usize) -> Result<VermaVector> {
    if bound > data.bound {
        return Err(Error::DegreeBound { needed: bound as u32, available: data.bound as u32 });
    }
    let mut out = VermaVector::zero();
    for (u, c) in apply_b(module, v).terms() {
        for ((w, _), c2) in data.phi_of(module, u) {
            if w.total_degree() <= bound {
                out.add_term(w, c * &c2);
            }
        }
    }
    Ok(out)
}

/// `sum_d z^d Tr(op |_{H_d})` through total degree `bound`, for a degree-preserving `op`.
pub fn graded_trace<F>(n: usize, bound: u32, mut op: F) -> Result<TruncatedSeries>
where
    F: FnMut(&PBWMonomial) -> Result<VermaVector>,
{
    let mut out = TruncatedSeries::zero(n, bound);
    for d in exponents_upto(n, bound) {
        let mut tr = ExactScalar::zero();
        for u in pbw_basis(n, &d) {
            tr += op(&u)?.coeff(&u);
        }
        out.add_term(d, tr);
    }
    Ok(out)
}

/// `Tr(A(m) z)`.
pub fn trace_a(module: &VermaModule, data: &IntertwinerData, bound: u32) -> Result<TruncatedSeries> {
    graded_trace(module.n, bound, |u| operator_a(module, data, &VermaVector::basis(u.clone()), u.total_degree()))
}

/// Generalized character of the intertwiner: coefficient of `z^d` is the trace of the
/// degree-preserving block of `Phi_m` on `H_d`, valued in the weight-zero line of `S^m`.
pub fn intertwiner_character(module: &VermaModule, data: &IntertwinerData, bound: u32) -> Result<TruncatedSeries> {
    if bound as usize > data.bound {
        return Err(Error::DegreeBound { needed: bound, available: data.bound as u32 });
    }
    let n = module.n;
    let zero_offset = vec![0i64; n];
    let mut out = TruncatedSeries::zero(n, bound);
    for d in exponents_upto(n, bound) {
        let mut tr = ExactScalar::zero();
        for u in pbw_basis(n, &d) {
            for ((w, k), c) in data.phi_of(module, &u) {
                if w == u {
                    if k != zero_offset {
                        return Err(Error::Inconsistent { degree: d });
                    }
                    tr += c;
                }
            }
        }
        out.add_term(d, tr);
    }
    Ok(out)
}

/// `ev g^{-1}`: `prod y_i^{m+k_i}` goes to `prod_i (1 + sum_j g_{[i;j]})^{m+k_i}`.
pub fn ev_g_inverse(s: &SModVector, m: &ExactScalar, n: usize, bound: u32) -> Result<TruncatedSeries> {
    let g = g_element(n, bound);
    let rows: Vec<TruncatedSeries> = (1..=n)
        .map(|i| {
            let mut acc = TruncatedSeries::one(n, bound);
            for len in 1..=bound as usize {
                acc = &acc + &g.get(i, len);
            }
            acc
        })
        .collect();
    let mut out = TruncatedSeries::zero(n, bound);
    for (k, c) in s {
        let mut term = TruncatedSeries::constant(n, bound, c.clone());
        for (i, row) in rows.iter().enumerate() {
            term = term.try_mul(&row.pow_rational(&(m + ExactScalar::int(k[i])))?)?;
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// Energy operator `sum_i (h_i^2/2 + c i h_i/n) + sum e^- e^+ + gamma sum a^-_k a^+_k` with
/// `gamma = 1/c` under the standard normalization and `0` under the geometric one.
pub fn energy_apply(module: &VermaModule, v: &VermaVector) -> Result<VermaVector> {
    let n = module.n;
    let c = module.c.clone();
    let top = v.max_degree();
    let mut out = VermaVector::zero();
    for (u, coef) in v.terms() {
        let d = u.degree(n);
        let mut val = ExactScalar::zero();
        for i in 1..=n {
            let h = module.h_value(i as i64, &d);
            val += &h * &h / ExactScalar::int(2) + &c * ExactScalar::int(i as i64) * &h / ExactScalar::int(n as i64);
        }
        out.add_term(u.clone(), coef * val);
    }
    for i in 1..=n {
        for len in 1..=top {
            let up = module.act_loop(raising(n, i, len), v);
            out = out.add(&module.act_loop(lowering(n, i, len), &up));
        }
    }
    if module.norm == Normalization::Standard {
        let gamma = c.inv().ok_or_else(|| Error::NonGeneric("central charge vanishes".into()))?;
        let mut k = 1usize;
        while n * k <= top {
            let up = module.act(&loop_generator(n, k as i64), v);
            let t = module.act(&loop_generator(n, -(k as i64)), &up);
            out.add_scaled(&t, &gamma);
            k += 1;
        }
    }
    Ok(out)
}

/// One failed instance of a vertex-operator relation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub vector: PBWMonomial,
    pub lhs: VermaVector,
    pub rhs: VermaVector,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VertexReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl VertexReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the commutation relations of `A(m)` with `e^+_i`, `e^-_i` and `a^\pm_1` on every
/// PBW vector of total degree `<= bound`.
pub fn check_vertex_relations(module: &VermaModule, m: &ExactScalar, bound: usize) -> Result<VertexReport> {
    let n = module.n;
    let inner = bound + n;
    let data = solve_intertwiner(module, m, inner)?;
    let a_op = |v: &VermaVector| operator_a(module, &data, v, inner);
    let mut report = VertexReport::default();
    let mut record = |name: String, u: &PBWMonomial, lhs: VermaVector, rhs: VermaVector| {
        report.checked += 1;
        let (lhs, rhs) = (lhs.truncate(bound), rhs.truncate(bound));
        if lhs != rhs {
            report.failures.push(RelationFailure { relation: name, vector: u.clone(), lhs, rhs });
        }
    };
    let e_plus = |i: i64| {
        let i0 = crate::affine::reduce_start(n, i);
        let (a, r, c) = raising(n, i0, 1);
        AlgebraElement::basis(a, r, c)
    };
    let e_minus = |i: usize| {
        let (a, r, c) = lowering(n, i, 1);
        AlgebraElement::basis(a, r, c)
    };
    let mn = m * ExactScalar::int(n as i64);
    for d in exponents_upto(n, bound as u32) {
        for u in pbw_basis(n, &d) {
            let uv = VermaVector::basis(u.clone());
            let au = a_op(&uv)?;
            for i in 1..=n {
                let ii = i as i64;
                // e^+_{i+1} A - A e^+_i = h_{i+1} A - A h_{i+1} + m A
                let lhs = module.act(&e_plus(ii + 1), &au).sub(&a_op(&module.act(&e_plus(ii), &uv))?);
                let rhs = module.apply_h(ii + 1, &au).sub(&a_op(&module.apply_h(ii + 1, &uv))?).add(&au.scale(m));
                record(format!("e+[{}]", i), &u, lhs, rhs);
                // e^-_i A - A e^-_i = h_{i+1} A - A h_i + m A
                let lhs = module.act(&e_minus(i), &au).sub(&a_op(&module.act(&e_minus(i), &uv))?);
                let rhs = module.apply_h(ii + 1, &au).sub(&a_op(&module.apply_h(ii, &uv))?).add(&au.scale(m));
                record(format!("e-[{}]", i), &u, lhs, rhs);
            }
            let ap = loop_generator(n, 1);
            let lhs = module.act(&ap, &au).sub(&a_op(&module.act(&ap, &uv))?);
            record("a+[1]".into(), &u, lhs, au.scale(&mn));
            let am = loop_generator(n, -1);
            let lhs = module.act(&am, &au).sub(&a_op(&module.act(&am, &uv))?);
            record("a-[1]".into(), &u, lhs, au.scale(&(&mn - module.central_charge())));
        }
    }
    Ok(report)
}

/// Graded dimension of the first `bound` degrees: the Verma character.
pub fn verma_character(n: usize, bound: u32) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(n, bound);
    for d in exponents_upto(n, bound) {
        let count = pbw_basis(n, &d).len() as i64;
        out.add_term(d, ExactScalar::int(count));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::series::weyl_delta;

    fn params2() -> EquivParams {
        EquivParams::new(vec![q(1, 3), q(-2, 7)], q(3, 5), q(2, 1)).unwrap()
    }

    #[test]
    fn basis_counts() {
        assert_eq!(pbw_basis(1, &[0]), vec![PBWMonomial::vacuum()]);
        let b = pbw_basis(1, &[2]);
        assert_eq!(b.len(), 2);
        assert!(b.contains(&PBWMonomial::from_windows(vec![Window::new(1, 1), Window::new(1, 1)])));
        assert!(b.contains(&PBWMonomial::from_windows(vec![Window::new(1, 2)])));
        for n in 1..=2 {
            let delta_inv = weyl_delta(n, 4).inv().unwrap();
            assert_eq!(verma_character(n, 4), delta_inv);
        }
    }

    #[test]
    fn vacuum_actions() {
        let p = params2();
        let v = VermaModule::new(&p, Normalization::Geometric);
        let vac = VermaVector::vacuum();
        let h1 = v.act(&AlgebraElement::basis(0, 1, 1), &vac);
        assert_eq!(h1, vac.scale(&(&p.xi[0] + q(1, 1))));
        for i in 1..=2 {
            for len in 1..4 {
                let (a, r, c) = raising(2, i, len);
                assert!(v.act_loop((a, r, c), &vac).is_zero());
            }
        }
        let low = v.act_loop(lowering(2, 1, 1), &vac);
        let back = v.act_loop(raising(2, 1, 1), &low);
        assert_eq!(back, vac.scale(&(&p.xi[0] - &p.xi[1] - q(1, 1))));
    }

    #[test]
    fn b_on_vacuum_and_degree_one() {
        let v = VermaModule::new(&params2(), Normalization::Geometric);
        assert_eq!(apply_b(&v, &VermaVector::vacuum()), VermaVector::vacuum());
        let u = VermaVector::basis(PBWMonomial::from_windows(vec![Window::new(1, 1)]));
        let bu = apply_b(&v, &u);
        let scalar = v.act_loop(raising(2, 1, 1), &u).coeff(&PBWMonomial::vacuum());
        let mut expect = u.clone();
        expect.add_term(PBWMonomial::vacuum(), scalar);
        assert_eq!(bu, expect);
    }

    #[test]
    fn smodule_examples() {
        let m = q(2, 1);
        let vac = smodule_vacuum(2);
        for i in 1..=2 {
            let hi = smodule_act(&AlgebraElement::basis(0, i, i), &vac, &m, Normalization::Geometric);
            assert!(hi.is_empty());
        }
        let low = smodule_act(&AlgebraElement::basis(0, 2, 1), &vac, &m, Normalization::Standard);
        let back = smodule_act(&AlgebraElement::basis(0, 1, 2), &low, &m, Normalization::Standard);
        assert_eq!(back, SModVector::from([(vec![0, 0], q(6, 1))]));
    }

    #[test]
    fn intertwiner_m_zero_is_identity() {
        let v = VermaModule::new(&params2(), Normalization::Geometric);
        let data = solve_intertwiner(&v, &ExactScalar::zero(), 2).unwrap();
        assert_eq!(data.vacuum_image().len(), 1);
        assert!(data.nullities().values().all(|&k| k == 0));
        let tr = intertwiner_character(&v, &data, 2).unwrap();
        assert_eq!(tr, weyl_delta(2, 2).inv().unwrap());
    }

    #[test]
    fn energy_differences() {
        for norm in [Normalization::Standard, Normalization::Geometric] {
            let v = VermaModule::new(&params2(), norm);
            let c0 = energy_apply(&v, &VermaVector::vacuum()).unwrap().coeff(&PBWMonomial::vacuum());
            let slope = q(1, 1) + v.central_charge() / q(2, 1);
            for d in exponents_upto(2, 2) {
                for u in pbw_basis(2, &d) {
                    let out = energy_apply(&v, &VermaVector::basis(u.clone())).unwrap();
                    if norm == Normalization::Geometric {
                        assert_eq!(out.terms().len(), 1);
                    }
                    let diff = out.coeff(&u) - &c0;
                    assert_eq!(diff, &slope * q(total_degree(&d) as i64, 1), "{norm:?} {u:?}");
                }
            }
        }
    }
}
