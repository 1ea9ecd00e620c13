//! Deformed Calogero-Moser operator, its eigenfunction, and the reference partition function.

use serde::Serialize;

use crate::conventions::{CalogeroVariant, EtaScale};
use crate::error::{Error, Result};
use crate::geometry::EquivParams;
use crate::scalar::ExactScalar;
use crate::series::{exponents_upto, total_degree, weyl_delta, window_exponent, OffsetSeries, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMOperatorSpec {
    pub params: EquivParams,
    pub bound: u32,
    pub variant: CalogeroVariant,
    pub eta_scale: EtaScale,
}

impl CMOperatorSpec {
    pub fn new(params: EquivParams, bound: u32, variant: CalogeroVariant, eta_scale: EtaScale) -> Self {
        Self { params, bound, variant, eta_scale }
    }

    /// Parameters as seen by the Hamiltonian (eta possibly divided by the rank).
    pub fn hamiltonian_params(&self) -> EquivParams {
        match self.eta_scale {
            EtaScale::Unit => self.params.clone(),
            EtaScale::PerRank => {
                let n = ExactScalar::int(self.params.n as i64);
                self.params.with_eta(&self.params.eta / n)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenData {
    pub b: Vec<ExactScalar>,
    pub lambda: ExactScalar,
    #[serde(rename = "Y")]
    pub y: OffsetSeries,
}

/// `b_k = (k * sum(xi) - n * (xi_1 + .. + xi_k))/n - k(n-k) eta/2`.
pub fn b_exponents(params: &EquivParams) -> Vec<ExactScalar> {
    let n = params.n as i64;
    let total: ExactScalar = params.xi.iter().sum();
    let mut partial = ExactScalar::zero();
    (1..=n)
        .map(|k| {
            partial += &params.xi[(k - 1) as usize];
            (ExactScalar::int(k) * &total - ExactScalar::int(n) * &partial) / ExactScalar::int(n)
                - ExactScalar::ratio(k * (n - k), 2) * &params.eta
        })
        .collect()
}

pub fn eigenvalue_lambda(params: &EquivParams) -> ExactScalar {
    let n = params.n as i64;
    let total: ExactScalar = params.xi.iter().sum();
    let squares: ExactScalar = params.xi.iter().map(|x| x * x).sum();
    -ExactScalar::ratio((n - 1) * n * (n + 1), 24) * &params.eta * &params.eta
        - &total * &total / ExactScalar::int(2 * n)
        + squares / ExactScalar::int(2)
}

/// Symbol of `Delta + eta D` on `z^v`: `sum v_k^2 - sum v_k v_{k+1} + eta sum v_k` (cyclic).
pub fn leading_symbol(v: &[ExactScalar], eta: &ExactScalar) -> ExactScalar {
    let n = v.len();
    let mut acc = ExactScalar::zero();
    for k in 0..n {
        acc += &v[k] * &v[k];
        acc -= &v[k] * &v[(k + 1) % n];
        acc += eta * &v[k];
    }
    acc
}

fn loop_exponent(n: usize, k: u32) -> Vec<u32> {
    vec![k; n]
}

/// Multiplicative potential of variants A and C as a power series with zero constant term.
fn potential(spec: &CMOperatorSpec) -> Result<TruncatedSeries> {
    let p = spec.hamiltonian_params();
    let (n, bound) = (p.n, spec.bound);
    let m = &p.m;
    let mut pot = TruncatedSeries::zero(n, bound);
    let window_coeff = m * (m + ExactScalar::one());
    // 1/((w-1)(1/w-1)) = -sum_t t w^t
    for i in 1..=n {
        for len in 1..=bound as usize {
            let w = window_exponent(n, i, len);
            for t in 1..=(bound as usize / len) {
                let e: Vec<u32> = w.iter().map(|x| x * t as u32).collect();
                pot.add_term(e, -(&window_coeff * ExactScalar::int(t as i64)));
            }
        }
    }
    if spec.variant == CalogeroVariant::Verbatim {
        // k z^k/(z^k - 1) = -k sum_t z^{kt}
        let nn = ExactScalar::int(n as i64);
        let denom = &nn + &p.eta;
        if denom.is_zero() {
            return Err(Error::NonGeneric("loop potential needs n + eta != 0".into()));
        }
        let alpha = m * &nn * ((m + ExactScalar::one()) * &nn + &p.eta) / denom;
        for k in 1..=bound {
            for t in 1..=bound {
                let e = loop_exponent(n, k * t);
                if total_degree(&e) > bound {
                    break;
                }
                pot.add_term(e, -(&alpha * ExactScalar::int(k as i64)));
            }
        }
    }
    Ok(pot)
}

/// `phi(i) = xi_i + i`, extended by `xi_{i+n} = xi_i + eta`.
fn phi(p: &EquivParams, i: i64) -> ExactScalar {
    let n = p.n as i64;
    let i0 = (i - 1).rem_euclid(n) + 1;
    let shift = (i - i0) / n;
    &p.xi[(i0 - 1) as usize] + &p.eta * ExactScalar::int(shift) + ExactScalar::int(i)
}

/// `z_k d/dz_k` on an ordinary power series, `k` read mod n (1-based).
fn euler(g: &TruncatedSeries, k: i64) -> TruncatedSeries {
    let n = g.n() as i64;
    let idx = ((k - 1).rem_euclid(n)) as usize;
    g.map_coefficients(|e, c| c * ExactScalar::int(e[idx] as i64))
}

/// The first-order operator annihilating the intertwiner trace (variant B).
fn conjugated_apply(p: &EquivParams, g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let n = p.n;
    let ni = n as i64;
    let bound = g.bound();
    let m = &p.m;
    let one = ExactScalar::one();
    let c = -(ExactScalar::int(ni) + &p.eta);
    if c.is_zero() {
        return Err(Error::NonGeneric("central charge vanishes at eta = -n".into()));
    }
    let mut out = TruncatedSeries::zero(n, bound);
    // Delta + sum (xi_{i+1} - xi_i) d_i
    let xi_ext = |i: i64| phi(p, i) - ExactScalar::int(i);
    for (e, coef) in g.terms() {
        let mut s = ExactScalar::zero();
        for k in 0..n {
            let ek = ExactScalar::int(e[k] as i64);
            let ek1 = ExactScalar::int(e[(k + 1) % n] as i64);
            s += &ek * &ek - &ek * ek1;
            s += (xi_ext(k as i64 + 2) - xi_ext(k as i64 + 1)) * &ek;
        }
        out.add_term(e.clone(), coef * s);
    }
    // loop term: k/(z^{-k}-1) = k sum_t z^{kt}
    let nn = ExactScalar::int(ni);
    let loop_coeff = m * &nn + &nn - m * m * &nn * &nn / &c;
    let mut loop_series = TruncatedSeries::zero(n, bound);
    for k in 1..=bound {
        for t in 1..=bound {
            let e = loop_exponent(n, k * t);
            if total_degree(&e) > bound {
                break;
            }
            loop_series.add_term(e, &loop_coeff * ExactScalar::int(k as i64));
        }
    }
    out = &out + &(&loop_series * g);
    for i in 1..=n {
        for len in 1..=bound as usize {
            let j = (i + len - 1) as i64;
            let ii = i as i64;
            let w = window_exponent(n, i, len);
            let wrap = (j + 1 - ii) % ni == 0;
            let wc = m * (m + &one - if wrap { one.clone() } else { ExactScalar::zero() });
            let mut sq = TruncatedSeries::zero(n, bound);
            let mut geo = TruncatedSeries::zero(n, bound);
            for t in 1..=(bound as usize / len) {
                let e: Vec<u32> = w.iter().map(|x| x * t as u32).collect();
                sq.add_term(e.clone(), -(&wc * ExactScalar::int(t as i64)));
                geo.add_term(e, one.clone());
            }
            let shift = phi(p, ii) - phi(p, j + 1);
            let mut inner = g.scale(&shift);
            inner = &inner + &euler(g, j + 1);
            inner = &inner - &euler(g, j);
            inner = &inner - &euler(g, ii);
            inner = &inner + &euler(g, ii - 1);
            out = &out + &(&sq * g);
            out = &out + &(&geo * &inner);
        }
    }
    Ok(out)
}

/// Applies the Hamiltonian to an offset series, truncated at `spec.bound`.
pub fn hamiltonian_apply(spec: &CMOperatorSpec, f: &OffsetSeries) -> Result<OffsetSeries> {
    let p = spec.hamiltonian_params();
    let n = p.n;
    let body = f.body.with_bound(spec.bound);
    match spec.variant {
        CalogeroVariant::Verbatim | CalogeroVariant::NoLoop => {
            let mut out = TruncatedSeries::zero(n, spec.bound);
            for (e, c) in body.terms() {
                let v: Vec<ExactScalar> =
                    f.offset.iter().zip(e).map(|(o, x)| o + ExactScalar::int(*x as i64)).collect();
                out.add_term(e.clone(), c * leading_symbol(&v, &p.eta));
            }
            out = &out + &(&potential(spec)? * &body);
            OffsetSeries::new(f.offset.clone(), out)
        }
        CalogeroVariant::Conjugated => {
            let b = b_exponents(&p);
            if f.offset != b {
                return Err(Error::Dimension("conjugated operator acts on series with offset b".into()));
            }
            let delta = weyl_delta(n, spec.bound);
            let chi = body.try_mul(&delta.inv()?)?;
            let h = conjugated_apply(&p, &chi)?.try_mul(&delta)?;
            let lam = eigenvalue_lambda(&p);
            OffsetSeries::new(f.offset.clone(), &h + &body.scale(&lam))
        }
    }
}

/// Order-by-order solution of `H Y = lambda Y` with leading term `z^b`.
pub fn solve_eigenfunction(spec: &CMOperatorSpec) -> Result<EigenData> {
    let p = spec.hamiltonian_params();
    let n = p.n;
    let bound = spec.bound;
    let b = b_exponents(&p);
    let lambda = eigenvalue_lambda(&p);
    let body = match spec.variant {
        CalogeroVariant::Verbatim | CalogeroVariant::NoLoop => {
            let pot = potential(spec)?;
            let qb = leading_symbol(&b, &p.eta);
            let mut y = TruncatedSeries::one(n, bound);
            for e in exponents_upto(n, bound).into_iter().skip(1) {
                let mut rhs = ExactScalar::zero();
                for (pe, pc) in pot.terms() {
                    if let Some(rest) = crate::series::exponent_sub(&e, pe) {
                        rhs += pc * y.coeff(&rest);
                    }
                }
                let v: Vec<ExactScalar> = b.iter().zip(&e).map(|(bk, x)| bk + ExactScalar::int(*x as i64)).collect();
                let gap = leading_symbol(&v, &p.eta) - &qb;
                if gap.is_zero() {
                    return Err(Error::Resonance { degree: e });
                }
                y.add_term(e, -rhs / gap);
            }
            y
        }
        CalogeroVariant::Conjugated => {
            let chi = solve_conjugated(&p, bound)?;
            chi.try_mul(&weyl_delta(n, bound))?
        }
    };
    Ok(EigenData { b: b.clone(), lambda, y: OffsetSeries::new(b, body)? })
}

fn solve_conjugated(p: &EquivParams, bound: u32) -> Result<TruncatedSeries> {
    let n = p.n;
    let mut chi = TruncatedSeries::one(n, bound);
    let xi_ext = |i: i64| phi(p, i) - ExactScalar::int(i);
    for k in 1..=bound {
        let image = conjugated_apply(p, &chi)?;
        for e in crate::series::exponents_of_degree(n, k) {
            let mut sym = ExactScalar::zero();
            for a in 0..n {
                let ea = ExactScalar::int(e[a] as i64);
                let eb = ExactScalar::int(e[(a + 1) % n] as i64);
                sym += &ea * &ea - &ea * eb;
                sym += (xi_ext(a as i64 + 2) - xi_ext(a as i64 + 1)) * &ea;
            }
            if sym.is_zero() {
                return Err(Error::Resonance { degree: e });
            }
            let v = -image.coeff(&e) / sym;
            chi.add_term(e, v);
        }
    }
    Ok(chi)
}

/// `Y.body * delta^{-m-1}`: the prefactor `z^b` is cancelled exactly.
pub fn reference_partition_function(spec: &CMOperatorSpec) -> Result<TruncatedSeries> {
    let data = solve_eigenfunction(spec)?;
    let n = spec.params.n;
    let exponent = -(&spec.params.m + ExactScalar::one());
    let dpow = weyl_delta(n, spec.bound).pow_rational(&exponent)?;
    data.y.body.try_mul(&dpow)
}

/// `H Y - lambda Y` for solved data.
pub fn residual(spec: &CMOperatorSpec, data: &EigenData) -> Result<TruncatedSeries> {
    let hy = hamiltonian_apply(spec, &data.y)?;
    hy.body.try_sub(&data.y.body.scale(&data.lambda))
}
