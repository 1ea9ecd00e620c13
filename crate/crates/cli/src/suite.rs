//! Cross-checks and invariant suites. Each function returns check records and never panics
//! on non-generic input: errors become failed records.

use laumon::affine::{b_element, check_twist_conjugation, loop_matrix_slot};
use laumon::calogero::{
    b_exponents, eigenvalue_lambda, leading_symbol, reference_partition_function, residual, solve_eigenfunction,
    CMOperatorSpec,
};
use laumon::conventions::Ledger;
use laumon::geometry::{
    enumerate_fixed_points, localization_partition_function, tangent_character, tangent_weights, EquivParams,
};
use laumon::series::{exponents_upto, total_degree, weyl_delta};
use laumon::verma::{
    apply_b, check_vertex_relations, energy_apply, ev_g_inverse, graded_trace, intertwiner_character, pbw_basis,
    smodule_vacuum, solve_intertwiner, trace_a, PBWMonomial, VermaModule, VermaVector,
};
use laumon::{ExactScalar, TruncatedSeries};
use rand::Rng;

use crate::random;
use crate::report::CheckRecord;

fn inv_delta(n: usize, bound: u32) -> TruncatedSeries {
    weyl_delta(n, bound).inv().expect("constant term 1")
}

fn tag(name: &str, p: &EquivParams) -> String {
    format!("{name}[n={}]", p.n)
}

pub fn lambda_identity(p: &EquivParams) -> CheckRecord {
    let b = b_exponents(p);
    CheckRecord::scalars(tag("lambda_identity", p), &eigenvalue_lambda(p), &leading_symbol(&b, &p.eta))
}

pub fn eigen_residual(p: &EquivParams, bound: u32, ledger: &Ledger) -> CheckRecord {
    let spec = CMOperatorSpec::new(p.clone(), bound, ledger.calogero, ledger.eta_scale);
    let zero = TruncatedSeries::zero(p.n, bound);
    let res = solve_eigenfunction(&spec).and_then(|data| residual(&spec, &data));
    CheckRecord::series(tag("eigen_residual", p), res, Ok::<_, laumon::Error>(zero))
}

/// Counts, tangent ranks and weight genericity. The rank check is the true invariant: every
/// coefficient positive and total multiplicity `2|d|`.
pub fn fixed_point_suite(p: &EquivParams, bound: u32) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let counts: Vec<usize> = (0..=6).map(|k| enumerate_fixed_points(1, &[k]).len()).collect();
    out.push(CheckRecord::boolean(
        "fixed_point_counts[n=1]",
        counts == [1, 1, 2, 3, 5, 7, 11],
        format!("{counts:?}"),
        "[1, 1, 2, 3, 5, 7, 11]",
    ));
    let mut bad = Vec::new();
    let mut total = 0usize;
    for n in 1..=3usize {
        for d in exponents_upto(n, bound) {
            for fp in enumerate_fixed_points(n, &d) {
                total += 1;
                let ch = tangent_character(&fp, 1);
                let ok = ch.mass() == 2 * total_degree(&d) as i64 && ch.terms().values().all(|&c| c > 0);
                if !ok {
                    bad.push(format!("{:?}", fp.columns()));
                }
            }
        }
    }
    out.push(CheckRecord::boolean(
        "tangent_rank",
        bad.is_empty(),
        format!("{} of {total} fixed points off", bad.len()),
        "0",
    ));
    let mut zero_weights = Vec::new();
    for d in exponents_upto(p.n, bound) {
        for fp in enumerate_fixed_points(p.n, &d) {
            if let Err(e) = tangent_weights(&fp, p, &Ledger::default().localization) {
                zero_weights.push(e.to_string());
            }
        }
    }
    out.push(CheckRecord::boolean(
        tag("tangent_weights_nonzero", p),
        zero_weights.is_empty(),
        zero_weights.join("; "),
        "",
    ));
    out
}

/// `m = 0`: localization, the eigenfunction side and `Tr(A(0) z) = Tr(B z)` all equal `1/delta`.
pub fn degeneration(p: &EquivParams, bound: u32, ledger: &Ledger) -> Vec<CheckRecord> {
    let p0 = p.with_m(ExactScalar::zero());
    let target = inv_delta(p.n, bound);
    let ok = |s: TruncatedSeries| Ok::<_, laumon::Error>(s);
    let spec = CMOperatorSpec::new(p0.clone(), bound, ledger.calogero, ledger.eta_scale);
    let module = VermaModule::new(&p0, ledger.normalization);
    let tr_a = solve_intertwiner(&module, &p0.m, bound as usize).and_then(|data| trace_a(&module, &data, bound));
    let tr_b = graded_trace(p.n, bound, |u| Ok(apply_b(&module, &VermaVector::basis(u.clone()))));
    vec![
        CheckRecord::series(
            tag("m0_localization", p),
            localization_partition_function(&p0, bound, &ledger.localization),
            ok(target.clone()),
        ),
        CheckRecord::series(tag("m0_eigenfunction", p), reference_partition_function(&spec), ok(target.clone())),
        CheckRecord::series(tag("m0_trace_a", p), tr_a, ok(target.clone())),
        CheckRecord::series(tag("m0_trace_b", p), tr_b, ok(target)),
    ]
}

/// Localization against the eigenfunction formula.
pub fn eigenfunction_agreement(p: &EquivParams, bound: u32, ledger: &Ledger) -> CheckRecord {
    let spec = CMOperatorSpec::new(p.clone(), bound, ledger.calogero, ledger.eta_scale);
    CheckRecord::series(
        format!("localization_vs_eigenfunction[n={},m={}]", p.n, p.m),
        localization_partition_function(p, bound, &ledger.localization),
        reference_partition_function(&spec),
    )
}

/// `B` read as a loop matrix equals `1/(1-z)` times the matrix with 1 on and above the
/// diagonal and `z` below, rank 4, through `z^3`.
pub fn b_display() -> CheckRecord {
    let n = 4;
    let b = b_element(n, 4 * n);
    let mut bad = Vec::new();
    for r in 1..=n {
        for s in 1..=n {
            for (t, v) in loop_matrix_slot(&b, r, s, 3).iter().enumerate() {
                let expect = if s >= r || t >= 1 { 1 } else { 0 };
                if *v != ExactScalar::int(expect) {
                    bad.push(format!("({r},{s}) z^{t}: {v}"));
                }
            }
        }
    }
    CheckRecord::boolean("b_display[n=4]", bad.is_empty(), bad.join("; "), "")
}

/// Representation-theory checks at `p` through total degree `bound`.
pub fn representation_suite(p: &EquivParams, bound: u32, ledger: &Ledger) -> Vec<CheckRecord> {
    let n = p.n;
    let mut out = vec![b_display()];
    let twist = check_twist_conjugation(n, 3);
    out.push(CheckRecord::boolean(
        tag("twist_conjugation", p),
        twist.passed,
        format!("failing windows {:?}", twist.failing),
        "",
    ));
    let dm3 = weyl_delta(n, 3).pow_rational(&-p.m.clone());
    out.push(CheckRecord::series(tag("ev_g_inverse_vacuum", p), ev_g_inverse(&smodule_vacuum(n), &p.m, n, 3), dm3));

    let module = VermaModule::new(p, ledger.normalization);
    match check_vertex_relations(&module, &p.m, bound as usize) {
        Ok(r) => out.push(CheckRecord::boolean(
            tag("vertex_relations", p),
            r.passed(),
            format!("{} of {} failed", r.failures.len(), r.checked),
            r.failures.first().map(|f| format!("first failure {} on {:?}", f.relation, f.vector)).unwrap_or_default(),
        )),
        Err(e) => out.push(CheckRecord::error(tag("vertex_relations", p), e)),
    }
    out.push(energy_check(&module, bound));

    let data = match solve_intertwiner(&module, &p.m, bound as usize) {
        Ok(d) => d,
        Err(e) => {
            out.push(CheckRecord::error(tag("intertwiner_solution_dimension", p), e));
            return out;
        }
    };
    let dims: Vec<usize> = data.degrees().iter().map(|d| d.solution_dimension).collect();
    out.push(CheckRecord::boolean(
        tag("intertwiner_solution_dimension", p),
        dims.iter().all(|&k| k == 1),
        format!("{dims:?}"),
        "all 1",
    ));
    let tr = trace_a(&module, &data, bound);
    out.push(CheckRecord::series(
        tag("trace_a_vs_localization", p),
        tr.clone(),
        localization_partition_function(p, bound, &ledger.localization),
    ));
    let chi = intertwiner_character(&module, &data, bound);
    let spec = CMOperatorSpec::new(p.clone(), bound, ledger.calogero, ledger.eta_scale);
    let kirillov = solve_eigenfunction(&spec).and_then(|y| y.y.body.try_mul(&inv_delta(n, bound)));
    out.push(CheckRecord::series(tag("intertwiner_character", p), chi.clone(), kirillov));
    let dm = weyl_delta(n, bound).pow_rational(&-p.m.clone());
    let chain = chi.clone().and_then(|c| dm.and_then(|d| c.try_mul(&d)));
    out.push(CheckRecord::series(tag("chain_identity", p), chain, tr.clone()));
    let via_g = chi.and_then(|c| ev_g_inverse(&smodule_vacuum(n), &p.m, n, bound).and_then(|e| c.try_mul(&e)));
    out.push(CheckRecord::series(tag("ev_g_inverse_chain", p), via_g, tr));
    out
}

/// `C|_{H_d} - C|_{H_0} = (1 + c/n)|d|` on every basis vector of degree `<= bound`.
pub fn energy_check(module: &VermaModule, bound: u32) -> CheckRecord {
    let n = module.n();
    let name = format!("energy_differences[n={n}]");
    match energy_differences(module, bound) {
        Ok(bad) => CheckRecord::boolean(name, bad.is_empty(), bad.join("; "), ""),
        Err(e) => CheckRecord::error(name, e),
    }
}

fn energy_differences(module: &VermaModule, bound: u32) -> laumon::Result<Vec<String>> {
    let n = module.n();
    let vac = PBWMonomial::vacuum();
    let c0 = energy_apply(module, &VermaVector::vacuum())?.coeff(&vac);
    let slope = ExactScalar::one() + module.central_charge() / ExactScalar::int(n as i64);
    let mut bad = Vec::new();
    for d in exponents_upto(n, bound) {
        for u in pbw_basis(n, &d) {
            let diff = energy_apply(module, &VermaVector::basis(u.clone()))?.coeff(&u) - &c0;
            let expect = &slope * ExactScalar::int(total_degree(&d) as i64);
            if diff != expect {
                bad.push(format!("{u:?}: {diff} vs {expect}"));
            }
        }
    }
    Ok(bad)
}

fn random_unit_series<R: Rng>(rng: &mut R) -> TruncatedSeries {
    let n = rng.random_range(1..=3usize);
    let bound = if n == 3 { 3 } else { 4 };
    let mut s = TruncatedSeries::one(n, bound);
    for e in exponents_upto(n, bound).into_iter().skip(1) {
        s.add_term(e, random::rational(rng));
    }
    s
}

fn law<F>(name: &str, draws: usize, seed: u64, mut check: F) -> CheckRecord
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> laumon::Result<Option<String>>,
{
    let mut rng = random::rng(seed);
    for k in 0..draws {
        match check(&mut rng) {
            Ok(None) => {}
            Ok(Some(detail)) => return CheckRecord::boolean(name, false, format!("draw {k}: {detail}"), ""),
            Err(e) => return CheckRecord::error(name, e),
        }
    }
    CheckRecord::boolean(name, true, format!("{draws} draws"), format!("{draws} draws"))
}

fn mismatch(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<String> {
    (a != b).then(|| format!("{a} != {b}"))
}

/// Pentagonal numbers plus ring, inverse and power laws on seeded random series.
pub fn series_suite(seed: u64) -> Vec<CheckRecord> {
    let mut pent = TruncatedSeries::zero(1, 10);
    for k in -3i64..=3 {
        let e = k * (3 * k - 1) / 2;
        if e <= 10 {
            pent.add_term(vec![e as u32], ExactScalar::int(if k % 2 == 0 { 1 } else { -1 }));
        }
    }
    let draws = 20;
    let triple = |rng: &mut rand_chacha::ChaCha8Rng| {
        let a = random_unit_series(rng);
        let b0 = random::nonzero_rational(rng);
        let b = random_series_like(rng, &a, b0);
        let c0 = random::rational(rng);
        let c = random_series_like(rng, &a, c0);
        (a, b, c)
    };
    vec![
        CheckRecord::series("pentagonal[n=1,D=10]", Ok::<_, laumon::Error>(weyl_delta(1, 10)), Ok(pent)),
        law("series_mul_laws", draws, seed, |rng| {
            let (a, b, c) = triple(rng);
            let ab_c = a.try_mul(&b)?.try_mul(&c)?;
            let a_bc = a.try_mul(&b.try_mul(&c)?)?;
            Ok(mismatch(&ab_c, &a_bc).or_else(|| mismatch(&a.try_mul(&b).ok()?, &b.try_mul(&a).ok()?)))
        }),
        law("series_inv_laws", draws, seed + 1, |rng| {
            let (a, b, _) = triple(rng);
            let one = TruncatedSeries::one(a.n(), a.bound());
            let ab_inv = a.try_mul(&b)?.inv()?;
            Ok(mismatch(&a.try_mul(&a.inv()?)?, &one).or(mismatch(&ab_inv, &a.inv()?.try_mul(&b.inv()?)?)))
        }),
        law("series_pow_laws", draws, seed + 2, |rng| {
            let a = random_unit_series(rng);
            let (p, r) = (random::rational(rng), random::rational(rng));
            let lhs = a.pow_rational(&p)?.try_mul(&a.pow_rational(&r)?)?;
            let half = a.pow_rational(&ExactScalar::ratio(1, 2))?;
            Ok(mismatch(&lhs, &a.pow_rational(&(&p + &r))?).or(mismatch(&half.try_mul(&half)?, &a)))
        }),
        law("rational_vs_integer_power", draws, seed + 3, |rng| {
            let a = random_unit_series(rng);
            let k = rng.random_range(-3..=4i32);
            let mut direct = TruncatedSeries::one(a.n(), a.bound());
            let base = if k < 0 { a.inv()? } else { a.clone() };
            for _ in 0..k.unsigned_abs() {
                direct = direct.try_mul(&base)?;
            }
            Ok(mismatch(&a.pow_rational(&ExactScalar::int(k as i64))?, &direct))
        }),
    ]
}

fn random_series_like<R: Rng>(rng: &mut R, like: &TruncatedSeries, constant: ExactScalar) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(like.n(), like.bound());
    s.add_term(vec![0; like.n()], constant);
    for e in exponents_upto(like.n(), like.bound()).into_iter().skip(1) {
        s.add_term(e, random::rational(rng));
    }
    s
}

/// Every suite at one parameter point: the `verify` mode.
pub fn verify(p: &EquivParams, bound: u32, ledger: &Ledger, seed: u64) -> Vec<CheckRecord> {
    let mut out = vec![lambda_identity(p), eigen_residual(p, bound, ledger)];
    out.extend(fixed_point_suite(p, bound.min(4)));
    out.extend(degeneration(p, bound, ledger));
    out.push(eigenfunction_agreement(p, bound, ledger));
    out.extend(representation_suite(p, bound.min(2), ledger));
    out.extend(series_suite(seed));
    out
}
