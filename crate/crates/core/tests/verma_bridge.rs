use laumon::calogero::{solve_eigenfunction, CMOperatorSpec};
use laumon::conventions::{Ledger, Normalization};
use laumon::geometry::{localization_partition_function, EquivParams};
use laumon::scalar::q;
use laumon::series::weyl_delta;
use laumon::verma::{
    apply_b, check_vertex_relations, ev_g_inverse, intertwiner_character, operator_a, pbw_basis, smodule_vacuum,
    solve_intertwiner, trace_a, PBWMonomial, SModVector, VermaModule, VermaVector,
};
use laumon::{ExactScalar, TruncatedSeries};

fn p1() -> EquivParams {
    EquivParams::new(vec![q(2, 7)], q(3, 5), q(2, 1)).unwrap()
}

fn p2(m: ExactScalar) -> EquivParams {
    EquivParams::new(vec![q(1, 3), q(-5, 11)], q(7, 9), m).unwrap()
}

fn trace_vs_localization(p: &EquivParams, bound: u32, norm: Normalization) -> (TruncatedSeries, TruncatedSeries) {
    let ledger = Ledger::default();
    let module = VermaModule::new(p, norm);
    let data = solve_intertwiner(&module, &p.m, bound as usize).unwrap();
    let tr = trace_a(&module, &data, bound).unwrap();
    let z = localization_partition_function(p, bound, &ledger.localization).unwrap();
    (tr, z)
}

#[test]
fn trace_of_a_matches_localization() {
    let (tr, z) = trace_vs_localization(&p1(), 3, Normalization::Geometric);
    assert_eq!(tr, z);
    for m in [q(2, 1), q(1, 2)] {
        let (tr, z) = trace_vs_localization(&p2(m), 2, Normalization::Geometric);
        assert_eq!(tr, z);
    }
}

#[test]
fn standard_cocycle_disagrees_with_geometry() {
    let (tr, z) = trace_vs_localization(&p1(), 1, Normalization::Standard);
    assert_ne!(tr, z);
    assert_eq!(z.coeff(&[1]), q(13, 1));
    assert_eq!(tr.coeff(&[1]), q(11, 2));
}

#[test]
fn character_of_intertwiner_matches_eigenfunction() {
    for p in [p1(), p2(q(2, 1)), p2(q(1, 2))] {
        let n = p.n;
        let bound = 2;
        let module = VermaModule::new(&p, Normalization::Geometric);
        let data = solve_intertwiner(&module, &p.m, bound).unwrap();
        let chi = intertwiner_character(&module, &data, bound as u32).unwrap();
        let ledger = Ledger::default();
        let spec = CMOperatorSpec::new(p.clone(), bound as u32, ledger.calogero, ledger.eta_scale);
        let y = solve_eigenfunction(&spec).unwrap();
        let expect = y.y.body.try_mul(&weyl_delta(n, bound as u32).inv().unwrap()).unwrap();
        assert_eq!(chi, expect);

        // chain: delta^{-m} ev(chi) = Tr(A z), and ev g^{-1} of the weight-zero line is delta^{-m}
        let dm = weyl_delta(n, bound as u32).pow_rational(&-p.m.clone()).unwrap();
        let tr = trace_a(&module, &data, bound as u32).unwrap();
        assert_eq!(chi.try_mul(&dm).unwrap(), tr);
        let ev = ev_g_inverse(&smodule_vacuum(n), &p.m, n, bound as u32).unwrap();
        assert_eq!(ev, dm);
    }
}

#[test]
fn ev_g_inverse_examples() {
    assert_eq!(ev_g_inverse(&smodule_vacuum(2), &q(0, 1), 2, 3).unwrap(), TruncatedSeries::one(2, 3));
    let dm = weyl_delta(2, 3).pow_rational(&q(-2, 1)).unwrap();
    assert_eq!(ev_g_inverse(&smodule_vacuum(2), &q(2, 1), 2, 3).unwrap(), dm);
    // direct substitution: G_1 = 1/((1-z1)(1-z1z2)...), G_2 likewise; offset (1,-1), m=1
    let s: SModVector = [(vec![1, -1], q(1, 1))].into_iter().collect();
    let got = ev_g_inverse(&s, &q(1, 1), 2, 2).unwrap();
    let row = |first: Vec<u32>, second: Vec<u32>| {
        let mut f = TruncatedSeries::one(2, 2);
        f.add_term(first, q(-1, 1));
        let mut g = TruncatedSeries::one(2, 2);
        g.add_term(second, q(-1, 1));
        (&f * &g).inv().unwrap()
    };
    let g1 = row(vec![1, 0], vec![1, 1]);
    let expect = &g1 * &g1;
    assert_eq!(got, expect);
}

#[test]
fn a_at_m_zero_is_b() {
    let p = p2(q(0, 1));
    let module = VermaModule::new(&p, Normalization::Standard);
    let data = solve_intertwiner(&module, &p.m, 2).unwrap();
    for d in laumon::series::exponents_upto(2, 2) {
        for u in pbw_basis(2, &d) {
            let v = VermaVector::basis(u);
            assert_eq!(operator_a(&module, &data, &v, 2).unwrap(), apply_b(&module, &v).truncate(2));
        }
    }
    // the geometric evaluation module is not trivial at m = 0, but only off-diagonal blocks move
    for norm in [Normalization::Standard, Normalization::Geometric] {
        let module = VermaModule::new(&p, norm);
        let data = solve_intertwiner(&module, &p.m, 2).unwrap();
        let tr = trace_a(&module, &data, 2).unwrap();
        assert_eq!(tr, weyl_delta(2, 2).inv().unwrap());
        let tr_b = laumon::verma::graded_trace(2, 2, |u| Ok(apply_b(&module, &VermaVector::basis(u.clone())))).unwrap();
        assert_eq!(tr_b, tr);
    }
}

#[test]
fn a_fixes_vacuum_up_to_lower_terms() {
    let p = p2(q(2, 1));
    let module = VermaModule::new(&p, Normalization::Geometric);
    let data = solve_intertwiner(&module, &p.m, 2).unwrap();
    let av = operator_a(&module, &data, &VermaVector::vacuum(), 2).unwrap();
    assert_eq!(av.coeff(&PBWMonomial::vacuum()), q(1, 1));
    assert!(av.terms().len() > 1);
    assert!(operator_a(&module, &data, &VermaVector::vacuum(), 3).is_err());
}

#[test]
fn vertex_relations_hold() {
    let p = p2(q(2, 1));
    let module = VermaModule::new(&p, Normalization::Geometric);
    let report = check_vertex_relations(&module, &p.m, 2).unwrap();
    assert!(report.passed(), "{:?}", report.failures.first());
    assert!(report.checked > 0);
    let module = VermaModule::new(&p1(), Normalization::Geometric);
    assert!(check_vertex_relations(&module, &q(1, 2), 3).unwrap().passed());
    let module = VermaModule::new(&p2(q(0, 1)), Normalization::Geometric);
    assert!(check_vertex_relations(&module, &q(0, 1), 2).unwrap().passed());
}

#[test]
fn intertwiner_solution_spaces_are_lines() {
    let p = p2(q(2, 1));
    let module = VermaModule::new(&p, Normalization::Geometric);
    let data = solve_intertwiner(&module, &p.m, 2).unwrap();
    for deg in data.degrees() {
        assert_eq!(deg.solution_dimension, 1, "{:?}", deg.degree);
    }
    assert_eq!(data.vacuum_image().get(&PBWMonomial::vacuum()), Some(&q(1, 1)));
}
