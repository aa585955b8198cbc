//! Frozen values for the catalog manifolds, cross-checked against an
//! independent computer-algebra derivation.

use contact_tensor::catalog::{self, CatalogEntry};
use contact_tensor::classify::{
    check_3d_decomposition, classify, constant_curvature, is_sasakian, phi_symmetry,
    solve_kappa_mu, solve_phi_recurrence, KappaMuStatus, Obstruction, RecurrenceStatus, Scope,
};
use contact_tensor::contact::compute_h;
use contact_tensor::curvature::{nabla_structure_tensors, Geometry};
use contact_tensor::expr::Expr;
use contact_tensor::frame::VectorField;

fn geo(entry: &CatalogEntry) -> Geometry {
    Geometry::compute(&entry.manifold).unwrap()
}

fn p(entry: &CatalogEntry, s: &str) -> Expr {
    entry.manifold.symbols().parse(s).unwrap()
}

/// Vector from 1-based `(component, expr)` pairs.
fn vf(entry: &CatalogEntry, terms: &[(usize, &str)]) -> VectorField {
    let mut v = VectorField::zero(entry.manifold.dim());
    for (k, s) in terms {
        v.0[k - 1] = p(entry, s);
    }
    v
}

fn kmu_at(l: &str, m: &str) -> CatalogEntry {
    let q = |s: &str| {
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        Expr::ratio(a.parse().unwrap(), b.parse().unwrap())
    };
    catalog::build_kmu_frame(q(l), q(m)).unwrap()
}

#[test]
fn chart_example_connection() {
    let e = catalog::build_example_41().unwrap();
    let g = geo(&e);
    let c = g.connection();
    let expected: [[&[(usize, &str)]; 3]; 3] = [
        [&[(2, "-2/x")], &[(1, "2/x")], &[]],
        [&[(3, "-2")], &[], &[(1, "2")]],
        [&[], &[], &[]],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(
                c.get(i, j),
                &vf(&e, expected[i][j]),
                "nabla_e{} e{}",
                i + 1,
                j + 1
            );
        }
    }
}

#[test]
fn chart_example_curvature_and_nullity() {
    let e = catalog::build_example_41().unwrap();
    let g = geo(&e);
    assert_eq!(g.riemann().get(0, 1, 2), &vf(&e, &[(2, "-4/x")]));
    let h = compute_h(&e.manifold, &e.structure).unwrap();
    assert_eq!(h.apply(&VectorField::basis(3, 0)), vf(&e, &[(1, "-1")]));
    assert_eq!(h.apply(&VectorField::basis(3, 1)), vf(&e, &[(2, "1")]));
    let v = solve_kappa_mu(&g, &e.structure, &h);
    assert_eq!(v.status, KappaMuStatus::Inconsistent);
    let w = v.witness.unwrap();
    assert_eq!((w.i, w.j, w.component), (0, 1, 1));
    assert_eq!(w.curvature, vf(&e, &[(2, "-4/x")]));
    assert!(w.kappa_coefficient.is_zero() && w.mu_coefficient.is_zero());
    assert_eq!(constant_curvature(&e.manifold, g.riemann()), None);
}

#[test]
fn kmu_connection_symbolic() {
    let e = catalog::entry("kmu").unwrap();
    let g = geo(&e);
    let c = g.connection();
    let expected: [[&[(usize, &str)]; 3]; 3] = [
        [&[], &[(3, "-mu/2")], &[(2, "mu/2")]],
        [&[(3, "-1-lambda")], &[], &[(1, "1+lambda")]],
        [&[(2, "1-lambda")], &[(1, "lambda-1")], &[]],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(
                c.get(i, j),
                &vf(&e, expected[i][j]),
                "nabla_e{} e{}",
                i + 1,
                j + 1
            );
        }
    }
    // in terms of c2, c3
    let c2 = p(&e, "1 - lambda - mu/2");
    let c3 = p(&e, "1 + lambda - mu/2");
    let half = Expr::ratio(1, 2);
    assert_eq!(
        c.christoffel(2, 1, 0),
        &((&c2 - &c3 - Expr::int(2)) * &half)
    );
    assert_eq!(
        c.christoffel(1, 2, 0),
        &((&c2 - &c3 + Expr::int(2)) * &half)
    );
}

#[test]
fn kmu_curvature_symbolic() {
    let e = catalog::entry("kmu").unwrap();
    let g = geo(&e);
    let r = g.riemann();
    let kappa = p(&e, "1 - lambda^2");
    let mu = p(&e, "mu");
    let lam = p(&e, "lambda");
    let c2 = p(&e, "1 - lambda - mu/2");
    let c3 = p(&e, "1 + lambda - mu/2");
    let quarter = (Expr::int(12) - Expr::int(4) * (&c2 + &c3) - (&c2 - &c3).pow(2).unwrap())
        * Expr::ratio(1, 4);
    assert!((&quarter - (&kappa + &mu)).is_zero());
    assert_eq!(
        r.get(1, 2, 1),
        &VectorField::basis(3, 2).scale(&(&kappa + &mu))
    );
    assert_eq!(
        r.get(1, 2, 2),
        &VectorField::basis(3, 1).scale(&-(&kappa + &mu))
    );
    assert_eq!(
        r.get(1, 0, 0),
        &VectorField::basis(3, 1).scale(&(&kappa + &lam * &mu))
    );
    assert_eq!(
        r.get(2, 0, 0),
        &VectorField::basis(3, 2).scale(&(&kappa - &lam * &mu))
    );

    let h = compute_h(&e.manifold, &e.structure).unwrap();
    let v = solve_kappa_mu(&g, &e.structure, &h);
    assert_eq!(v.status, KappaMuStatus::Consistent);
    assert_eq!(v.kappa, Some(kappa));
    assert_eq!(v.mu, Some(mu));
    assert!(v.constant_flag);
    assert_eq!(v.kappa_le_one, Some(true));
}

#[test]
fn kmu_nabla_r_symbolic() {
    let e = catalog::entry("kmu").unwrap();
    let g = geo(&e);
    for i in 0..3 {
        assert!(
            g.nabla_r(0, 1, 2, i).is_zero(),
            "first covariant component {i}"
        );
    }
    assert_eq!(
        g.nabla_r(1, 1, 2, 1),
        &vf(&e, &[(1, "2*(1+lambda)^2*(1-lambda+mu/2)")])
    );
    assert_eq!(
        g.nabla_r(2, 1, 2, 2),
        &vf(&e, &[(1, "2*(lambda-1)^2*(1+lambda+mu/2)")])
    );
    // The e2 coefficient is -(1+λ)[(κ+μλ) + (κ+μ)]; there is no e3 part.
    assert_eq!(
        g.nabla_r(1, 1, 2, 0),
        &vf(&e, &[(2, "(1+lambda)^2*(2*lambda-mu-2)")])
    );
    assert_eq!(
        g.nabla_r(1, 1, 2, 0),
        &vf(
            &e,
            &[(2, "-(1+lambda)*((1-lambda^2+mu*lambda) + (1-lambda^2+mu))")]
        )
    );
}

#[test]
fn kmu_structure_derivatives() {
    let e = catalog::entry("kmu").unwrap();
    let g = geo(&e);
    let d = nabla_structure_tensors(&g, &e.structure);
    assert_eq!(d.nabla_xi(1), &vf(&e, &[(3, "-1-lambda")]));
    assert!(d.nabla_xi(0).is_zero());
}

#[test]
fn kmu_half_is_not_sasakian() {
    let e = kmu_at("1/2", "0");
    let g = geo(&e);
    let s = is_sasakian(&g, &e.structure);
    assert!(!s.holds);
    assert_eq!(s.witness.unwrap().indices, vec![1, 0]);
    let h = compute_h(&e.manifold, &e.structure).unwrap();
    let v = solve_kappa_mu(&g, &e.structure, &h);
    assert_eq!(v.kappa, Some(Expr::ratio(3, 4)));
    assert_eq!(v.mu, Some(Expr::zero()));
}

#[test]
fn kmu_half_symmetry_and_recurrence() {
    let e = kmu_at("1/2", "0");
    let g = geo(&e);
    let c = &e.structure;
    let (report, _) = classify(&g, c).unwrap();
    assert!(!report.locally_symmetric.holds);
    let w = report.locally_symmetric.witness.unwrap();
    assert_eq!(w.indices, vec![1, 0, 1, 1]);
    assert_eq!(w.value, vf(&e, &[(3, "-9/4")]));
    // 2(1+λ)²(1-λ+μ/2) at λ = 1/2, μ = 0
    assert_eq!(g.nabla_r(1, 1, 2, 1), &vf(&e, &[(1, "9/4")]));

    let ps = phi_symmetry(&g, c, Scope::Global);
    assert!(!ps.holds);
    let pw = ps.witness.unwrap();
    assert_eq!(pw.indices, vec![1, 0, 1, 1]);
    assert_eq!(pw.value, vf(&e, &[(3, "9/4")]));
    assert!(phi_symmetry(&g, c, Scope::Local).holds);

    let rec = solve_phi_recurrence(&g, c, Scope::Global);
    assert_eq!(rec.status, RecurrenceStatus::NotRecurrent);
    match rec.obstruction.unwrap() {
        Obstruction::Component {
            w,
            i,
            j,
            k,
            l,
            lhs,
            curvature,
            a_w,
        } => {
            assert_eq!((w, i, j, k, l), (1, 0, 1, 1, 2));
            assert_eq!(lhs, Expr::ratio(9, 4));
            assert!(curvature.is_zero());
            assert_eq!(a_w, Some(Expr::zero()));
        }
        other => panic!("unexpected {other:?}"),
    }
    // the component singled out by hand is an obstruction too
    assert!(g.riemann().get(1, 2, 0).is_zero());
    let phi = c.phi();
    assert!(!phi.apply(&phi.apply(g.nabla_r(1, 1, 2, 0))).is_zero());

    let local = solve_phi_recurrence(&g, c, Scope::Local);
    assert_eq!(local.status, RecurrenceStatus::NotRecurrent);
    assert_eq!(local.obstruction, Some(Obstruction::OnlyZero));
}

#[test]
fn kmu_flat_point() {
    let e = kmu_at("1", "0");
    let g = geo(&e);
    let (report, _) = classify(&g, &e.structure).unwrap();
    assert!(report.flat);
    assert_eq!(report.constant_curvature, Some(Expr::zero()));
    assert_eq!(
        report.phi_recurrent.status,
        RecurrenceStatus::TriviallyRecurrent
    );
    assert_eq!(report.phi_recurrent.a.as_ref(), Some(e.structure.eta()));
    assert!(report.implication_chain_holds());
}

#[test]
fn sphere() {
    let e = catalog::build_sasakian_sphere().unwrap();
    let g = geo(&e);
    let (report, h) = classify(&g, &e.structure).unwrap();
    assert!(h.operator().is_zero());
    assert!(report.contact_valid);
    assert!(report.sasakian.holds);
    assert_eq!(report.constant_curvature, Some(Expr::one()));
    assert_eq!(g.ricci().scalar, Expr::int(6));
    assert!(report.locally_symmetric.holds);
    assert_eq!(report.kappa_mu.status, KappaMuStatus::Underdetermined);
    assert_eq!(report.kappa_mu.kappa, Some(Expr::one()));
    assert_eq!(report.kappa_mu.mu, None);
    for rec in [&report.phi_recurrent, &report.locally_phi_recurrent] {
        assert_eq!(rec.status, RecurrenceStatus::NotRecurrent);
        assert_eq!(rec.obstruction, Some(Obstruction::OnlyZero));
    }
    let d = nabla_structure_tensors(&g, &e.structure);
    assert_eq!(d.nabla_xi(1), &vf(&e, &[(3, "-1")]));
}

#[test]
fn flat_fixture() {
    let e = catalog::build_flat_euclidean(5).unwrap();
    let g = geo(&e);
    let (report, _) = classify(&g, &e.structure).unwrap();
    assert!(!report.contact_valid);
    assert!(report.flat && report.phi_symmetric.holds && report.locally_phi_symmetric.holds);
    assert!(!report.sasakian.holds);
    assert_eq!(report.kappa_mu.status, KappaMuStatus::Underdetermined);
    assert_eq!(report.kappa_mu.kappa, Some(Expr::zero()));
    assert_eq!(
        report.phi_recurrent.status,
        RecurrenceStatus::TriviallyRecurrent
    );
    assert!(check_3d_decomposition(&e.manifold, g.riemann(), g.ricci()).is_err());
}

#[test]
fn decomposition_detects_corruption() {
    for e in [
        catalog::build_example_41().unwrap(),
        catalog::entry("kmu").unwrap(),
        catalog::build_flat_euclidean(3).unwrap(),
    ] {
        let g = geo(&e);
        assert_eq!(
            check_3d_decomposition(&e.manifold, g.riemann(), g.ricci()),
            Ok(None),
            "{}",
            e.id
        );
        let mut bad = g.ricci().clone();
        let s11 = bad.ricci.get(0, 0) + &Expr::one();
        bad.ricci.set(0, 0, s11);
        assert!(check_3d_decomposition(&e.manifold, g.riemann(), &bad)
            .unwrap()
            .is_some());
    }
}

#[test]
fn sweep() {
    for l in ["1/4", "1/2", "1", "3/2"] {
        for m in ["-1", "0", "1", "2"] {
            let e = kmu_at(l, m);
            let g = geo(&e);
            let (r, _) = classify(&g, &e.structure).unwrap();
            let special = l == "1" && m == "0";
            assert_eq!(r.flat, special, "({l},{m})");
            assert_eq!(r.locally_symmetric.holds, special, "({l},{m})");
            assert_eq!(r.phi_symmetric.holds, special, "({l},{m})");
            assert!(r.locally_phi_symmetric.holds, "({l},{m})");
            assert_eq!(
                r.phi_recurrent.status != RecurrenceStatus::NotRecurrent,
                special,
                "({l},{m})"
            );
            assert!(r.implication_chain_holds());
        }
    }
}
