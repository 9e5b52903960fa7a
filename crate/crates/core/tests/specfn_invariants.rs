use friable_core::specfn::{
    adjoint_identity, gamma, j_kappa_closed_form, rho_asymptotic, xi_kappa, EULER_GAMMA,
};
use friable_core::{Kappa, NumericConfig, RhoTable};
use proptest::prelude::*;

fn table(k: f64) -> RhoTable {
    RhoTable::with_defaults(Kappa::new(k).unwrap()).unwrap()
}

#[test]
fn dde_residual_on_mesh() {
    for &k in &[0.5, 1.0, 2.0, 3.0] {
        let t = table(k);
        let kap = Kappa::new(k).unwrap();
        let h = t.step();
        let d = 1e-6;
        let mut i = 1usize;
        loop {
            let u = 1.0 + i as f64 * h;
            i += 1;
            if u + d > t.u_max() {
                break;
            }
            // for fractional κ, ρ'' has an integrable singularity at the
            // integers >= 2 that defeats a symmetric difference quotient
            if !kap.is_integral() && (u - u.round()).abs() < 1e-12 {
                continue;
            }
            let deriv = (t.rho(u + d).unwrap() - t.rho(u - d).unwrap()) / (2.0 * d);
            let lag = t.rho(u - 1.0).unwrap();
            let res = u * deriv + (1.0 - k) * t.rho(u).unwrap() + k * lag;
            assert!(res.abs() <= 1e-6 * lag.max(1.0), "k={k} u={u}: {res:e}");
        }
    }
}

#[test]
fn normalization() {
    for &k in &[0.5, 1.0, 2.0, 3.0] {
        let t = table(k);
        let rel = t.gamma_kappa_norm() / (EULER_GAMMA * k).exp() - 1.0;
        assert!(rel.abs() < 1e-6, "k={k}: {rel:e}");
        assert!((t.lambda(0.0).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn lambda_examples() {
    let t = table(1.0);
    let want = 1.0 - (-EULER_GAMMA).exp();
    assert!((t.lambda(1.0).unwrap() - want).abs() < 1e-8);
    assert!((want - 0.438_541).abs() < 1e-6);
    let h = table(0.5);
    let want = 1.0 - (-EULER_GAMMA / 2.0).exp() * 0.5 / gamma(1.5);
    assert!((h.lambda(0.25).unwrap() - want).abs() < 1e-8);
    let k = Kappa::new(0.5).unwrap();
    assert!((h.j(0.25).unwrap() - j_kappa_closed_form(0.25, k)).abs() < 1e-8);
}

#[test]
fn head_closed_form_and_continuity() {
    for &k in &[0.5, 1.0, 2.0, 3.0] {
        let t = table(k);
        for (i, v) in t.values().iter().enumerate() {
            let u = t.mesh_point(i);
            if u > 1.0 {
                break;
            }
            if u > 0.0 {
                let want = u.powf(k - 1.0) / gamma(k);
                assert!((v - want).abs() <= 1e-12 * want, "k={k} u={u}");
            }
        }
        if k >= 1.0 {
            let l = t.rho(1.0 - 1e-9).unwrap();
            let r = t.rho(1.0 + 1e-9).unwrap();
            assert!((l - r).abs() < 1e-8);
        }
    }
}

#[test]
fn monotone_or_unimodal() {
    for &k in &[0.5, 1.0, 2.0, 3.0] {
        let t = table(k);
        let vals = t.values();
        assert!(vals.iter().all(|v| v.is_finite() && *v >= 0.0));
        let start = ((1.0 - t.u_start()) / t.step()).round() as usize;
        if k <= 1.0 {
            for w in vals[start..].windows(2) {
                assert!(w[1] <= w[0], "k={k}");
            }
        } else {
            let mut changes = 0;
            let mut rising = true;
            for w in vals.windows(2) {
                let up = w[1] > w[0];
                if up != rising {
                    changes += 1;
                    rising = up;
                }
            }
            assert_eq!(changes, 1, "k={k}");
        }
    }
}

#[test]
fn relation_lambda_rho_xi() {
    let cfg = NumericConfig::default();
    for &k in &[1.0, 2.0] {
        let t = table(k);
        let kap = Kappa::new(k).unwrap();
        for i in 0..=30 {
            let u = 10.0 + i as f64;
            let r =
                t.lambda(u).unwrap() * xi_kappa(u, kap, &cfg).unwrap() * (EULER_GAMMA * k).exp()
                    / t.rho(u).unwrap();
            assert!((r - 1.0).abs() <= 2.0 / u, "k={k} u={u}: {r}");
        }
    }
}

#[test]
fn lambda_shift_inequality() {
    let cfg = NumericConfig::default();
    for &k in &[1.0, 2.0] {
        let t = table(k);
        let kap = Kappa::new(k).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=36 {
            let u = 2.0 + 0.5 * i as f64;
            let xi = xi_kappa(u, kap, &cfg).unwrap();
            let mut v = 0.0;
            while v <= u - 0.5 {
                let c = t.lambda(u - v).unwrap() / (t.lambda(u).unwrap() * (v * xi).exp());
                worst = worst.max(c);
                v += 0.25;
            }
        }
        assert!(worst <= 10.0, "k={k}: C = {worst}");
    }
}

#[test]
fn adjoint_identity_holds() {
    let cfg = NumericConfig::default();
    for &k in &[1.0, 2.0] {
        let t = table(k);
        for &u in &[1.5, 2.0, 3.0, 5.0] {
            let a = adjoint_identity(u, &t, &cfg).unwrap();
            assert!(a.residual.abs() <= 1e-7 * a.lhs, "k={k} u={u}");
        }
    }
}

#[test]
fn saddle_asymptotic_tracks_table() {
    let cfg = NumericConfig::default();
    let t = table(1.0);
    let k = Kappa::new(1.0).unwrap();
    let err = |u: f64| (rho_asymptotic(u, k, &cfg).unwrap() / t.rho(u).unwrap() - 1.0).abs();
    assert!(err(10.0) <= 2.0 / 10.0);
    let mut prev = f64::INFINITY;
    for &u in &[10.0, 15.0, 20.0, 30.0, 40.0] {
        let e = err(u);
        assert!(e < prev, "u={u}");
        prev = e;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lambda_plus_j_is_one(k in 0.3f64..3.5, u in 0.0f64..30.0) {
        let t = RhoTable::build(Kappa::new(k).unwrap(), 48.0, 1.0 / 128.0, &NumericConfig::default()).unwrap();
        let l = t.lambda(u).unwrap();
        let j = t.j(u).unwrap();
        prop_assert!((l + j - 1.0).abs() < 1e-15);
        prop_assert!(l > 0.0 && l <= 1.0 + 1e-9);
    }

    #[test]
    fn lambda_decreasing(k in 0.3f64..3.5, u in 0.0f64..30.0, du in 0.01f64..5.0) {
        let t = RhoTable::build(Kappa::new(k).unwrap(), 48.0, 1.0 / 128.0, &NumericConfig::default()).unwrap();
        prop_assert!(t.lambda(u + du).unwrap() < t.lambda(u).unwrap());
    }

    #[test]
    fn xi_solves_its_equation(u in 3.0f64..1e6) {
        let k = Kappa::new(1.0).unwrap();
        let xi = xi_kappa(u, k, &NumericConfig::default()).unwrap();
        prop_assert!(((xi.exp() - 1.0) / (u * xi) - 1.0).abs() < 1e-11);
    }
}
