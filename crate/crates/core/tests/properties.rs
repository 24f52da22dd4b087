use proptest::prelude::*;
use twoway_core::attacks::{
    attack_from_class, eve_cm, physical_region_grid, AttackClass, AttackParams,
};
use twoway_core::protocol::{total_cm, total_cm_circuit, ProtocolParams};
use twoway_core::rates::{
    asymptotic_total_spectrum, conditional_spectrum_asymptotic, holevo_asymptotic,
    keyrate_asymptotic, mutual_information_asymptotic,
};
use twoway_core::security::{threshold_omega, ThresholdOutcome, RESIDUAL_TOL};
use twoway_gaussian::symplectic_spectrum;

fn physical_attack() -> impl Strategy<Value = AttackParams> {
    (1.0f64..8.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(omega, x, y)| AttackParams {
            omega,
            g: x * omega,
            g_prime: y * omega,
        })
        .prop_filter("physical", AttackParams::is_physical)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_quadrature_correlations_leaves_rate_unchanged(t in 0.02f64..0.98, a in physical_attack()) {
        let swapped = AttackParams { g: a.g_prime, g_prime: a.g, ..a };
        let (s, s2) = (asymptotic_total_spectrum(t, &a, 1e6).unwrap(), asymptotic_total_spectrum(t, &swapped, 1e6).unwrap());
        let mut nu = [s.nu1, s.nu2];
        let mut nu2 = [s2.nu1, s2.nu2];
        nu.sort_by(f64::total_cmp);
        nu2.sort_by(f64::total_cmp);
        prop_assert!(close(nu[0], nu2[0], 1e-10) && close(nu[1], nu2[1], 1e-10));
        let (c, c2) = (conditional_spectrum_asymptotic(t, &a, 1e6).unwrap(), conditional_spectrum_asymptotic(t, &swapped, 1e6).unwrap());
        prop_assert!(close(c.nubar1, c2.nubar1, 1e-10));
        let (m, m2) = (mutual_information_asymptotic(t, &a, 1e6).unwrap(), mutual_information_asymptotic(t, &swapped, 1e6).unwrap());
        prop_assert!(close(m.sigma * m.sigma_prime, m2.sigma * m2.sigma_prime, 1e-10));
        prop_assert!((keyrate_asymptotic(t, &a).unwrap() - keyrate_asymptotic(t, &swapped).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn physicality_is_symmetric(a in physical_attack()) {
        let swapped = AttackParams { g: a.g_prime, g_prime: a.g, ..a };
        let flipped = AttackParams { g: -a.g, g_prime: -a.g_prime, ..a };
        let nu = symplectic_spectrum(&eve_cm(&a).unwrap()).unwrap();
        for b in [swapped, flipped] {
            prop_assert!(b.is_physical());
            let other = symplectic_spectrum(&eve_cm(&b).unwrap()).unwrap();
            for (x, y) in nu.iter().zip(other.iter()) {
                prop_assert!(close(*x, *y, 1e-9));
            }
        }
    }

    #[test]
    fn extremal_attacks_saturate_physicality(omega in 1.0f64..50.0) {
        for c in [AttackClass::EprPos, AttackClass::EprNeg, AttackClass::SepSymPos, AttackClass::SepSymNeg] {
            let v = eve_cm(&attack_from_class(c, omega).unwrap()).unwrap();
            prop_assert!((symplectic_spectrum(&v).unwrap().min() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn rate_does_not_depend_on_modulation(t in 0.02f64..0.98, a in physical_attack()) {
        let at = |mu: f64| mutual_information_asymptotic(t, &a, mu).unwrap().i_ab - holevo_asymptotic(t, &a, mu).unwrap();
        prop_assert!((at(1e5) - at(1e7)).abs() <= 1e-9);
    }

    #[test]
    fn holevo_information_is_nonnegative(t in 0.02f64..0.98, a in physical_attack()) {
        let chi = holevo_asymptotic(t, &a, 1e6).unwrap();
        prop_assert!(chi >= -1e-9);
        let i_ab = mutual_information_asymptotic(t, &a, 1e6).unwrap().i_ab;
        prop_assert!(keyrate_asymptotic(t, &a).unwrap() <= i_ab + 1e-9);
    }

    #[test]
    fn threshold_is_a_root(t in 0.3f64..0.99, k in 0usize..3) {
        let class = [AttackClass::Collective, AttackClass::SepSymNeg, AttackClass::EprPos][k];
        if let Ok(ThresholdOutcome::Threshold(w)) = threshold_omega(t, class) {
            let r = keyrate_asymptotic(t, &attack_from_class(class, w).unwrap()).unwrap();
            prop_assert!(r.abs() <= RESIDUAL_TOL, "R({t}, {w}) = {r}");
        }
    }

    #[test]
    fn closed_form_matches_circuit(
        t in 0.01f64..0.99, eta in 0.01f64..0.99, mu_b in 1.0f64..50.0, mu_a in 1.0f64..50.0, a in physical_attack(),
    ) {
        let p = ProtocolParams::new(t, eta, mu_b, mu_a).unwrap();
        let diff = (total_cm(&p, &a).unwrap().matrix() - total_cm_circuit(&p, &a).unwrap().matrix()).amax();
        prop_assert!(diff <= 1e-10);
    }
}

#[test]
fn physical_grid_is_symmetric_as_a_set() {
    for (omega, step) in [(1.5, 0.1), (2.0, 0.25), (3.0, 0.2)] {
        let grid = physical_region_grid(omega, step).unwrap();
        let key = |g: f64, gp: f64| ((g / step).round() as i64, (gp / step).round() as i64);
        let set: std::collections::HashSet<_> = grid.iter().map(|a| key(a.g, a.g_prime)).collect();
        for a in &grid {
            assert!(
                set.contains(&key(a.g_prime, a.g)),
                "swap of ({}, {}) missing",
                a.g,
                a.g_prime
            );
            assert!(
                set.contains(&key(-a.g, -a.g_prime)),
                "negation of ({}, {}) missing",
                a.g,
                a.g_prime
            );
        }
    }
}
