use becgap::bounds::{bound_lba, delta_min, BoundMode, DeltaMin, Interaction};
use becgap::finite_volume::{grand_sums, mode_energies};
use becgap::meanfield::{Branch, MeanFieldModel};
use becgap::perfect::{invert_density, perfect_density, InversionStatus, ThermoState};
use becgap::potentials::{PairPotential, Table};
use becgap::special::bose_function;
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bose_function_derivative_lowers_the_order(s in 1.2f64..4.0, x in -8.0f64..-0.05) {
        let h = 1e-5 * (1.0 + x.abs());
        let numeric = (bose_function(s, x + h).unwrap() - bose_function(s, x - h).unwrap()) / (2.0 * h);
        let exact = bose_function(s - 1.0, x).unwrap();
        prop_assert!(close(numeric, exact, 1e-6), "{numeric} vs {exact}");
    }

    #[test]
    fn bose_function_is_increasing(s in 0.5f64..5.0, x in -30.0f64..-1e-3, dx in 1e-6f64..1.0) {
        let upper = (x + dx).min(-1e-9);
        prop_assert!(bose_function(s, x).unwrap() < bose_function(s, upper).unwrap());
    }

    #[test]
    fn density_inversion_round_trips(nu in 1u32..5, beta in 0.05f64..5.0, mu in -20.0f64..-1e-3) {
        let rho = perfect_density(&ThermoState::new(nu, beta, mu).unwrap()).unwrap();
        let inv = invert_density(nu, beta, rho, 0.0).unwrap();
        prop_assert_eq!(inv.status, InversionStatus::Solved);
        prop_assert!((inv.mu - mu).abs() <= 1e-9 * (1.0 + mu.abs()), "{} vs {mu}", inv.mu);
    }

    #[test]
    fn meanfield_pressure_is_convex_in_mu(
        beta in 0.05f64..2.0,
        delta in 0.0f64..3.0,
        lambda in 0.2f64..5.0,
        offset in -3.0f64..3.0,
    ) {
        let m = MeanFieldModel::new(3, delta, lambda).unwrap();
        let mu = m.threshold(beta).unwrap() + offset;
        let h = 0.05;
        let p = |x: f64| m.thermo(beta, x).unwrap().pressure;
        prop_assert!(p(mu - h) + p(mu + h) - 2.0 * p(mu) >= -1e-12 * p(mu).abs());
    }

    #[test]
    fn meanfield_branches_are_consistent(
        beta in 0.05f64..2.0,
        delta in 0.0f64..3.0,
        lambda in 0.2f64..5.0,
        offset in -3.0f64..3.0,
    ) {
        let m = MeanFieldModel::new(3, delta, lambda).unwrap();
        let t = m.thermo(beta, m.threshold(beta).unwrap() + offset).unwrap();
        match t.branch {
            Branch::BelowThreshold => prop_assert_eq!(t.condensate_density, 0.0),
            Branch::AboveThreshold => prop_assert!(t.condensate_density >= 0.0),
        }
        prop_assert!(t.total_density >= t.condensate_density);
        // Mean-field fluctuations vanish: <N²>/V² = ρ².
        prop_assert!(close(t.n2_over_v2, t.total_density * t.total_density, 1e-12));
    }

    #[test]
    fn finite_volume_density_is_the_mu_derivative(
        beta in 0.5f64..2.0,
        mu in -1.0f64..1.0,
        delta in 0.0f64..2.0,
    ) {
        let side = 3.0;
        let volume = side * side * side;
        let levels = mode_energies(side, 3, 14.0 * 10f64.ln() / beta, delta).unwrap();
        let p = |x: f64| grand_sums(&levels, beta, x, 1.0, volume, 400).unwrap();
        let here = p(mu);
        prop_assert!(here.tail_weight < 1e-12);
        let h = 1e-4;
        let numeric = (p(mu + h).pressure - p(mu - h).pressure) / (2.0 * h);
        prop_assert!(close(numeric, here.total_density, 1e-6), "{numeric} vs {}", here.total_density);
    }

    #[test]
    fn zero_mode_occupation_is_the_gap_derivative(
        beta in 0.5f64..2.0,
        mu in -1.0f64..1.0,
        delta in 0.01f64..2.0,
    ) {
        let side = 3.0;
        let volume = side * side * side;
        let cut = 14.0 * 10f64.ln() / beta;
        let p = |d: f64| grand_sums(&mode_energies(side, 3, cut, d).unwrap(), beta, mu, 1.0, volume, 400).unwrap();
        let h = 1e-4;
        let numeric = (p(delta + h).pressure - p(delta - h).pressure) / (2.0 * h);
        let occupation = p(delta).condensate_density;
        prop_assert!(close(numeric, occupation, 1e-6), "{numeric} vs {occupation}");
    }

    #[test]
    fn minimal_gap_clears_eta(mu_factor in 1.6f64..6.0, beta in 0.05f64..0.5, eta in 0.0f64..2.0) {
        let interaction = Interaction::new(PairPotential::gaussian(1.0, 1.0, 3).unwrap(), 1.0).unwrap();
        let mu = mu_factor * interaction.validity_border(beta, 0.0).unwrap();
        let bound_at = |delta: f64| bound_lba(&interaction.with_gap(delta).unwrap(), beta, mu).unwrap().value;
        match delta_min(&interaction, beta, mu, eta, BoundMode::Lba, 0.0, None).unwrap() {
            DeltaMin::Found { delta, .. } => {
                prop_assert!(bound_at(delta) >= eta - 1e-8 * (1.0 + eta), "bound {} at {delta}", bound_at(delta));
            }
            // The bound saturates at large gaps; a large eta can be out of reach.
            DeltaMin::NotFound { reason } => prop_assert!(bound_at(1e9) < eta, "{reason}"),
        }
    }

    #[test]
    fn tabulated_profile_keeps_monotone_data_monotone(decay in 0.3f64..3.0, x in 0.0f64..6.0, dx in 1e-3f64..1.0) {
        let r: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let v: Vec<f64> = r.iter().map(|&r| (-decay * r * r).exp()).map(|v| if v < 1e-13 { 0.0 } else { v }).collect();
        let table = Table::new(r, v).unwrap();
        prop_assert!(table.eval(x) >= table.eval(x + dx));
        prop_assert!(table.eval(x) >= 0.0);
    }
}

#[test]
fn gapless_condensate_matches_the_linear_law() {
    // Above the gapless threshold ρ₀ = μ/λ - ρ_c.
    let m = MeanFieldModel::new(3, 0.0, 2.0).unwrap();
    for beta in [0.1, 1.0] {
        let rho_c = becgap::perfect::perfect_critical_density(3, beta).unwrap();
        for mu in [3.0 * rho_c, 5.0] {
            let t = m.thermo(beta, mu).unwrap();
            assert!(close(t.condensate_density, mu / 2.0 - rho_c, 1e-12));
        }
    }
}
