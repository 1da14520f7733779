use becgap_web::{meanfield_curve_json, threshold_curve_json, vdw_gap_conditions_json};
use serde_json::Value;

#[test]
fn meanfield_curve_switches_branch_at_threshold() {
    let doc: Value = serde_json::from_str(&meanfield_curve_json(1.0, 1.0, 1.0, -2.0, 1.0, 31).unwrap()).unwrap();
    let threshold = doc["threshold"].as_f64().unwrap();
    for p in doc["points"].as_array().unwrap() {
        let mu = p["mu"].as_f64().unwrap();
        assert_eq!(p["condensed"].as_bool().unwrap(), mu >= threshold);
        if mu < threshold {
            assert_eq!(p["condensate_density"].as_f64().unwrap(), 0.0);
        }
    }
}

#[test]
fn threshold_curve_marks_points_outside_the_domain() {
    let doc: Value =
        serde_json::from_str(&threshold_curve_json(0.1, 1.0, 1.0, 1.0, 10.0, 200.0, 20).unwrap()).unwrap();
    let border = doc["validity_border"].as_f64().unwrap();
    for p in doc["points"].as_array().unwrap() {
        let mu = p["mu"].as_f64().unwrap();
        assert_eq!(p["delta_min"].is_null(), mu <= border, "mu = {mu}");
    }
}

#[test]
fn vdw_gap_condition_decreases_with_scale() {
    let doc: Value =
        serde_json::from_str(&vdw_gap_conditions_json(10.0, 1.0, 1.0, 1.0, &[1.0, 0.5, 0.25]).unwrap()).unwrap();
    let gaps: Vec<f64> = doc.as_array().unwrap().iter().map(|p| p["delta_star"].as_f64().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
}

#[test]
fn bad_ranges_are_rejected() {
    assert!(meanfield_curve_json(1.0, 1.0, 1.0, 1.0, -1.0, 10).is_err());
    assert!(meanfield_curve_json(1.0, 1.0, 1.0, -1.0, 1.0, 1).is_err());
    assert!(vdw_gap_conditions_json(1.0, 1.0, 1.0, 1.0, &[]).is_err());
}
