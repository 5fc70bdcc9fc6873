use trifactor_web::{fractional, sample_instance, success_curve, MAX_VERTICES};

#[test]
fn full_density_instance_has_factor() {
    let inst = sample_instance("complete_tripartite", 4, 0.0, 1.0, 3).unwrap();
    assert_eq!(inst.parts, Some([4, 4, 4]));
    assert_eq!(inst.edges.len(), 48);
    assert_eq!(inst.status, "factor");
    let mut covered: Vec<usize> = inst.factor.unwrap().into_iter().flatten().collect();
    covered.sort_unstable();
    assert_eq!(covered, (0..12).collect::<Vec<_>>());
}

#[test]
fn empty_sample_has_none() {
    let inst = sample_instance("gnq", 9, 0.7, 0.0, 1).unwrap();
    assert!(inst.edges.is_empty());
    assert_eq!(inst.status, "none");
    assert!(inst.factor.is_none());
}

#[test]
fn curve_is_monotone_with_fixed_ends() {
    let pts = success_curve("superreg_tripartite", 5, 0.8, 12, 8, 7).unwrap();
    assert_eq!(pts.len(), 9);
    assert_eq!(pts[0].successes, 0);
    assert!(pts.windows(2).all(|w| w[0].successes <= w[1].successes));
    assert!(pts.iter().all(|pt| pt.decided == 12));
    assert_eq!(
        success_curve("superreg_tripartite", 5, 0.8, 12, 8, 7).unwrap()[4].successes,
        pts[4].successes
    );
}

#[test]
fn fractional_factor_of_complete_tripartite() {
    let r = fractional("complete_tripartite", 3, 0.0, 3, 0).unwrap();
    assert!((r.objective - 3.0).abs() < 1e-9);
    assert!(r.fractional_factor);
    assert_eq!(r.integral_matching, 3);
}

#[test]
fn rejects_bad_input() {
    assert!(sample_instance("petersen", 5, 0.5, 0.5, 0).is_err());
    assert!(sample_instance("gnq", MAX_VERTICES + 1, 0.5, 0.5, 0).is_err());
    assert!(sample_instance("gnq", 9, 0.5, 1.5, 0).is_err());
    assert!(success_curve("gnq", 9, 0.5, 0, 4, 0).is_err());
}
