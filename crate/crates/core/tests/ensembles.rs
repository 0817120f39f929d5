use levelstat_core::estimator::{ks_statistic_sorted, ks_two_sample};
use levelstat_core::{
    ks_test, sample_composite, sample_goe_dense, sample_goe_tridiagonal, sample_poisson_levels,
    superpose, EnsembleKind, EnsembleSpec, RngStream, TheoryDist,
};

fn semicircle_cdf(x: f64, radius: f64) -> f64 {
    let t = (x / radius).clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / std::f64::consts::PI
}

#[test]
fn dense_goe_follows_the_semicircle() {
    let dim = 400;
    let s = sample_goe_dense(dim, &RngStream::new(11)).unwrap();
    // off-diagonal variance 1/2 puts the edge at sqrt(2 dim)
    let radius = (2.0 * dim as f64).sqrt();
    let d = ks_statistic_sorted(s.levels(), |x| semicircle_cdf(x, radius));
    assert!(d < 0.05, "d = {d}");
}

#[test]
fn dense_goe_nearest_neighbour_ratios() {
    let s = sample_goe_dense(1000, &RngStream::new(3)).unwrap();
    let r = s.ratios(1).unwrap();
    let ks = ks_test(&r, &TheoryDist::wigner_ratio(1.0).unwrap()).unwrap();
    assert!(ks.d < 0.05, "d = {}", ks.d);
}

#[test]
fn tridiagonal_and_dense_models_agree() {
    let dim = 2000;
    let base = RngStream::new(2024);
    let mut dense = Vec::new();
    let mut tri = Vec::new();
    for i in 0..10 {
        dense.extend_from_slice(sample_goe_dense(dim, &base.substream(2 * i)).unwrap().levels());
        tri.extend_from_slice(sample_goe_tridiagonal(dim, &base.substream(2 * i + 1)).unwrap().levels());
    }
    dense.sort_by(f64::total_cmp);
    tri.sort_by(f64::total_cmp);
    let d = ks_two_sample(&dense, &tri);
    assert!(d < 0.02, "d = {d}");
}

#[test]
fn poisson_levels_have_unit_mean_spacing() {
    let s = sample_poisson_levels(100_000, &RngStream::new(5)).unwrap();
    let sp = s.spacings(1).unwrap();
    let mean = sp.iter().sum::<f64>() / sp.len() as f64;
    assert!((mean - 1.0).abs() < 0.01);
    let d = ks_statistic_sorted(&{
        let mut v = sp.clone();
        v.sort_by(f64::total_cmp);
        v
    }, |x| 1.0 - (-x).exp());
    assert!(d < 0.01);
}

#[test]
fn composites_are_reproducible_and_sized() {
    let spec = EnsembleSpec::new(EnsembleKind::GoeTridiagonal, 300, 3, 9).unwrap();
    let a = sample_composite(&spec).unwrap();
    let b = sample_composite(&spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 900);
    let other = sample_composite(&EnsembleSpec { seed: 10, ..spec }).unwrap();
    assert_ne!(a.levels(), other.levels());
}

#[test]
fn blocks_are_independent_of_scheduling() {
    let spec = EnsembleSpec::new(EnsembleKind::GoeDense, 50, 4, 1).unwrap();
    let whole = sample_composite(&spec).unwrap();
    let parts: Vec<_> = (0..4).map(|i| spec.sample_block(i).unwrap()).collect();
    assert_eq!(whole.levels(), superpose(&parts).unwrap().levels());
}

#[test]
fn unequal_blocks_are_flagged() {
    let a = sample_poisson_levels(10, &RngStream::new(1)).unwrap();
    let b = sample_poisson_levels(12, &RngStream::new(2)).unwrap();
    assert!(superpose(&[a.clone(), b]).unwrap().label().contains("unequal"));
    assert!(!superpose(&[a.clone(), a]).unwrap().label().contains("unequal"));
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(EnsembleSpec::new(EnsembleKind::GoeDense, 2, 1, 0).is_err());
    assert!(EnsembleSpec::new(EnsembleKind::GoeDense, 10, 0, 0).is_err());
    assert!(superpose(&[]).is_err());
}
