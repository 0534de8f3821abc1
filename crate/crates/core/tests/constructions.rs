mod common;

use flatspan::constructions::{
    bichromatic_lower_construction, erdos_grid_2d, planted_instance, purdy_counterexample,
    theta_mk_construction, BichromaticParams, PlantKind,
};
use flatspan::fit::fit_loglog;
use flatspan::spans::max_cover_plane_or_two_lines;
use flatspan::{count_bichromatic, validate_vertices};

#[test]
fn parallel_pencil_has_no_vertices() {
    let g = erdos_grid_2d(1, 7).unwrap();
    assert_eq!(g.lines.len(), 7);
    assert!(g.vertices.is_empty());
    assert_eq!(g.incidences, 0);
}

#[test]
fn erdos_grid_incidences_are_exact() {
    for (r, s) in [(2, 2), (2, 4), (3, 9), (4, 16)] {
        let g = erdos_grid_2d(r, s).unwrap();
        let a = g.to_arrangement();
        let (red, _) = common::naive_incidences(&a);
        assert_eq!(red, g.incidences);
        assert!(validate_vertices(&a).all_vertices);
        for (v, &deg) in g.vertices.iter().zip(&g.vertex_degrees) {
            let on = g
                .lines
                .iter()
                .filter(|l| common::on_row(&l.constraints()[0], v))
                .count();
            assert_eq!(on, deg);
            assert!(deg >= 2);
        }
    }
}

#[test]
fn erdos_sweep_grows_like_four_thirds() {
    let mut series = Vec::new();
    for r in 2..=6u32 {
        let g = erdos_grid_2d(r, r * r).unwrap();
        let n = g.lines.len() as f64;
        let m = g.vertices.len() as f64;
        assert!((1.0..=4.0).contains(&(m / n)), "m = {m}, n = {n}");
        series.push((n, g.incidences as f64));
    }
    let slope = fit_loglog(&series).unwrap().slope;
    assert!((slope - 4.0 / 3.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn bichromatic_expected_count_matches() {
    for (d, n, k, m) in [(3, 8, 4, 16), (3, 12, 5, 30), (4, 10, 4, 200)] {
        let c = bichromatic_lower_construction(&BichromaticParams { d, n, k, m, c0: 1 }).unwrap();
        let report = count_bichromatic(&c.arrangement).unwrap();
        assert_eq!(report.red_incidences, c.expected_red_incidences);
        assert_eq!(c.arrangement.k(), k);
        assert!(c.arrangement.n() <= n);
    }
    let too_few = BichromaticParams { d: 3, n: 8, k: 4, m: 2, c0: 1 };
    assert!(bichromatic_lower_construction(&too_few).is_err());
}

#[test]
fn theta_mk_rejects_k_above_n() {
    assert!(theta_mk_construction(3, 6, 7, 2).is_err());
}

#[test]
fn purdy_generator_is_deterministic() {
    let a = purdy_counterexample(4, 3, 5).unwrap();
    let b = purdy_counterexample(4, 3, 5).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.points.len(), 9);
    for (i, line) in a.lines.iter().enumerate() {
        for p in &a.points[i * 3..(i + 1) * 3] {
            assert!(line.contains(p).unwrap());
        }
    }
    assert!(purdy_counterexample(4, 1, 0).is_err());
}

#[test]
fn planted_instances_meet_the_hypothesis_usually() {
    let mut held = 0;
    for seed in 0..10 {
        let pts = planted_instance(14, 4, PlantKind::SkewLines, seed).unwrap();
        assert_eq!(pts.len(), 14);
        let cover = max_cover_plane_or_two_lines(&pts).unwrap();
        assert!(cover.skew_pair.covered_count >= 10);
        if cover.max_plane_or_skew_lines() <= 10 {
            held += 1;
        }
    }
    assert!(held >= 8, "{held}/10");
}
