use heatlab_core::analysis::*;
use heatlab_core::geometry::{convexity_scan, find_witness_triple, EllipsoidSpec, PairSampler, Point};
use heatlab_core::initial_data::*;
use heatlab_core::solver::*;

#[test]
fn flattened_ellipse_admits_a_triple_and_the_scan_finds_it() {
    let e = EllipsoidSpec::new(0.8, 1.5, 2).unwrap();
    let s = find_witness_triple(1.6, &e, &e).unwrap();
    let t = s.triple.expect("triple exists");
    assert!((t.clearance - 0.0244).abs() < 1e-3, "{}", t.clearance);
    // Indicator of the union of the ball of radius R⁺ and the ellipse.
    let excess = |p: [f64; 2]| (1.6f64.powi(2) - p[0] * p[0] - p[1] * p[1]).max(-e.form(p));
    let pts = |q: &Point| [q.coords[0], q.coords[1]];
    let out = convexity_scan(excess, 1.0, &PairSampler::Points(vec![pts(&t.x), pts(&t.y)]));
    let w = out.witness.expect("scan sees the same gap");
    assert_eq!(w.z, pts(&t.z));
}

#[test]
fn kappa_search_lands_in_range_and_recovers_from_large_starts() {
    let c = choose_kappa(2, 1.25, 1.5, 96, 96, None).unwrap();
    assert!(c.kappa > 1e-6 && c.kappa <= 0.05);
    let big = choose_kappa(2, 1.25, 1.5, 96, 96, Some(0.24)).unwrap();
    assert_eq!(big.attempts[0].0, 0.24);
    assert!(big.report.pass && big.kappa <= 0.24);
}

#[test]
fn superposition_endpoints_are_exact() {
    let v = make_v(2, 1.25).unwrap();
    let w = WConstruction::new(2, 1.25, 1.5, 0.05).unwrap().field(32, 32).unwrap();
    let zero = combine_u0(0.0, &v, &w).unwrap();
    let one = combine_u0(1.0, &v, &w).unwrap();
    assert_eq!(one.values, w.values);
    for i in 0..=32 {
        assert_eq!(zero.at(i, 7), v.value(zero.radius(i)));
    }
}

#[test]
fn lower_bound_holds_in_five_dimensions() {
    let v = make_v(5, 1.5).unwrap();
    assert!(laplacian_lower_bound_check(&v, 5, 1.5, 4096).pass);
    assert!(check_admissible(&make_v(2, 1.25).unwrap()).pass);
}

#[test]
fn v_r_matches_closed_form_for_large_r() {
    let sol = solve_vr(&OdeSolveParams::new(100.0, 2, 4096).unwrap(), &make_h()).unwrap();
    assert!(sol.closed_form_error.unwrap() < 1e-8);
    assert!((sol.profile.value(0.0) - 1.0).abs() < 1e-12 && sol.profile.value(1.0).abs() < 1e-12);
}

#[test]
fn plateau_datum_identities() {
    assert_eq!(choose_r_thm2(1).unwrap().big_r, 16.0);
    let ch = choose_r_thm2(2).unwrap();
    assert!(ch.big_r <= 1024.0);
    let (r, u0) = (ch.big_r, &ch.profile);
    assert!((u0.value(r) - 1.0).abs() < 1e-10 && u0.value(r + 1.0).abs() < 1e-10);
    assert!((u0.laplacian(r + 0.5) - 0.1).abs() < 1e-8);
    assert!(u0.laplacian(r).abs() < 1e-10);
    assert!(u0.d2(r + 0.5) >= 0.1);
}

#[test]
fn two_point_datum_is_harmonic_on_its_plateau() {
    let eps = 0.05;
    let d = make_u0_twopoint(eps, 2).unwrap();
    assert!((d.g.profile.value(1.0) - 1.0 / (2.0 * eps)).abs() < 1e-12);
    assert!(d.g.profile.value(2.0).abs() < 1e-12);
    assert!(d.u0.value(2.0).abs() < 1e-10);
    for k in 0..=10 {
        let r = 1.0 + eps * k as f64 / 10.0;
        assert!(d.u0.laplacian(r).abs() < 1e-8, "{r}");
    }
    let gamma = steady_inverse(2, 0.75) - 1.0;
    assert!((gamma - (2f64.powf(0.25) - 1.0)).abs() < 1e-12);
}

#[test]
fn level_graph_matches_series_root() {
    // u_t = Δu > 0 and u_r < 0 throughout for these coefficients.
    let coeffs = [-0.2, 0.02];
    let (nr, r_start) = (4000, 1.25);
    let cfg = SolverConfig::new(1e-4, nr, 0, 0.05).with_uniform_snapshots(50);
    let run = evolve_radial(&series_oracle_1d(&coeffs, 0.0), &cfg).unwrap();
    let level = series_oracle_1d(&coeffs, 0.0).value(r_start);
    let g = level_graph_with(&run, level, r_start, 0.02).unwrap();
    assert_eq!(g.samples[0], (r_start, 0.0));
    assert!(g.strictly_increasing);
    let root = |r: f64| {
        let (mut lo, mut hi) = (0.0, 0.05);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if series_oracle_1d(&coeffs, mid).value(r) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut checked = 0;
    for &(r, t) in g.samples.iter().skip(1).filter(|s| s.1 < 0.045) {
        assert!((t - root(r)).abs() < 1e-6, "r={r} t={t} root={}", root(r));
        checked += 1;
    }
    assert!(checked > 5);
}

#[test]
fn two_point_h_vanishes_and_signs_on_the_steady_state() {
    let start = discrete_steady_state(AnnulusDomain::unit(2), 512).unwrap();
    let run = evolve_radial_field(start, &SolverConfig::new(0.01, 512, 0, 0.02)).unwrap();
    let x = Point::planar([2f64.sqrt(), 0.0], 2);
    let y = Point::planar([0.0, 2f64.sqrt()], 2);
    assert_eq!(two_point_h(&run, &x, 1, &x, 1, TOL_LEVEL).unwrap().h, 0.0);
    let s = two_point_h(&run, &x, 1, &y, 1, TOL_LEVEL).unwrap();
    assert!(s.h <= 0.0, "{}", s.h);
}

#[test]
fn monitors_catch_a_subharmonic_datum_and_flag_steady_runs() {
    // Δu₀ = −0.2π² sin(πx) < 0 inside.
    let bad = series_oracle_1d(&[0.2], 0.0);
    let rep = monitor_proposition(&evolve_radial(&bad, &SolverConfig::new(1e-3, 256, 0, 0.05).with_uniform_snapshots(5)).unwrap());
    assert!(rep.violations.iter().any(|v| v.kind == ViolationKind::TimeDerivative));
    let steady = discrete_steady_state(AnnulusDomain::unit(2), 256).unwrap();
    let rep = monitor_proposition(&evolve_radial_field(steady, &SolverConfig::new(1e-2, 256, 0, 1.0)).unwrap());
    assert!(rep.stationary && rep.clean());
}

#[test]
fn v_in_three_dimensions_increases_in_time() {
    let v = make_v(3, 1.25).unwrap();
    let run = evolve_radial(&v, &SolverConfig::new(1e-3, 1000, 0, 0.5).with_uniform_snapshots(10)).unwrap();
    let rep = monitor_proposition(&run);
    assert!(rep.clean() && !rep.stationary, "{:?}", rep.violations);
}
