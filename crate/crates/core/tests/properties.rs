use heatlab_core::analysis::{superlevel_membership, two_point_h, witness_from_scan};
use heatlab_core::geometry::{
    convexity_scan, ellipsoid_membership, find_witness_triple_with, midpoint, EllipsoidSpec, PairSampler, Point,
    SweepPlan,
};
use heatlab_core::initial_data::{
    check_admissible_field, combine_u0, make_v, AnnulusDomain, MeridianField, WConstruction,
};
use heatlab_core::solver::{evolve_radial, RadialField, SolverConfig, SpaceTimeField};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, n)
}

proptest! {
    #[test]
    fn midpoint_is_symmetric_and_idempotent(n in 1usize..6, seed in coords(12)) {
        let p = Point::full(seed[..n].to_vec()).unwrap();
        let q = Point::full(seed[6..6 + n].to_vec()).unwrap();
        prop_assert_eq!(midpoint(&p, &q).unwrap(), midpoint(&q, &p).unwrap());
        prop_assert_eq!(midpoint(&p, &p).unwrap(), p);
    }

    #[test]
    fn surface_points_lie_on_the_ellipsoid(b in 0.05..1.0f64, r in 0.1..3.0f64, phi in 0.0..(2.0 * PI)) {
        let e = EllipsoidSpec::new(b, r, 2).unwrap();
        let p = Point::planar(e.surface_point(phi), 2);
        prop_assert!(ellipsoid_membership(&e, &p).unwrap().abs() < 1e-12 * r * r / (b * b));
    }

    #[test]
    fn returned_triples_recheck(b in 0.3..0.95f64, e1 in 0.0..0.3f64, e2 in 0.0..0.3f64) {
        let outer = EllipsoidSpec::new(b, 1.5, 2).unwrap();
        let inner = EllipsoidSpec::new(b, 1.5 - e1, 2).unwrap();
        let plan = SweepPlan { coarse: 48, rounds: 2, window: 2 };
        let s = find_witness_triple_with(1.5 + e2, &outer, &inner, plan).unwrap();
        if let Some(t) = s.triple {
            prop_assert!((t.recheck() - t.clearance).abs() < 1e-10);
            prop_assert!(t.clearance > 0.0);
            prop_assert_eq!(midpoint(&t.x, &t.y).unwrap(), t.z.clone());
            prop_assert!(ellipsoid_membership(&inner, &t.y).unwrap().abs() < 1e-10);
            prop_assert!((t.x.norm() - t.containing_sphere_radius).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn balls_are_never_flagged(r_in in 0.2..1.5f64, extra in 0.0..1.5f64, radii in prop::collection::vec(0.0..3.5f64, 1..6), angles in 3usize..17) {
        let a = r_in + extra;
        let sampler = PairSampler::Polar { radii, angles };
        let out = convexity_scan(|p| a - p[0].hypot(p[1]), r_in, &sampler);
        prop_assert!(out.witness.is_none(), "{:?}", out.witness);
    }
}

fn radial_run() -> &'static SpaceTimeField<RadialField> {
    static RUN: OnceLock<SpaceTimeField<RadialField>> = OnceLock::new();
    RUN.get_or_init(|| {
        let v = make_v(2, 1.25).unwrap();
        evolve_radial(&v, &SolverConfig::new(1e-3, 128, 0, 0.1).with_uniform_snapshots(5)).unwrap()
    })
}

proptest! {
    #[test]
    fn two_point_h_is_symmetric(rx in 1.0..2.0f64, ry in 1.0..2.0f64, ax in 0.0..(2.0 * PI), ay in 0.0..(2.0 * PI), ks in 0usize..6, kt in 0usize..6) {
        let run = radial_run();
        let x = Point::planar([rx * ax.cos(), rx * ax.sin()], 2);
        let y = Point::planar([ry * ay.cos(), ry * ay.sin()], 2);
        let a = two_point_h(run, &x, ks, &y, kt, 2.0).unwrap();
        let b = two_point_h(run, &y, kt, &x, ks, 2.0).unwrap();
        prop_assert_eq!(a.h, b.h);
    }

    #[test]
    fn superposition_keeps_admissibility(eps in 0.0..1.0f64) {
        static W: OnceLock<(MeridianField, heatlab_core::initial_data::RadialProfile)> = OnceLock::new();
        let (w, v) = W.get_or_init(|| {
            let c = WConstruction::new(2, 1.25, 1.5, 0.05).unwrap();
            (c.field(48, 48).unwrap(), make_v(2, 1.25).unwrap())
        });
        prop_assume!(check_admissible_field(w).pass);
        let u0 = combine_u0(eps, v, w).unwrap();
        prop_assert!(check_admissible_field(&u0).pass);
    }

    #[test]
    fn lobed_superlevel_witness_revalidates(depth in 0.3..0.8f64, level in 0.35..0.6f64) {
        // Four lobes: the superlevel set pinches in along the diagonals.
        let field = MeridianField::from_fn(AnnulusDomain::unit(2), 64, 64, |r, th| {
            (2.0 - r) * (1.0 - depth * (2.0 * th).sin().powi(2))
        }).unwrap();
        let set = superlevel_membership(&field, level);
        let out = set.scan(&PairSampler::Polar { radii: (0..12).map(|k| 1.0 + k as f64 / 12.0).collect(), angles: 32 });
        if let Some(hit) = out.witness {
            let w = witness_from_scan(&field, level, 0.0, &hit, 0.0).unwrap();
            prop_assert!(w.holds());
            prop_assert!(w.revalidate(&field));
        }
    }
}

#[test]
fn lobed_superlevel_is_caught() {
    let field = MeridianField::from_fn(AnnulusDomain::unit(2), 64, 64, |r, th| {
        (2.0 - r) * (1.0 - 0.6 * (2.0 * th).sin().powi(2))
    })
    .unwrap();
    let set = superlevel_membership(&field, 0.5);
    let out = set.scan(&PairSampler::Polar {
        radii: (0..12).map(|k| 1.0 + k as f64 / 12.0).collect(),
        angles: 32,
    });
    assert!(out.witness.is_some());
}
