use std::f64::consts::{PI, TAU};

use ccs_duet::geom::{convex_hull, polygon_perimeter};
use ccs_duet::pathfind::{shortest_path_around, Side};
use ccs_duet::samples::{random_instance, random_shapes, Kind, ShapeMix};
use ccs_duet::shape::minkowski_sum;
use ccs_duet::{plan, Angle, CcsShape, Point, RigidTransform, TolerancePolicy};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn point() -> impl Strategy<Value = Point> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn transform() -> impl Strategy<Value = RigidTransform> {
    (0.0..TAU, point(), any::<bool>()).prop_map(|(rotation, translation, flipped)| RigidTransform {
        rotation,
        translation,
        flipped,
    })
}

fn mix(i: u8) -> ShapeMix {
    ShapeMix::ALL[i as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_perimeter_is_rigid_invariant(pts in prop::collection::vec(point(), 3..30), t in transform()) {
        let moved: Vec<Point> = pts.iter().map(|p| t.apply(*p)).collect();
        let a = polygon_perimeter(&convex_hull(&pts));
        let b = polygon_perimeter(&convex_hull(&moved));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a), "{a} vs {b}");
    }

    #[test]
    fn reach_is_centrally_symmetric(seed in any::<u64>(), m in any::<u8>(), a in 0.0..TAU) {
        let (sa, sb) = random_shapes(&mut StdRng::seed_from_u64(seed), mix(m));
        for s in [&sa, &sb] {
            let (r0, r1) = (s.reach(Angle::new(a)), s.reach(Angle::new(a + PI)));
            prop_assert!((r0 - r1).abs() <= 1e-12 * (1.0 + r0));
        }
        let sum = minkowski_sum(&sa, &sb, Point::ORIGIN);
        let want = sa.reach(Angle::new(a)) + sb.reach(Angle::new(a));
        prop_assert!((sum.reach(Angle::new(a)) - want).abs() <= 1e-9);
    }

    #[test]
    fn boxes_overlap_iff_sum_contains(hx in 0.2..2.0f64, hy in 0.2..2.0f64, kx in 0.2..2.0f64, ky in 0.2..2.0f64, d in point()) {
        let sum = minkowski_sum(&CcsShape::rect(hx, hy), &CcsShape::rect(kx, ky), Point::ORIGIN);
        let overlap = d.x.abs() < hx + kx && d.y.abs() < hy + ky;
        let slack = (d.x.abs() - hx - kx).abs().min((d.y.abs() - hy - ky).abs());
        prop_assume!(slack > 1e-9);
        prop_assert_eq!(sum.contains(d, false), overlap);
    }

    #[test]
    fn discs_overlap_iff_sum_contains(r in 0.1..2.0f64, s in 0.1..2.0f64, d in point()) {
        let sum = minkowski_sum(&CcsShape::disc(r), &CcsShape::disc(s), Point::ORIGIN);
        prop_assume!((d.norm() - r - s).abs() > 1e-9);
        prop_assert_eq!(sum.contains(d, false), d.norm() < r + s);
    }

    #[test]
    fn detours_are_no_shorter_than_the_chord(seed in any::<u64>(), m in any::<u8>(), from in point(), to in point(), ccw in any::<bool>()) {
        let tol = TolerancePolicy::default();
        let (sa, sb) = random_shapes(&mut StdRng::seed_from_u64(seed), mix(m));
        let s = minkowski_sum(&sa, &sb, Point::ORIGIN);
        prop_assume!(s.signed_distance(from) > 1e-6 && s.signed_distance(to) > 1e-6);
        let side = if ccw { Side::Ccw } else { Side::Cw };
        let p = shortest_path_around(from, to, &s, side, &tol).unwrap();
        prop_assert!(p.length >= from.dist(to) - 1e-9);
        prop_assert!(p.end().dist(to) < 1e-9);
        for k in 0..=50 {
            let q = p.point_at(p.length * k as f64 / 50.0);
            prop_assert!(s.signed_distance(q) >= -1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plan_length_is_invariant(seed in any::<u64>(), m in any::<u8>(), t in transform()) {
        let tol = TolerancePolicy::default();
        let inst = random_instance(&mut StdRng::seed_from_u64(seed), mix(m), Kind::Any);
        let r = plan(&inst, &tol).unwrap();
        let len = r.length();
        prop_assert!(len >= inst.straight_length() - 1e-9);
        prop_assert!((len - r.lower_bound_ccw.min(r.lower_bound_cw)).abs() <= 1e-6);
        for v in [inst.transformed(&t), inst.swapped(), inst.reversed()] {
            let other = plan(&v, &tol).unwrap().length();
            prop_assert!((other - len).abs() <= 1e-7 * (1.0 + len), "{len} vs {other}");
        }
    }
}
