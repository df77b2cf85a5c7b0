use barbilian::axioms::{gauge_deviation, similarity_deviation};
use barbilian::{
    apollonius_circle, poincare_disk_distance, sample_dyadic, BarbilianMetric, DiskPoint,
    ExtremaOptions, InfluenceField, Point, Similarity, SourceSet,
};
use proptest::prelude::*;

fn pt(range: f64) -> impl Strategy<Value = Point> {
    (-range..range, -range..range).prop_map(|(x, y)| Point::xy(x, y))
}

fn disk_pt(radius: f64) -> impl Strategy<Value = Point> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(u, t)| {
        let r = radius * u.sqrt();
        Point::xy(r * t.cos(), r * t.sin())
    })
}

fn sites() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(pt(5.0), 2..24).prop_filter("distinct sites", |v| {
        v.iter()
            .enumerate()
            .all(|(i, p)| v[i + 1..].iter().all(|q| p.distance(q) > 1e-6))
    })
}

fn metric(k: SourceSet) -> BarbilianMetric {
    BarbilianMetric::new(k, InfluenceField::Euclidean, ExtremaOptions::default()).unwrap()
}

/// `max over p, q of ln[(pa / pb)(qb / qa)]`, evaluated pair by pair.
fn brute_force(k: &[Point], a: &Point, b: &Point) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for p in k {
        for q in k {
            let v = ((p.distance(a) / p.distance(b)) * (q.distance(b) / q.distance(a))).ln();
            best = best.max(v);
        }
    }
    best
}

fn clear_of(k: &[Point], p: &Point) -> bool {
    k.iter().all(|s| s.distance(p) > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn finite_symmetry_is_exact(k in sites(), a in pt(4.0), b in pt(4.0)) {
        prop_assume!(clear_of(&k, &a) && clear_of(&k, &b));
        let m = metric(SourceSet::finite(k).unwrap());
        prop_assert_eq!(m.distance_value(&a, &b).unwrap(), m.distance_value(&b, &a).unwrap());
        prop_assert_eq!(m.distance_value(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn finite_triangle(k in sites(), a in pt(4.0), b in pt(4.0), c in pt(4.0)) {
        prop_assume!(clear_of(&k, &a) && clear_of(&k, &b) && clear_of(&k, &c));
        let m = metric(SourceSet::finite(k).unwrap());
        let (ab, bc, ac) = (
            m.distance_value(&a, &b).unwrap(),
            m.distance_value(&b, &c).unwrap(),
            m.distance_value(&a, &c).unwrap(),
        );
        prop_assert!(ac <= ab + bc + 1e-12, "{} > {} + {}", ac, ab, bc);
    }

    #[test]
    fn forms_agree_with_brute_force(k in sites(), a in pt(4.0), b in pt(4.0)) {
        prop_assume!(clear_of(&k, &a) && clear_of(&k, &b));
        let oracle = brute_force(&k, &a, &b);
        let m = metric(SourceSet::finite(k).unwrap());
        let new = m.distance_value(&a, &b).unwrap();
        let old = m.distance_1934(&a, &b).unwrap().value;
        let tol = 1e-12 * (1.0 + oracle.abs());
        prop_assert!((new - oracle).abs() <= tol, "{} vs {}", new, oracle);
        prop_assert!((old - oracle).abs() <= tol, "{} vs {}", old, oracle);
    }

    #[test]
    fn circle_symmetry_is_exact(a in disk_pt(0.95), b in disk_pt(0.95)) {
        let m = metric(SourceSet::unit_circle());
        prop_assert_eq!(m.distance_value(&a, &b).unwrap(), m.distance_value(&b, &a).unwrap());
    }

    #[test]
    fn circle_matches_disk(a in disk_pt(0.9), b in disk_pt(0.9)) {
        let m = metric(SourceSet::unit_circle());
        let d = m.distance_value(&a, &b).unwrap();
        let h = poincare_disk_distance(&DiskPoint::new(a).unwrap(), &DiskPoint::new(b).unwrap());
        prop_assert!((d - h).abs() <= 1e-9, "{} vs {}", d, h);
    }

    #[test]
    fn circle_triangle(a in disk_pt(0.9), b in disk_pt(0.9), c in disk_pt(0.9)) {
        let m = metric(SourceSet::unit_circle());
        let (ab, bc, ac) = (
            m.distance_value(&a, &b).unwrap(),
            m.distance_value(&b, &c).unwrap(),
            m.distance_value(&a, &c).unwrap(),
        );
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn gauge_invariance(k in sites(), a in pt(4.0), b in pt(4.0), c0 in -1.0..1.0f64, w in -2.0..2.0f64) {
        prop_assume!(clear_of(&k, &a) && clear_of(&k, &b));
        let m = metric(SourceSet::finite(k).unwrap());
        let dev = gauge_deviation(&m, move |p| (c0 * (w * p.x()).sin() + 0.3 * p.y().cos()).exp(), &[(a, b)]).unwrap();
        prop_assert!(dev <= 1e-12, "{}", dev);
    }

    #[test]
    fn similarity_invariance(
        a in disk_pt(0.9), b in disk_pt(0.9),
        rotation in 0.0..std::f64::consts::TAU, scale in 0.1..10.0f64,
        tx in -5.0..5.0f64, ty in -5.0..5.0f64,
    ) {
        let m = metric(SourceSet::unit_circle());
        let s = Similarity { rotation, scale, translation: vec![tx, ty] };
        let dev = similarity_deviation(&m, &s, &[(a, b)]).unwrap();
        prop_assert!(dev <= 1e-9, "{}", dev);
    }

    #[test]
    fn dyadic_levels_never_decrease(a in disk_pt(0.9), b in disk_pt(0.9)) {
        let k = SourceSet::unit_circle();
        let m = metric(k.clone());
        let mut prev = 0.0;
        for level in 0..8 {
            let s = sample_dyadic(&k, 8, level).unwrap();
            let d = m.distance_over(&s, &a, &b).unwrap().value;
            prop_assert!(d >= prev - 1e-12, "level {}: {} < {}", level, d, prev);
            prev = d;
        }
        prop_assert!(prev <= m.distance_value(&a, &b).unwrap() + 1e-12);
    }

    #[test]
    fn apollonius_pairs_are_degenerate(a in pt(3.0), b in pt(3.0), alpha in 0.2..5.0f64) {
        prop_assume!(a.distance(&b) > 1e-2 && (alpha - 1.0).abs() > 1e-2);
        let c = apollonius_circle(&a, &b, alpha).unwrap();
        let m = metric(SourceSet::Circle(c));
        let r = m.distance(&a, &b).unwrap();
        prop_assert!(r.degenerate);
        prop_assert!(r.value <= 1e-9);
        prop_assert!(m.is_degenerate(&a, &b, 1e-9).unwrap());
    }

    #[test]
    fn degeneracy_verdict_is_sound(k in sites(), a in pt(4.0), b in pt(4.0)) {
        prop_assume!(clear_of(&k, &a) && clear_of(&k, &b) && a != b);
        let m = metric(SourceSet::finite(k).unwrap());
        let r = m.distance(&a, &b).unwrap();
        let tol = m.options().degeneracy_tolerance;
        let excess = r.extrema.max_ratio / r.extrema.min_ratio - 1.0;
        if r.degenerate {
            prop_assert!(excess <= tol * (1.0 + 1e-6));
        } else {
            prop_assert!(excess >= tol * (1.0 - 1e-6));
        }
        prop_assert_eq!(r.degenerate, m.is_degenerate(&a, &b, tol).unwrap());
    }

    #[test]
    fn mirrored_pair_makes_axis_degenerate(x in -3.0..3.0f64, y in 0.1..3.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assume!((a - b).abs() > 1e-3);
        let m = metric(SourceSet::finite(vec![Point::xy(x, y), Point::xy(x, -y)]).unwrap());
        let r = m.distance(&Point::xy(a, 0.0), &Point::xy(b, 0.0)).unwrap();
        prop_assert!(r.degenerate);
        prop_assert_eq!(r.value, 0.0);
    }
}
