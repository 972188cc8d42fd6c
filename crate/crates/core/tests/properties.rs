mod common;

use num::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hingeset::cone::{check_cone_condition, complement_of_boundary, r_set, PolytopalCone};
use hingeset::exact::sample_inside_arc;
use hingeset::exact::{int, rat, AffineForm, Direction, Point2, Rational, Vec2};
use hingeset::hinge::{decompose_symmetric, peel_to_hinge, HingeFunction, PosHomCPWL};
use hingeset::planar::{
    check_local_condition, classify_point, cone_to_set, positivity_set, set_equal, PointClass, SetEquality,
};
use hingeset::synth::{synthesize_cone, SynthError};

fn small() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn form() -> impl Strategy<Value = AffineForm> {
    (small(), small(), small())
        .prop_filter("nonconstant", |(a, b, _)| !(a.is_zero() && b.is_zero()))
        .prop_map(|(a, b, c)| AffineForm::new(a, b, c))
}

fn hinge() -> impl Strategy<Value = HingeFunction> {
    ((small(), small(), small()), prop::collection::vec((form(), any::<bool>()), 1..=6)).prop_map(|((a, b, c), ts)| {
        let (plus, minus): (Vec<_>, Vec<_>) = ts.into_iter().partition(|(_, p)| *p);
        HingeFunction::new(
            AffineForm::new(a, b, c),
            plus.into_iter().map(|t| t.0).collect(),
            minus.into_iter().map(|t| t.0).collect(),
        )
    })
}

fn homogeneous_hinge() -> impl Strategy<Value = HingeFunction> {
    hinge().prop_map(|h| {
        let lin = |f: &AffineForm| AffineForm::new(f.a.clone(), f.b.clone(), int(0));
        HingeFunction::new(lin(h.base()), h.plus().iter().map(lin).collect(), h.minus().iter().map(lin).collect())
    })
}

fn point() -> impl Strategy<Value = Point2> {
    (-40i64..=40, 1i64..=8, -40i64..=40, 1i64..=8).prop_map(|(a, b, c, d)| Vec2::new(rat(a, b), rat(c, d)))
}

fn cone() -> impl Strategy<Value = PolytopalCone> {
    any::<u64>().prop_map(|s| common::random_cone(&mut ChaCha8Rng::seed_from_u64(s)))
}

/// Boundary rays, their antipodes, and one direction strictly between each
/// consecutive pair: enough to see every sector of C and of -C.
fn probe_directions(c: &PolytopalCone) -> Vec<Direction> {
    let mut d: Vec<Direction> = c.boundary_rays().into_iter().flat_map(|r| [r, r.neg()]).collect();
    d.extend([Direction::of(1, 0), Direction::of(-1, 0)]);
    d.sort();
    d.dedup();
    let n = d.len();
    let mids: Vec<Direction> = (0..n).map(|k| sample_inside_arc(d[k], d[(k + 1) % n]).unwrap()).collect();
    d.extend(mids);
    d
}

/// The realizability criterion evaluated by enumeration over probe directions.
fn brute_force_realizable(c: &PolytopalCone) -> bool {
    let probes = probe_directions(c);
    let r: Vec<Direction> =
        probes.iter().copied().filter(|&d| c.contains_direction(d) && !c.contains_direction(d.neg())).collect();
    if r.is_empty() {
        return true;
    }
    let b = c.boundary_rays();
    let mut g: Vec<Direction> = b.iter().filter(|d| b.contains(&d.neg())).map(|d| d.line_canonical()).collect();
    g.sort();
    g.dedup();
    let normals: Vec<Direction> = match g.len() {
        0 => {
            let perps: Vec<Direction> = probes.iter().map(|d| d.perp()).collect();
            probe_directions(&PolytopalCone::Empty).into_iter().chain(perps.iter().copied()).chain(probes.clone()).collect()
        }
        1 => vec![g[0].perp(), g[0].perp().neg()],
        _ => vec![],
    };
    normals.iter().any(|n| r.iter().all(|d| n.dot(*d) > 0))
}

fn direction() -> impl Strategy<Value = Direction> {
    (-12i64..=12, -12i64..=12).prop_filter_map("nonzero", |(x, y)| Direction::new(x, y).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_affine_agrees_off_the_break_locus(h in hinge(), p in point()) {
        if let Ok(sigma) = h.sign_vector(&p) {
            prop_assert_eq!(h.local_affine(&sigma).unwrap().eval(&p), h.evaluate(&p));
        }
    }

    #[test]
    fn homogeneous_functions_scale(h in homogeneous_hinge(), p in point(), t in (1i64..=9, 1i64..=9)) {
        let t = rat(t.0, t.1);
        prop_assert_eq!(h.evaluate(&p.scale(&t)), t * h.evaluate(&p));
    }

    #[test]
    fn positivity_set_classifies_by_sign(h in hinge(), pts in prop::collection::vec(point(), 20)) {
        let set = positivity_set(&h);
        for p in &pts {
            let v = h.evaluate(p);
            let class = classify_point(&set, p);
            if v.is_positive() {
                prop_assert_eq!(class, PointClass::Interior);
            } else {
                prop_assert_ne!(class, PointClass::Interior);
                if v.is_negative() {
                    prop_assert_eq!(class, PointClass::Exterior);
                }
            }
        }
    }

    #[test]
    fn gradient_sum_gives_odd_part(h in hinge(), p in point(), u in (-10i64..=10, -10i64..=10)) {
        let r = h.admissible_radius(&p);
        let u = Vec2::ints(u.0, u.1).scale(&(r / int(11)));
        let gamma = h.central_gradient_sum(&p);
        prop_assert_eq!(h.evaluate(&p.add(&u)) - h.evaluate(&p.sub(&u)), gamma.dot(&u));
    }

    #[test]
    fn composition_transports_the_set(
        h in hinge(),
        m in (-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2),
        t in point(),
    ) {
        let m = [int(m.0), int(m.1), int(m.2), int(m.3)];
        prop_assume!(!(&m[0] * &m[3] - &m[1] * &m[2]).is_zero());
        // {x : h(Tx) > 0} is the preimage of the set under T
        let pulled = positivity_set(&h.compose(&m, &t));
        prop_assert!(set_equal(&pulled.transform(&m, &t), &positivity_set(&h)).is_equal());
    }

    #[test]
    fn r_matches_brute_force(c in cone(), ds in prop::collection::vec(direction(), 30)) {
        let r = r_set(&c);
        for d in ds {
            prop_assert_eq!(r.contains(d), c.contains_direction(d) && !c.contains_direction(d.neg()));
        }
    }

    #[test]
    fn verdict_matches_enumeration(c in cone()) {
        prop_assert_eq!(check_cone_condition(&c).realizable, brute_force_realizable(&c));
    }

    #[test]
    fn verdict_invariant_under_reflection(c in cone()) {
        prop_assert_eq!(check_cone_condition(&c).realizable, check_cone_condition(&c.neg()).realizable);
    }

    #[test]
    fn complement_of_boundary_keeps_the_boundary(c in cone()) {
        let comp = complement_of_boundary(&c);
        prop_assert_eq!(comp.boundary_rays(), c.boundary_rays());
        for d in c.boundary_rays() {
            prop_assert!(!comp.contains_direction(d));
        }
    }

    #[test]
    fn decomposition_round_trips(
        vals in prop::collection::vec((direction(), small()), 2..=5),
        e in (small(), small()),
    ) {
        let mut rays = Vec::new();
        for (d, v) in vals {
            let d = d.line_canonical();
            if rays.iter().any(|(r, _): &(Direction, Rational)| *r == d) {
                continue;
            }
            rays.push((d, v.clone()));
            rays.push((d.neg(), v));
        }
        prop_assume!(rays.len() >= 4);
        let e = Vec2::new(e.0, e.1);
        let f = PosHomCPWL::from_ray_values(&rays).unwrap().add_linear(&e);
        let dec = decompose_symmetric(&f).unwrap();
        prop_assert_eq!(&dec.e, &e);
        let h = peel_to_hinge(&dec).unwrap();
        for (d, _) in &rays {
            prop_assert_eq!(h.evaluate(&d.to_vec()), f.evaluate(&d.to_vec()));
        }
        for d in f.sector_samples() {
            prop_assert_eq!(h.evaluate(&d.to_vec()), f.evaluate(&d.to_vec()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn positivity_sets_pass_the_local_condition(h in hinge()) {
        prop_assert!(check_local_condition(&positivity_set(&h)).passed());
    }

    #[test]
    fn synthesis_follows_the_verdict(c in cone()) {
        match synthesize_cone(&c) {
            Ok(h) => {
                prop_assert!(check_cone_condition(&c).realizable);
                prop_assert!(set_equal(&positivity_set(&h), &cone_to_set(&c)).is_equal());
            }
            Err(SynthError::NotRealizable) => prop_assert!(!check_cone_condition(&c).realizable),
            Err(e) => prop_assert!(false, "{:?}: {}", c, e),
        }
    }

    #[test]
    fn set_equal_witnesses_really_differ(a in hinge(), b in hinge()) {
        let (pa, pb) = (positivity_set(&a), positivity_set(&b));
        prop_assert!(set_equal(&pa, &pa).is_equal());
        if let SetEquality::Differ(p) = set_equal(&pa, &pb) {
            let (ca, cb) = (classify_point(&pa, &p), classify_point(&pb, &p));
            prop_assert_ne!(ca, cb);
            if ca == PointClass::Interior || cb == PointClass::Interior {
                prop_assert_ne!(a.evaluate(&p).is_positive(), b.evaluate(&p).is_positive());
            }
        }
    }

    #[test]
    fn homogeneous_sets_are_cones(h in homogeneous_hinge(), p in point(), t in (1i64..=9, 1i64..=9)) {
        let set = positivity_set(&h);
        let t = rat(t.0, t.1);
        prop_assert_eq!(classify_point(&set, &p) == PointClass::Interior,
                        classify_point(&set, &p.scale(&t)) == PointClass::Interior);
    }
}
