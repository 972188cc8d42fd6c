//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hingeset::cone::{check_cone_condition, complement_of_boundary, DirectionSet, GSpan, PolytopalCone};
use num::Signed;
use hingeset::exact::{int, rat, AffineForm, Direction, RatMatrix, Vec2};
use hingeset::hinge::{decompose_symmetric, peel_to_hinge, HingeError, PosHomCPWL};
use hingeset::planar::{
    check_local_condition, cone_to_set, connected_components, positivity_set, set_equal, ConvexCell, PolytopalSet,
};
use hingeset::synth::{
    coefficient_space, polygon_from_vertices, synthesize_boundary_complement, synthesize_cone,
    synthesize_convex_polygon,
};

use common::*;

type Check = Result<String, String>;

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let r = f();
    let t = start.elapsed();
    match r {
        Ok(msg) if t <= limit => Ok(format!("{msg} in {:.2?}", t)),
        Ok(msg) => Err(format!("{msg}, but took {:.2?} (limit {:?})", t, limit)),
        Err(msg) => Err(msg),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    timed(Duration::from_secs(1), || {
        let lines = triangle_lines();
        let zeros: Vec<Vec2> = [(0, 0), (2, 0), (0, 2), (1, 0), (0, 1), (1, 1)].iter().map(|&(x, y)| Vec2::ints(x, y)).collect();
        let basis = coefficient_space(&lines, &zeros);
        let paper: Vec<_> = [0, 1, 1, -2, -1, -1, 2, 2].iter().map(|&k| int(k)).collect();
        let mut rows = basis.clone();
        rows.push(paper);
        let in_span = RatMatrix::from_rows(rows, 8).rank() == RatMatrix::from_rows(basis.clone(), 8).rank();
        ensure(in_span, || format!("paper coefficients outside the {}-dimensional solution space", basis.len()))?;
        let tri = PolytopalSet::new(vec![ConvexCell::new(vec![
            AffineForm::ints(0, 1, 0),
            AffineForm::ints(1, 0, 0),
            AffineForm::ints(-1, -1, 2),
        ])
        .map_err(|e| e.to_string())?]);
        ensure(set_equal(&positivity_set(&triangle_hinge()), &tri).is_equal(), || {
            "positivity set differs from the open triangle".into()
        })?;
        Ok(format!("solution space of dimension {} contains the coefficients; set is the triangle", basis.len()))
    })
}

fn criterion_2() -> Check {
    timed(Duration::from_secs(1), || {
        let c = connected_components(&positivity_set(&four_fan_hinge()));
        let all_bounded = c.bounded.iter().all(|&b| b);
        ensure(c.count == 4 && all_bounded, || {
            format!(
                "count = {}, bounded = {:?}; h(3t, t) = 2t - 1 > 0 for t > 1/2, so components are unbounded",
                c.count, c.bounded
            )
        })?;
        Ok("4 bounded components".into())
    })
}

fn criterion_3() -> Check {
    timed(Duration::from_secs(1), || {
        let fan = three_fan();
        let v = check_cone_condition(&fan);
        ensure(!v.realizable, || "cone condition accepted the 3-fan".into())?;
        ensure(matches!(v.g_span, GSpan::Dim2(..)), || format!("G-span {:?}", v.g_span))?;
        ensure(v.r_nonempty, || "R is empty".into())?;
        ensure(!check_local_condition(&cone_to_set(&fan)).passed(), || "local condition accepted the 3-fan".into())?;
        Ok("rejected by both checks, G-span Dim2, R nonempty".into())
    })
}

fn cone_round_trip(c: &PolytopalCone) -> Result<(), String> {
    let h = synthesize_cone(c).map_err(|e| format!("{c:?}: {e}"))?;
    ensure(set_equal(&positivity_set(&h), &cone_to_set(c)).is_equal(), || format!("{c:?}: oracle mismatch"))
}

fn criterion_4() -> Check {
    timed(Duration::from_secs(60), || {
        for m in 1..=5 {
            cone_round_trip(&even_fan(m))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut done = 0;
        while done < 100 {
            let c = random_cone(&mut rng);
            if check_cone_condition(&c).realizable {
                cone_round_trip(&c)?;
                done += 1;
            }
        }
        Ok("2m-fans m = 1..5 and 100 random realizable cones synthesized and verified".into())
    })
}

fn criterion_5() -> Check {
    timed(Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..200 {
            let h = random_hinge(&mut rng);
            let check = check_local_condition(&positivity_set(&h));
            ensure(check.passed(), || format!("hinge #{i} {h}: {check:?}"))?;
        }
        Ok("200 random hinge functions pass at every boundary vertex".into())
    })
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..100 {
        let h = random_hinge(&mut rng);
        let lines = h.break_lines();
        // every third center sits on an intersection of break lines when one exists
        let mut p = random_point(&mut rng);
        if i % 3 == 0 && lines.len() >= 2 {
            let a = &lines[rng.gen_range(0..lines.len())];
            let b = &lines[rng.gen_range(0..lines.len())];
            if let Some(x) = hingeset::exact::line_intersection(a, b) {
                p = x;
            }
        } else if i % 3 == 1 && !lines.is_empty() {
            // a point on one line
            let l = &lines[rng.gen_range(0..lines.len())];
            let d = l.gradient();
            p = d.scale(&(-l.c.clone() / d.dot(&d)));
        }
        let r = h.admissible_radius(&p);
        let mut gammas = Vec::new();
        while gammas.len() < 10 {
            let (a, b) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
            if a == 0 && b == 0 {
                continue;
            }
            let step = r.clone() * rat(1, 1 + i64::max(i64::abs(a), i64::abs(b)));
            let q = p.add(&Vec2::ints(a, b).scale(&step));
            let q2 = p.scale(&int(2)).sub(&q);
            if let (Ok(g1), Ok(g2)) = (h.gradient_at(&q), h.gradient_at(&q2)) {
                gammas.push(g1.add(&g2));
            }
        }
        if gammas.iter().any(|g| *g != gammas[0]) {
            return Err(format!("hinge #{i} {h} at {p:?}: gamma depends on q"));
        }
        if gammas[0] != h.central_gradient_sum(&p) {
            return Err(format!("hinge #{i}: central_gradient_sum disagrees"));
        }
        let through: Vec<&AffineForm> = lines.iter().filter(|l| l.eval(&p) == int(0)).collect();
        for k in 0..10 {
            let u = if k < 3 && !through.is_empty() {
                // along a break line through p
                let l = through[k % through.len()];
                let d = l.gradient().perp();
                let m = d.x.abs().max(d.y.abs());
                d.scale(&(r.clone() / (m * int(2))))
            } else {
                let (a, b) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
                Vec2::ints(a, b).scale(&(r.clone() / int(21)))
            };
            let lhs = h.evaluate(&p.add(&u)) - h.evaluate(&p.sub(&u));
            if lhs != gammas[0].dot(&u) {
                return Err(format!("hinge #{i} at {p:?}: h(p+u) - h(p-u) != gamma . u for u = {u:?}"));
            }
        }
    }
    Ok("gamma independent of q over 100 functions; odd part linear on the admissible ball".into())
}

fn random_profile(rng: &mut ChaCha8Rng) -> Result<(PosHomCPWL, Vec2), String> {
    loop {
        let n = rng.gen_range(2..=5);
        let mut half: Vec<Direction> = (0..n).map(|_| random_direction(rng, 6)).map(|d| d.line_canonical()).collect();
        half.sort();
        half.dedup();
        if half.len() < 2 {
            continue;
        }
        let mut rays = Vec::new();
        for d in &half {
            let v = small_rat(rng);
            rays.push((*d, v.clone()));
            rays.push((d.neg(), v));
        }
        let e = Vec2::new(small_rat(rng), small_rat(rng));
        if let Ok(s) = PosHomCPWL::from_ray_values(&rays) {
            return Ok((s.add_linear(&e), e));
        }
    }
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let (f, e) = random_profile(&mut rng)?;
        let dec = decompose_symmetric(&f).map_err(|err| format!("profile #{i}: {err}"))?;
        ensure(dec.e == e && dec.s_part.is_symmetric(), || format!("profile #{i}: e = {:?}", dec.e))?;
        let h = peel_to_hinge(&dec).map_err(|err| format!("profile #{i}: {err}"))?;
        for _ in 0..20 {
            let p = random_point(&mut rng);
            ensure(h.evaluate(&p) == f.evaluate(&p), || format!("profile #{i}: peeled function differs at {p:?}"))?;
        }
        let mut cand: Vec<Direction> = f.breaks().to_vec();
        cand.extend(f.sector_samples());
        // f can change sign inside a sector, along the zero ray of its gradient
        for g in f.gradients() {
            if let Ok(z) = Direction::from_vec(&g.perp()) {
                cand.extend([z, z.neg()]);
            }
        }
        let positive = DirectionSet::from_predicate(&cand, |d| f.evaluate(&d.to_vec()).is_positive());
        let cone = PolytopalCone::from_open_part(&positive);
        ensure(set_equal(&positivity_set(&h), &cone_to_set(&cone)).is_equal(), || {
            format!("profile #{i}: oracle sees a different positivity set")
        })?;
    }
    let d = Direction::of;
    let max_xy0 = PosHomCPWL::from_sectors(
        vec![d(1, 1), d(-1, 0), d(0, -1)],
        vec![Vec2::ints(0, 1), Vec2::ints(0, 0), Vec2::ints(1, 0)],
    )
    .map_err(|e| e.to_string())?;
    match decompose_symmetric(&max_xy0) {
        Err(HingeError::NotDecomposable(w)) => Ok(format!("100 profiles round-trip; max(x, y, 0) rejected at ray {w}")),
        other => Err(format!("max(x, y, 0) not rejected: {other:?}")),
    }
}

fn criterion_8() -> Check {
    timed(Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (mut done, mut rejected) = (0, Vec::new());
        while done < 50 {
            let c = random_cone(&mut rng);
            if !check_cone_condition(&c).realizable {
                continue;
            }
            cone_round_trip(&c)?;
            let comp = complement_of_boundary(&c);
            if check_cone_condition(&comp).realizable {
                cone_round_trip(&comp)?;
            } else {
                rejected.push(c);
            }
            done += 1;
        }
        let pts = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| Vec2::ints(x, y)).collect::<Vec<_>>();
        let square = polygon_from_vertices(&pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).map_err(|e| e.to_string())?;
        let pentagon = polygon_from_vertices(&random_pentagon(&mut rng)).map_err(|e| e.to_string())?;
        let f = AffineForm::ints;
        let unbounded = ConvexCell::new(vec![f(0, 1, 0), f(1, 1, 0), f(-1, 1, 2), f(1, 0, 3)]).map_err(|e| e.to_string())?;
        for (name, p) in [("square", &square), ("pentagon", &pentagon), ("unbounded 4-edge polygon", &unbounded)] {
            let h = synthesize_convex_polygon(p).map_err(|e| format!("{name}: {e}"))?;
            ensure(set_equal(&positivity_set(&h), &PolytopalSet::new(vec![p.clone()])).is_equal(), || {
                format!("{name}: oracle mismatch")
            })?;
        }
        let triangle = polygon_from_vertices(&pts(&[(0, 0), (2, 0), (0, 2)])).map_err(|e| e.to_string())?;
        for (name, p) in [("square", &square), ("triangle", &triangle)] {
            let h = synthesize_boundary_complement(p).map_err(|e| format!("{name} boundary complement: {e}"))?;
            let target = hingeset::synth::boundary_complement_set(p).map_err(|e| e.to_string())?;
            ensure(set_equal(&positivity_set(&h), &target).is_equal(), || format!("{name}: complement mismatch"))?;
        }
        // h(r) - h(-r) = 2 e . r, so every removed ray r with -r kept needs e . r < 0;
        // when such rays surround the origin no e exists
        ensure(rejected.is_empty(), || {
            format!(
                "{} of 50 realizable cones have a complement of boundary that is not realizable, e.g. {:?} \
                 (removed rays surround the origin); polygons and polygon boundary complements verified",
                rejected.len(),
                rejected[0]
            )
        })?;
        Ok("50 boundary complements, 3 polygons and 2 polygon boundary complements verified".into())
    })
}

fn criterion_9() -> Check {
    let t = triangle_hinge();
    let h1 = h1();
    let vals = [
        (t.evaluate(&Vec2::ints(0, 0)), int(0)),
        (t.evaluate(&Vec2::ints(2, 0)), int(0)),
        (t.evaluate(&Vec2::ints(0, 2)), int(0)),
        (t.evaluate(&Vec2::new(rat(2, 3), rat(2, 3))), rat(8, 3)),
        (h1.evaluate(&Vec2::ints(1, 0)), int(-1)),
        (h1.evaluate(&Vec2::ints(2, 1)), int(2)),
    ];
    for (i, (got, want)) in vals.iter().enumerate() {
        ensure(got == want, || format!("value #{i}: got {got}, want {want}"))?;
    }
    Ok("triangle vertices 0, h(2/3, 2/3) = 8/3, h1(1, 0) = -1, h1(2, 1) = 2".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("triangle regression", criterion_1),
        ("4-fan components", criterion_2),
        ("3-fan rejection", criterion_3),
        ("cone synthesis", criterion_4),
        ("local condition on random positivity sets", criterion_5),
        ("local gradient lemma", criterion_6),
        ("symmetric decomposition", criterion_7),
        ("polygons and boundary complements", criterion_8),
        ("spot values", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
