//! Acceptance run: one line per criterion, `PASS` or `FAIL`, with the measured values and the
//! pinned tolerances. Exits non-zero if any criterion fails.

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};
use schwarz_lab::cardioid::{circumcircle, schwarz_sigma};
use schwarz_lab::coding::{
    itinerary_of_rational, m2_map, periodic_angles, periodic_rho_itineraries, AngleCode, E_inverse, E_numeric, E_of,
    RationalAngle, RhoAngle,
};
use schwarz_lab::error::Error;
use schwarz_lab::export::{png_bytes, scan_csv};
use schwarz_lab::index::contour_index_at;
use schwarz_lab::lamination::model_isomorphism_check;
use schwarz_lab::point::ComplexValue::{self, Finite, Infinity};
use schwarz_lab::portrait::{characteristic_arc, validate_fop, OrbitPortrait};
use schwarz_lab::render::{render_cs_locus, RenderJob, Target};
use schwarz_lab::schwarz::{self, trace_dynamical_ray as schwarz_ray, SchwarzMap};
use schwarz_lab::straightening::{chi_center, chi_inverse_center, index_experiment, tricorn_centers, verify_straightening};
use schwarz_lab::triangle::{admissible_words, arc_symbol, rho_circle, side_reflection, SIDE_CENTERS, SIDE_RADIUS_SQ};
use schwarz_lab::tricorn::{self, rational_lamination, trace_dynamical_ray as tricorn_ray, AntiPolynomial};
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(ok: bool, what: String) -> Outcome {
    if ok {
        Ok(what)
    } else {
        Err(what)
    }
}

fn re(x: f64) -> ComplexValue {
    ComplexValue::real(x)
}

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn exact_algebra() -> Outcome {
    let tol = 1e-12;
    let close = |a: ComplexValue, b: ComplexValue| a.approx_eq(&b, tol);
    let s1 = schwarz_sigma(re(3.0 / 16.0)).map_err(|e| e.to_string())?;
    let s2 = schwarz_sigma(re(2.0 / 9.0)).map_err(|e| e.to_string())?;
    let s3 = schwarz_sigma(re(0.0)).map_err(|e| e.to_string())?;
    check(close(s1, re(0.0)), format!("σ(3/16) = {s1}"))?;
    check(close(s2, re(3.0 / 16.0)), format!("σ(2/9) = {s2}"))?;
    check(s3 == Infinity, format!("σ(0) = {s3}"))?;
    let m0 = SchwarzMap::real(0.0).map_err(|e| e.to_string())?;
    check(m0.apply(re(0.0)) == Ok(Infinity) && m0.apply(Infinity).is_ok_and(|w| close(w, re(0.0))), "F₀ swaps 0 and ∞".into())?;
    let m = SchwarzMap::real(3.0 / 16.0).map_err(|e| e.to_string())?;
    let orbit = [re(0.0), Infinity, re(3.0 / 16.0), re(0.0)];
    for w in orbit.windows(2) {
        let img = m.apply(w[0]).map_err(|e| e.to_string())?;
        check(close(img, w[1]), format!("F_3/16({}) = {img}, expected {}", w[0], w[1]))?;
    }
    Ok(format!("σ and both critical orbits exact to {tol:e}"))
}

fn circumcircle_oracle() -> Outcome {
    let g = circumcircle(re(0.0)).map_err(|e| e.to_string())?;
    let err = (g.r_a - 0.75).abs().max((g.alpha - c(-0.75, 0.0)).norm()).max((g.alpha_prime - c(5.0 / 36.0, 0.0)).norm());
    check(err < 1e-10, format!("a=0: r={}, α={}, α′={}, max error {err:.1e} (tol 1e-10)", g.r_a, g.alpha, g.alpha_prime))?;
    let slit = circumcircle(re(-1.0));
    check(matches!(slit, Err(Error::SlitError { .. })), format!("a=−1 gives {slit:?}"))?;
    Ok(format!("a=0 geometry error {err:.1e} (tol 1e-10); a=−1 raises SlitError"))
}

fn centers() -> Outcome {
    let tol = 1e-8;
    let want_s = [(2, 0.0), (3, 3.0 / 16.0), (4, 2.0 / 9.0), (4, (52f64.sqrt() - 5.0) / 36.0)];
    let mut worst: f64 = 0.0;
    for (k, want) in want_s {
        let got = schwarz::find_center(k, re(want + 0.01)).map_err(|e| e.to_string())?.finite().ok_or("center at ∞")?;
        worst = worst.max((got - want).norm());
    }
    // The real period-3 Tricorn center is the real root of c³ + 2c² + c + 1.
    let cubic = real_cubic_root();
    let want_t = [(1, 0.0), (2, -1.0), (3, cubic)];
    for (k, want) in want_t {
        let got = tricorn::find_center(k, c(want + 0.02, 0.0)).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).norm());
    }
    check(worst < tol, format!("7 centers, max error {worst:.1e} (tol {tol:e})"))
}

fn real_cubic_root() -> f64 {
    let p = |x: f64| x * x * x + 2.0 * x * x + x + 1.0;
    let (mut lo, mut hi) = (-2.0, -1.5);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(lo) * p(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn conjugacy() -> Outcome {
    let mut exact = 0;
    for q in 2..=63i64 {
        for p in 0..q {
            let t = RationalAngle::new(p, q);
            if itinerary_of_rational(&t).is_err() {
                continue;
            }
            let x = E_inverse(&t);
            let lhs = E_of(&x.image()).map_err(|e| format!("{t}: {e}"))?;
            check(lhs == m2_map(&t), format!("𝓔(ρ(𝓔⁻¹({t}))) = {lhs}, m₋₂({t}) = {}", m2_map(&t)))?;
            exact += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5d1);
    let mut samples: Vec<f64> = (0..1000).map(|_| rng.gen::<f64>()).filter(|&t| arc_symbol(t).is_ok()).collect();
    let mut worst: f64 = 0.0;
    for &t in &samples {
        let lhs = (-2.0 * E_numeric(t, 40)).rem_euclid(1.0);
        let rhs = E_numeric(rho_circle(t), 40);
        worst = worst.max(circle_distance(lhs, rhs));
    }
    check(worst < 1e-6, format!("numeric equivariance error {worst:.1e} (tol 1e-6)"))?;
    for (v, t) in [(0u8, RationalAngle::zero()), (1, RationalAngle::new(1, 3)), (2, RationalAngle::new(2, 3))] {
        let x = RhoAngle::from_code(AngleCode::Vertex { prefix: vec![], vertex: v }, 40);
        check(E_of(&x).ok() == Some(t.clone()), format!("𝓔 moves vertex {v}"))?;
        check(circle_distance(E_numeric(t.to_f64(), 40), t.to_f64()) < 1e-12, format!("numeric 𝓔 moves {t}"))?;
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let images: Vec<f64> = samples.iter().map(|&t| E_numeric(t, 40)).collect();
    check(images.windows(2).all(|w| w[0] <= w[1]), "numeric 𝓔 is not monotone".into())?;
    Ok(format!("{exact} rationals exact; {} samples, error {worst:.1e} (tol 1e-6); vertices fixed; monotone", samples.len()))
}

fn reflection_group() -> Outcome {
    let tol = 1e-12;
    let mut worst: f64 = 0.0;
    for j in 1..=3u8 {
        let center = SIDE_CENTERS[(j - 1) as usize];
        for i in 0..720 {
            let th = std::f64::consts::TAU * (i as f64 + 0.5) / 720.0;
            let on_side = center + SIDE_RADIUS_SQ.sqrt() * Complex64::from_polar(1.0, th);
            if on_side.norm() <= 1.0 {
                let img = side_reflection(j, Finite(on_side)).finite().ok_or("side point sent to ∞")?;
                worst = worst.max((img - on_side).norm());
            }
            let u = Complex64::from_polar(1.0, th);
            let img = side_reflection(j, Finite(u)).finite().ok_or("circle point sent to ∞")?;
            worst = worst.max((img.norm() - 1.0).abs());
            let z = Complex64::from_polar(0.9 * (i as f64 / 720.0), 3.0 * th);
            let twice = side_reflection(j, side_reflection(j, Finite(z))).finite().ok_or("interior point sent to ∞")?;
            worst = worst.max((twice - z).norm());
        }
    }
    check(worst < tol, format!("reflection error {worst:.1e}"))?;

    // Zeros of ρ(t) − t, read off sign changes away from the wrap-around jumps.
    let n = 30_011;
    let diff: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) / n as f64;
            (t, (rho_circle(t) - t + 0.5).rem_euclid(1.0) - 0.5)
        })
        .collect();
    let mut fixed = Vec::new();
    for i in 0..n {
        let (t0, d0) = diff[i];
        let (_, d1) = diff[(i + 1) % n];
        if d0.abs() < 0.1 && d1.abs() < 0.1 && d0 * d1 < 0.0 {
            fixed.push(t0);
        }
    }
    let expected = [0.0, 1.0 / 3.0, 2.0 / 3.0];
    let located = fixed.len() == 3 && expected.iter().all(|&v| fixed.iter().any(|&t| circle_distance(t, v) < 1e-4));
    check(located, format!("fixed points of ρ near {fixed:?}"))?;

    let mut words = 0;
    for n in 1..=8 {
        for it in periodic_rho_itineraries(n) {
            check(it.is_admissible(), format!("{it} is not admissible"))?;
            words += 1;
        }
    }
    for w in admissible_words(7) {
        check(w.is_admissible(), format!("{w:?} is not admissible"))?;
        words += 1;
    }
    Ok(format!("max error {worst:.1e} (tol {tol:e}); 3 fixed circle points; {words} itineraries admissible"))
}

/// The portrait made of the classes on the forward orbit of `class`.
fn orbit_portrait(class: &[RationalAngle], classes: &[BTreeSet<RationalAngle>]) -> Option<OrbitPortrait<RationalAngle>> {
    let start: BTreeSet<RationalAngle> = class.iter().cloned().collect();
    let mut orbit = vec![start.clone()];
    loop {
        let next: BTreeSet<RationalAngle> = orbit.last()?.iter().map(m2_map).collect();
        if next == start {
            break;
        }
        if orbit.len() > 64 || !classes.contains(&next) {
            return None;
        }
        orbit.push(next);
    }
    Some(OrbitPortrait::new(orbit.into_iter().map(|s| s.into_iter().collect()).collect()))
}

/// Shortest complementary arc over all classes, by direct enumeration.
fn brute_characteristic(p: &OrbitPortrait<RationalAngle>) -> (RationalAngle, RationalAngle) {
    let mut best: Option<(RationalAngle, RationalAngle)> = None;
    for class in &p.classes {
        let mut s: Vec<RationalAngle> = class.clone();
        s.sort();
        for i in 0..s.len() {
            let (x, y) = (&s[i], &s[(i + 1) % s.len()]);
            let len = x.ccw_to(y);
            if best.as_ref().is_none_or(|(a, b)| len < a.ccw_to(b)) {
                best = Some((x.clone(), y.clone()));
            }
        }
    }
    best.expect("non-empty portrait")
}

fn portraits() -> Outcome {
    let fixed = OrbitPortrait::new(vec![vec![RationalAngle::new(1, 3), RationalAngle::new(2, 3)]]);
    check(validate_fop(&fixed).is_ok(), format!("{{1/3, 2/3}}: {:?}", validate_fop(&fixed)))?;
    let mut count = 0;
    let mut centers_seen = 0;
    for k in 1..=4 {
        for cen in tricorn_centers(k) {
            centers_seen += 1;
            let lam = rational_lamination(cen, 2 * k, 60).map_err(|e| format!("c={cen}: {e}"))?;
            let classes: Vec<BTreeSet<RationalAngle>> = lam.lamination.classes.iter().map(|v| v.iter().cloned().collect()).collect();
            for class in &classes {
                if class.iter().any(|t| schwarz_lab::coding::exact_period(t).is_none()) {
                    continue;
                }
                let v: Vec<RationalAngle> = class.iter().cloned().collect();
                let p = orbit_portrait(&v, &classes).ok_or_else(|| format!("c={cen}: orbit of {v:?} leaves the traced classes"))?;
                check(validate_fop(&p).is_ok(), format!("c={cen}: {:?} fails: {:?}", p.classes, validate_fop(&p)))?;
                let arc = characteristic_arc(&p).map_err(|e| format!("c={cen}: {e}"))?;
                check(arc == brute_characteristic(&p), format!("c={cen}: characteristic arc {arc:?} vs {:?}", brute_characteristic(&p)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{{1/3, 2/3}} valid; {count} periodic classes at {centers_seen} centers validate with matching characteristic arcs"))
}

fn rays() -> Outcome {
    let (gap_tol, per_tol) = (1e-6, 1e-5);
    let map = SchwarzMap::real(3.0 / 16.0).map_err(|e| e.to_string())?;
    let (mut s_gap, mut s_per, mut s_n): (f64, f64, usize) = (0.0, 0.0, 0);
    for n in 1..=6 {
        for it in periodic_rho_itineraries(n) {
            let code = AngleCode::Periodic(it.clone());
            let r = schwarz_ray(&map, &code, 160).map_err(|e| format!("{it}: {e}"))?;
            let back = map.iterate(Finite(r.landing), n).map_err(|e| format!("{it}: {e}"))?.finite().ok_or("landing escapes")?;
            s_gap = s_gap.max(r.cauchy_gap);
            s_per = s_per.max((back - r.landing).norm());
            s_n += 1;
        }
    }
    let poly = AntiPolynomial::new(c(-1.0, 0.0));
    let (mut t_gap, mut t_per, mut t_n): (f64, f64, usize) = (0.0, 0.0, 0);
    let mut land = Vec::new();
    for n in 1..=6 {
        for t in periodic_angles(n) {
            let r = tricorn_ray(&poly, &t, 100).map_err(|e| format!("{t}: {e}"))?;
            let z = r.landing_estimate;
            t_gap = t_gap.max(r.cauchy_gap);
            t_per = t_per.max((poly.iterate(z, n) - z).norm());
            t_n += 1;
            if t == RationalAngle::new(1, 3) || t == RationalAngle::new(2, 3) {
                land.push(z);
            }
        }
    }
    let colanding = (land[0] - land[1]).norm();
    let summary = format!(
        "a=3/16: {s_n} rays, gap {s_gap:.1e}, periodicity {s_per:.1e}; c=−1: {t_n} rays, gap {t_gap:.1e}, periodicity {t_per:.1e} \
         (tols {gap_tol:e}, {per_tol:e}); 1/3 and 2/3 land {colanding:.1e} apart"
    );
    check(s_gap < gap_tol && s_per < per_tol && t_gap < gap_tol && t_per < per_tol && colanding < per_tol, summary)
}

fn straightening() -> Outcome {
    let tol = 1e-8;
    let r0 = chi_center(c(0.0, 0.0)).map_err(|e| format!("χ(0): {e}"))?;
    let r3 = chi_center(c(3.0 / 16.0, 0.0)).map_err(|e| format!("χ(3/16): {e}"))?;
    let real3 = tricorn::find_center(3, c(-1.75, 0.0)).map_err(|e| e.to_string())?;
    let e0 = (r0.c + 1.0).norm();
    let e3 = (r3.c - real3).norm();
    check(e0 < tol && e3 < tol, format!("χ(0) = {}, χ(3/16) = {} vs {real3}", r0.c, r3.c))?;
    for (a, r) in [(0.0, &r0), (3.0 / 16.0, &r3)] {
        let rep = verify_straightening(c(a, 0.0), r.c, 6);
        check(rep.passed, format!("verification at a={a}: {:?}", rep.mismatches))?;
        let back = chi_inverse_center(r.c).map_err(|e| format!("χ⁻¹({}): {e}", r.c))?;
        check((back.a - c(a, 0.0)).norm() < tol, format!("χ⁻¹({}) = {}", r.c, back.a))?;
    }
    Ok(format!("χ(0) error {e0:.1e}, χ(3/16) error {e3:.1e} (tol {tol:e}); depth-6 verification and round trips pass"))
}

fn index_machinery() -> Outcome {
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    let mut points = 0;
    // Fixed points of the second iterate of z̄² − 1: the 2-cycle {0, −1} and the two real fixed points.
    let poly = AntiPolynomial::new(c(-1.0, 0.0));
    let g = |z: Complex64| Ok(poly.iterate(z, 2));
    for z0 in [c(0.0, 0.0), c(-1.0, 0.0), c((1.0 - 5f64.sqrt()) / 2.0, 0.0), c((1.0 + 5f64.sqrt()) / 2.0, 0.0)] {
        let lambda = poly.iterate_with_derivative(z0, 2).1.holomorphic_multiplier();
        let idx = contour_index_at(&g, z0, 1e-4, 4096).map_err(|e| e.to_string())?;
        worst = worst.max((idx - 1.0 / (1.0 - lambda)).norm());
        points += 1;
    }
    // Repelling cycles of F_3/16 of periods 2 and 3, through their holomorphic return maps.
    let map = SchwarzMap::real(3.0 / 16.0).map_err(|e| e.to_string())?;
    for period in [2, 3] {
        let q = if period % 2 == 0 { period } else { 2 * period };
        let h = |z: Complex64| map.iterate(Finite(z), q)?.finite().ok_or(Error::ContourThroughZero);
        for cyc in schwarz::find_cycles(&map, period, &Default::default()) {
            if cyc.contains_critical() {
                continue;
            }
            let lambda = cyc.holomorphic_multiplier();
            for z0 in cyc.points.iter().filter_map(|p| p.finite()).filter(|z| z.norm() < 10.0) {
                let idx = contour_index_at(&h, z0, 1e-6, 4096).map_err(|e| e.to_string())?;
                worst = worst.max((idx - 1.0 / (1.0 - lambda)).norm());
                points += 1;
            }
        }
    }
    check(worst < tol, format!("index vs 1/(1−λ) at {points} fixed points: error {worst:.1e} (tol {tol:e})"))?;
    let e = index_experiment().map_err(|e| e.to_string())?;
    let im = e.imaginary_parts.0.abs().max(e.imaginary_parts.1.abs());
    check(im < 1e-6, format!("parabolic indices not real: imaginary parts {:?}", e.imaginary_parts))?;
    check(
        e.separation > 0.01,
        format!(
            "{points} fixed points match 1/(1−λ) to {worst:.1e}; parabolic indices real to {im:.1e}; ι_S = {:.6}, ι_T = {:.6}, separation {:.4} (need > 0.01)",
            e.iota_s, e.iota_t, e.separation
        ),
    )
}

fn model_isomorphism() -> Outcome {
    let rep = model_isomorphism_check(6);
    check(
        rep.passed && rep.unlinked_schwarz && rep.unlinked_tricorn,
        format!(
            "max period 6: {} / {} leaves, bijective {}, order kept {}, unlinked {}/{}",
            rep.leaves_schwarz, rep.leaves_tricorn, rep.bijective, rep.order_preserved, rep.unlinked_schwarz, rep.unlinked_tricorn
        ),
    )
}

fn rendering() -> Outcome {
    let job = RenderJob::standard(Target::CsLocus, 2048);
    let (img, rows) = render_cs_locus(&job).map_err(|e| e.to_string())?;
    let mut escaping = 0;
    for r in &rows {
        if r.depth.is_some() {
            escaping += 1;
            let ok = r.address.is_admissible() && r.address.symbols().first() == Some(&2);
            check(ok, format!("pixel at {}+{}i has address {:?}", r.re_a, r.im_a, r.address))?;
        }
    }
    let (img2, rows2) = render_cs_locus(&job).map_err(|e| e.to_string())?;
    let same = png_bytes(&img).map_err(|e| e.to_string())? == png_bytes(&img2).map_err(|e| e.to_string())? && scan_csv(&rows) == scan_csv(&rows2);
    check(same, "reruns differ".into())?;
    let d = schwarz::depth(re(10.0), 200).map_err(|e| e.to_string())?;
    check(d == 1, format!("depth(10) = {d}"))?;
    Ok(format!("2048²: {escaping} escaping pixels, all admissible with first symbol 2; reruns byte-identical; depth(10) = 1"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("exact algebra", 1, exact_algebra),
        ("circumcircle", 1, circumcircle_oracle),
        ("centers", 10, centers),
        ("conjugacy", 30, conjugacy),
        ("reflection group", 1, reflection_group),
        ("portraits", 60, portraits),
        ("rays", 120, rays),
        ("straightening", 300, straightening),
        ("index machinery", 60, index_machinery),
        ("model isomorphism", 60, model_isomorphism),
        ("rendering", 300, rendering),
    ];
    let mut failed = 0;
    for (n, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<18} {}  [{:.2}s / {}s{}] {}",
            n + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget,
            if in_time { "" } else { ", over budget" },
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
