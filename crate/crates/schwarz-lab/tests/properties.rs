use num_complex::Complex64;
use proptest::prelude::*;
use schwarz_lab::cardioid::{boundary_point, circle_reflect, circumcircle, phi_c, phi_inverse, schwarz_sigma};
use schwarz_lab::coding::{code_of_rational, Itinerary, itinerary_of_rational, m2_map, rational_from_code, rational_from_itinerary, E_inverse, E_numeric, E_of, RationalAngle};
use schwarz_lab::cycle::cluster_points;
use schwarz_lab::lamination::{characteristic_pairs, pullback_levels};
use schwarz_lab::point::{ComplexValue, Finite};
use schwarz_lab::portrait::{characteristic_arc, generate_portrait_from_pair, pull_back_E, push_forward_E, validate_fop};
use schwarz_lab::render::{RenderJob, Target};
use schwarz_lab::schwarz::SchwarzMap;
use schwarz_lab::triangle::{angle_of, arc_symbol, rho_circle, side_reflection, Word};
use schwarz_lab::tricorn::AntiPolynomial;
use schwarz_lab::wirtinger::finite_difference;
use std::f64::consts::TAU;
use std::sync::OnceLock;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.999f64, 0.0..1.0f64).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), TAU * t))
}

/// Rationals p/q in [0, 1) with q ≤ max_q.
fn rational(max_q: i64) -> impl Strategy<Value = RationalAngle> {
    (2..=max_q).prop_flat_map(|q| (0..q).prop_map(move |p| RationalAngle::new(p, q)))
}

static PAIRS: OnceLock<Vec<(RationalAngle, RationalAngle)>> = OnceLock::new();

fn pairs() -> &'static [(RationalAngle, RationalAngle)] {
    PAIRS.get_or_init(|| characteristic_pairs(6))
}

proptest! {
    #![proptest_config(cfg(512))]

    #[test]
    fn phi_inverse_is_a_right_inverse(l in disk_point()) {
        let w = phi_c(l);
        let back = phi_inverse(Finite(w)).expect("inside the cardioid");
        prop_assert!((phi_c(back) - w).norm() < 1e-12);
    }

    #[test]
    fn sigma_fixes_the_boundary(t in 0.01..0.99f64) {
        let w = boundary_point(t);
        let s = schwarz_sigma(Finite(w)).unwrap().finite().unwrap();
        prop_assert!((s - w).norm() < 1e-10, "σ({w}) = {s}");
    }

    #[test]
    fn circle_reflection_is_an_involution(a in 0.0..0.6f64, b in -0.3..0.3f64, z in disk_point()) {
        let Ok(g) = circumcircle(Finite(Complex64::new(a, b))) else { return Ok(()) };
        let w = g.a + 3.0 * z;
        prop_assume!((w - g.a).norm() > 1e-3);
        let back = circle_reflect(&g, circle_reflect(&g, Finite(w))).finite().unwrap();
        prop_assert!((back - w).norm() < 1e-12 * (1.0 + w.norm()));
    }

    #[test]
    fn side_reflections_preserve_the_circle_and_square_to_one(j in 1..=3u8, t in 0.0..1.0f64, z in disk_point()) {
        let u = Complex64::from_polar(1.0, TAU * t);
        let image = side_reflection(j, Finite(u)).finite().unwrap();
        prop_assert!((image.norm() - 1.0).abs() < 1e-12);
        let twice = side_reflection(j, side_reflection(j, Finite(z))).finite().unwrap();
        prop_assert!((twice - z).norm() < 1e-12);
    }

    #[test]
    fn rho_on_the_circle_is_two_to_one(t in 0.0..1.0f64) {
        let Ok(own) = arc_symbol(t) else { return Ok(()) };
        let u = Complex64::from_polar(1.0, TAU * t);
        let mut found = 0;
        for j in (1..=3u8).filter(|&j| j != own) {
            let pre = angle_of(side_reflection(j, Finite(u)).finite().unwrap());
            let d = (rho_circle(pre) - t).rem_euclid(1.0);
            prop_assert!(d.min(1.0 - d) < 1e-9, "ρ({pre}) ≠ {t}");
            found += 1;
        }
        prop_assert_eq!(found, 2);
    }

    #[test]
    fn circle_orbits_have_admissible_itineraries(t in 0.0..1.0f64) {
        let mut x = t;
        let mut syms = Vec::new();
        for _ in 0..12 {
            match arc_symbol(x) {
                Ok(s) => syms.push(s),
                Err(_) => break,
            }
            x = rho_circle(x);
        }
        prop_assert!(Word(syms).is_admissible());
    }

    #[test]
    fn coding_conjugates_exactly(t in rational(400)) {
        let code = code_of_rational(&t);
        prop_assert_eq!(rational_from_code(&code).unwrap(), t.clone());
        prop_assert_eq!(rational_from_code(&code.shift()).unwrap(), m2_map(&t));
    }

    #[test]
    fn itinerary_round_trip(pre in proptest::collection::vec(1..=3u8, 0..4), period in proptest::collection::vec(1..=3u8, 1..8)) {
        let Ok(it) = Itinerary::new(pre, period) else { return Ok(()) };
        prop_assume!(it.is_admissible());
        let Ok(t) = rational_from_itinerary(&it) else { return Ok(()) };
        prop_assert!(t.denom() <= &(1u64 << 16).into());
        prop_assert_eq!(itinerary_of_rational(&t).unwrap(), it.normalized());
    }

    #[test]
    fn conjugacy_keeps_circular_order(s in rational(300), t in rational(300)) {
        prop_assume!(s < t);
        let (x, y) = (E_inverse(&s), E_inverse(&t));
        prop_assert!(x.numeric <= y.numeric + 1e-12, "{s} < {t} but {} > {}", x.numeric, y.numeric);
        prop_assert_eq!(E_of(&x).unwrap(), s);
    }

    #[test]
    fn numeric_conjugacy_commutes_with_the_maps(t in 0.0..1.0f64) {
        prop_assume!(arc_symbol(t).is_ok());
        let lhs = (-2.0 * E_numeric(t, 40)).rem_euclid(1.0);
        let rhs = E_numeric(rho_circle(t), 40);
        let d = (lhs - rhs).rem_euclid(1.0);
        prop_assert!(d.min(1.0 - d) < 1e-6, "θ = {t}: {lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn inverse_branches_invert_the_map(a in -0.05..0.4f64, b in -0.1..0.1f64, z in disk_point()) {
        let Ok(map) = SchwarzMap::new(Finite(Complex64::new(a, b))) else { return Ok(()) };
        let z = map.a + 2.0 * z;
        for (w, _) in map.inverse_branches(Finite(z)) {
            let Ok(back) = map.apply(w) else { continue };
            prop_assert!(back.approx_eq(&Finite(z), 1e-10 * (1.0 + z.norm())), "{w} ↦ {back}, expected {z}");
        }
    }

    #[test]
    fn escape_addresses_start_with_two(r in 0.3..20.0f64, t in 0.0..1.0f64) {
        let a = Complex64::from_polar(r, TAU * t);
        let Ok(map) = SchwarzMap::new(Finite(a)) else { return Ok(()) };
        let rec = map.classify_point(ComplexValue::Infinity, 200);
        if rec.escapes {
            prop_assert!(rec.address.is_admissible());
            prop_assert_eq!(rec.address.symbols().first().copied(), Some(2));
        }
    }

    #[test]
    fn anti_polynomial_derivative_matches_differences(c in disk_point(), z in disk_point()) {
        let f = AntiPolynomial::new(2.0 * c);
        let (_, d) = f.iterate_with_derivative(z, 3);
        let (dz, dzbar) = finite_difference(|w| Some(f.iterate(w, 3)), z, 1e-6).unwrap();
        prop_assert!(dz.norm() < 1e-4 * (1.0 + dzbar.norm()));
        prop_assert!((dzbar - d.value).norm() < 1e-5 * (1.0 + d.value.norm()));
    }

    #[test]
    fn generated_portraits_validate(i in 0..10_000usize) {
        let ps = pairs();
        let (s, t) = &ps[i % ps.len()];
        let p = generate_portrait_from_pair(s, t).unwrap();
        prop_assert_eq!(validate_fop(&p), Ok(()));
        prop_assert_eq!(characteristic_arc(&p).unwrap(), (s.clone(), t.clone()));
        let there = push_forward_E(&p).unwrap();
        prop_assert_eq!(pull_back_E(&there).unwrap(), p);
    }

    #[test]
    fn pullback_leaves_stay_unlinked(i in 0..10_000usize) {
        let ps = pairs();
        let (s, t) = &ps[i % ps.len()];
        let levels = pullback_levels(s, t, 4).unwrap();
        let leaves: Vec<_> = levels.into_iter().flatten().collect();
        for (k, x) in leaves.iter().enumerate() {
            for y in &leaves[k + 1..] {
                prop_assert!(!x.crosses(y), "{x} crosses {y}");
            }
        }
    }

    #[test]
    fn pixel_mapping_round_trips(w in 1..600usize, h in 1..600usize, i in 0..600usize, j in 0..600usize) {
        let job = RenderJob::new(Target::Tricorn, schwarz_lab::render::Window::new(Complex64::new(-0.3, 0.1), 2.5, 1.5), (w, h));
        let (i, j) = (i % w, j % h);
        let (x, y) = job.plane_to_pixel(job.pixel_to_plane(i, j));
        prop_assert!((x - i as f64).abs() < 1e-9 && (y - j as f64).abs() < 1e-9);
    }

    #[test]
    fn clusters_separate_distant_groups(centers in proptest::collection::vec(disk_point(), 1..6), jitter in proptest::collection::vec(disk_point(), 12)) {
        let centers: Vec<Complex64> = centers.into_iter().enumerate().map(|(k, c)| c + Complex64::new(10.0 * k as f64, 0.0)).collect();
        let pts: Vec<Complex64> = jitter.iter().enumerate().map(|(k, j)| centers[k % centers.len()] + 1e-6 * j).collect();
        let groups = cluster_points(&pts, 1e-4);
        prop_assert_eq!(groups.len(), centers.len().min(pts.len()));
    }
}
