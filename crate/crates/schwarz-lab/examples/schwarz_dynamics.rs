//! Dynamics of F_a: centers, the superattracting cycle at a = 3/16, periodic cycles and rays.

use num_complex::Complex64;
use schwarz_lab::coding::AngleCode;
use schwarz_lab::point::{Finite, Infinity};
use schwarz_lab::schwarz::{depth, find_center, find_cycles, periodic_landing, trace_dynamical_ray, CycleGrid, SchwarzMap};

fn main() -> schwarz_lab::Result<()> {
    for (k, seed) in [(2, 0.01), (3, 0.2), (4, 0.23), (4, 0.06)] {
        println!("period {k} center from {seed}: {}", find_center(k, Finite(Complex64::new(seed, 0.0)))?);
    }
    let map = SchwarzMap::real(3.0 / 16.0)?;
    let mut w = Finite(Complex64::new(0.0, 0.0));
    print!("critical orbit:");
    for _ in 0..4 {
        print!(" {w}");
        w = map.apply(w)?;
    }
    println!();
    for rec in find_cycles(&map, 2, &CycleGrid::default()) {
        println!("2-cycle {:?} multiplier {:.6}", rec.classification, rec.holomorphic_multiplier());
    }
    let code = AngleCode::parse("|213231")?;
    let ray = trace_dynamical_ray(&map, &code, 40)?;
    let (landing, gap) = periodic_landing(&map, &code)?;
    println!("ray {code}: {} points, landing {landing:.9} (gap {gap:.1e})", ray.points.len());
    println!("depth(10) = {}", depth(Finite(Complex64::new(10.0, 0.0)), 50)?);
    println!("F_a(∞) = {}", map.apply(Infinity)?);
    Ok(())
}
