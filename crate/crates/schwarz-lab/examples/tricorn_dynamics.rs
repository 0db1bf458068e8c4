//! Quadratic anti-polynomials: centers, dynamical rays at the basilica, parameter rays 1/3 and 2/3.

use num_complex::Complex64;
use schwarz_lab::coding::RationalAngle;
use schwarz_lab::tricorn::{find_center, rational_lamination, trace_dynamical_ray, trace_parameter_ray, AntiPolynomial};

fn main() -> schwarz_lab::Result<()> {
    for (k, seed) in [(1, 0.0), (2, -1.1), (3, -1.8)] {
        println!("period {k} center: {}", find_center(k, Complex64::new(seed, 0.0))?);
    }
    let f = AntiPolynomial::real(-1.0);
    for t in [RationalAngle::new(1, 3), RationalAngle::new(2, 3)] {
        let ray = trace_dynamical_ray(&f, &t, 60)?;
        println!("dynamical ray {t}: lands at {:.9} (gap {:.1e})", ray.landing_estimate, ray.cauchy_gap);
    }
    let lam = rational_lamination(Complex64::new(-1.0, 0.0), 4, 60)?;
    println!("basilica: {} leaves up to period 4, resolution {:.2e}", lam.lamination.leaves.len(), lam.resolution);
    for t in [RationalAngle::new(1, 3), RationalAngle::new(2, 3)] {
        let ray = trace_parameter_ray(&t, 14)?;
        println!("parameter ray {t}: ends near {:.6}", ray.landing_estimate);
    }
    Ok(())
}
