//! Circumcircle of the cardioid about a few centers, and the cardioid's Schwarz reflection.

use num_complex::Complex64;
use schwarz_lab::cardioid::{circumcircle, schwarz_sigma};
use schwarz_lab::point::{ComplexValue, Finite};

fn main() {
    for a in [0.0, 3.0 / 16.0, 2.0 / 9.0, 10.0, -1.0] {
        match circumcircle(ComplexValue::real(a)) {
            Ok(g) => println!("a = {a:<8} r = {:.12}  tangency {:.6}  reflected {:.6}", g.r_a, g.alpha, g.alpha_prime),
            Err(e) => println!("a = {a:<8} {e}"),
        }
    }
    for w in [3.0 / 16.0, 2.0 / 9.0, 0.0] {
        println!("sigma({w}) = {}", schwarz_sigma(Finite(Complex64::new(w, 0.0))).unwrap());
    }
}
