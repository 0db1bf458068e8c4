//! The circle conjugacy between ρ and angle doubling with reversed orientation, on exact codes.

use schwarz_lab::coding::{m2_map, periodic_angles, E_inverse, E_of, RationalAngle};

fn main() {
    for t in [RationalAngle::new(1, 3), RationalAngle::new(3, 7), RationalAngle::new(1, 5), RationalAngle::new(7, 15)] {
        let r = E_inverse(&t);
        let back = E_of(&r.image()).unwrap();
        println!("{:>6}  code {:<10} position {:.9}  rho-image corresponds to {}", format!("{}/{}", t.numer(), t.denom()), r.code.to_string(), r.numeric, back);
        assert_eq!(back, m2_map(&t));
    }
    for n in 1..=5 {
        println!("period {n}: {} angles", periodic_angles(n).len());
    }
}
