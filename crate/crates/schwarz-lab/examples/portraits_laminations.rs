//! Orbit portraits from characteristic pairs, pullback laminations, and the two parameter models.

use schwarz_lab::coding::{RationalAngle, RhoAngle};
use schwarz_lab::lamination::{model_isomorphism_check, pullback_lamination, Angle};
use schwarz_lab::portrait::{characteristic_arc, generate_portrait_from_pair, push_forward_E};

fn main() -> schwarz_lab::Result<()> {
    let p = generate_portrait_from_pair(&RationalAngle::new(3, 7), &RationalAngle::new(4, 7))?;
    let (a, b) = characteristic_arc(&p)?;
    println!("airplane portrait: {} classes, characteristic arc ({a}, {b})", p.orbit_period());
    let rho = push_forward_E(&p)?;
    println!("under ρ: {:?}", rho.classes.iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());

    let basilica = pullback_lamination(&RationalAngle::new(1, 3), &RationalAngle::new(2, 3), 4)?;
    println!("basilica lamination to depth 4: {} leaves, unlinked {}", basilica.leaves.len(), basilica.is_unlinked());
    let (s, t) = (<RhoAngle as Angle>::from_key(&RationalAngle::new(1, 3)), <RhoAngle as Angle>::from_key(&RationalAngle::new(2, 3)));
    let rho_lam = pullback_lamination(&s, &t, 4)?;
    println!("ρ side: {} leaves", rho_lam.leaves.len());

    let report = model_isomorphism_check(5);
    println!("models to period 5: {} / {} leaves, bijective {}, order kept {}", report.leaves_tricorn, report.leaves_schwarz, report.bijective, report.order_preserved);
    Ok(())
}
