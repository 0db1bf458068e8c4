//! Straightening of the period ≤ 4 centers, and the parabolic-index comparison.

use schwarz_lab::straightening::{chi_center, index_experiment, schwarz_centers};

fn main() -> schwarz_lab::Result<()> {
    for k in 2..=4 {
        for a in schwarz_centers(k) {
            let r = chi_center(a)?;
            println!(
                "a = {:<22} ({} {})  ->  c = {:<22} ({} {})",
                format!("{:.12}", r.a.re),
                r.characteristic_angles_s.0,
                r.characteristic_angles_s.1,
                format!("{:.12}", r.c.re),
                r.characteristic_angles_t.0,
                r.characteristic_angles_t.1
            );
        }
    }
    let e = index_experiment()?;
    println!("indices: Schwarz {:.10}, Tricorn {:.10}, separation {:.6}", e.iota_s, e.iota_t, e.separation);
    Ok(())
}
