//! The ideal triangle reflection group: side reflections, the map ρ on the circle, tiles by word.

use num_complex::Complex64;
use schwarz_lab::point::Finite;
use schwarz_lab::triangle::{admissible_words, rho_circle, side_reflection, tile_for_word};

fn main() {
    let z = Complex64::new(0.1, 0.2);
    for j in 1..=3 {
        let once = side_reflection(j, Finite(z));
        let twice = side_reflection(j, once);
        println!("side {j}: {z} -> {once} -> {twice}");
    }
    for t in [0.0, 1.0 / 3.0, 2.0 / 3.0, 0.1, 0.5] {
        println!("rho({t:.4}) = {:.6}", rho_circle(t));
    }
    for w in admissible_words(3).iter().take(6) {
        let tile = tile_for_word(w).unwrap();
        println!("tile {w}: rank {} diameter {:.4}", tile.rank(), tile.diameter());
    }
}
