//! Writes the four standard pictures and a lamination disk as PNG (and SVG) into a directory.

use num_complex::Complex64;
use schwarz_lab::coding::RationalAngle;
use schwarz_lab::export::{write_png, write_text};
use schwarz_lab::lamination::pullback_lamination;
use schwarz_lab::render::*;
use std::path::PathBuf;

fn main() -> schwarz_lab::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "pictures".into()));
    std::fs::create_dir_all(&dir).expect("output directory");
    let n = 600;

    let (img, scan) = render_cs_locus(&RenderJob::standard(Target::CsLocus, n))?;
    println!("locus: {} of {} pixels escape", scan.iter().filter(|r| r.depth.is_some()).count(), scan.len());
    write_png(&img, &dir.join("cs_locus.png"))?;

    let a = Complex64::new(3.0 / 16.0, 0.0);
    write_png(&render_dynamical_plane(a, &RenderJob::standard(Target::DynPlane(a), n))?, &dir.join("dyn_3_16.png"))?;
    write_png(&render_tricorn(&RenderJob::standard(Target::Tricorn, n))?, &dir.join("tricorn.png"))?;
    write_png(&render_basilica_limb(&RenderJob::standard(Target::BasilicaLimb, n))?, &dir.join("limb.png"))?;

    let lam = pullback_lamination(&RationalAngle::new(1, 3), &RationalAngle::new(2, 3), 6)?;
    let (img, svg) = render_lamination_disk(&lam, &RenderJob::standard(Target::LaminationDisk, n))?;
    write_png(&img, &dir.join("basilica_disk.png"))?;
    write_text(&svg, &dir.join("basilica_disk.svg"))?;
    println!("wrote pictures to {}", dir.display());
    Ok(())
}
