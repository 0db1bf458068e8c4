//! Raster and vector pictures of the parameter planes, dynamical planes and lamination disks.
//!
//! Pixel (i, j) of a w×h image, row 0 at the top, samples the plane at its center:
//! x = cx + (i + ½ − w/2)·width/w and y = cy + (h/2 − j − ½)·height/h.

use crate::coding::{AngleCode, RationalAngle};
use crate::error::{Error, Result};
use crate::lamination::{Angle, Lamination};
use crate::point::Finite;
use crate::schwarz::{self, SchwarzMap};
use crate::tolerances::Tolerances;
use crate::triangle::Word;
use crate::tricorn::{self, Escape};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::fmt::Write as _;

pub const MAX_RESOLUTION: usize = 16384;

pub type Rgb = [u8; 3];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Target {
    CsLocus,
    DynPlane(Complex64),
    Tricorn,
    BasilicaLimb,
    LaminationDisk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn new(center: Complex64, width: f64, height: f64) -> Window {
        Window { center, width, height }
    }

    pub fn square(center: Complex64, width: f64) -> Window {
        Window::new(center, width, width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Overlay {
    ParameterRay(RationalAngle),
    #[serde(serialize_with = "code_text")]
    DynamicalRay(AngleCode),
    Points(Vec<Complex64>),
    Slit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Palette {
    pub interior: Rgb,
    pub background: Rgb,
    pub slit: Rgb,
    pub outline: Rgb,
    pub overlay: Rgb,
    /// Shading cycle length in escape ranks.
    pub shade_period: usize,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            interior: [18, 18, 30],
            background: [250, 250, 245],
            slit: [200, 30, 30],
            outline: [0, 0, 0],
            overlay: [230, 60, 20],
            shade_period: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenderJob {
    pub target: Target,
    pub window: Window,
    pub resolution: (usize, usize),
    pub max_iter: usize,
    pub overlays: Vec<Overlay>,
    pub palette: Palette,
    pub tolerances: Tolerances,
}

impl RenderJob {
    pub fn new(target: Target, window: Window, resolution: (usize, usize)) -> RenderJob {
        RenderJob { target, window, resolution, max_iter: 200, overlays: Vec::new(), palette: Palette::default(), tolerances: Tolerances::default() }
    }

    /// Default framing of each target.
    pub fn standard(target: Target, pixels: usize) -> RenderJob {
        let window = match target {
            Target::CsLocus => Window::square(Complex64::new(0.07, 0.0), 0.5),
            Target::DynPlane(a) => Window::square(Complex64::new(a.re.min(0.5) - 0.5, 0.0), 4.0),
            Target::Tricorn => Window::square(Complex64::new(0.0, 0.0), 4.0),
            Target::BasilicaLimb => Window::square(Complex64::new(-1.45, 0.0), 1.3),
            Target::LaminationDisk => Window::square(Complex64::new(0.0, 0.0), 2.2),
        };
        RenderJob::new(target, window, (pixels, pixels))
    }

    pub fn validate(&self) -> Result<()> {
        let (w, h) = self.resolution;
        if w == 0 || h == 0 || w > MAX_RESOLUTION || h > MAX_RESOLUTION {
            return Err(Error::InvalidInput(format!("resolution {w}x{h} outside 1..={MAX_RESOLUTION}")));
        }
        let win = &self.window;
        if !(win.width > 0.0 && win.height > 0.0 && win.width.is_finite() && win.height.is_finite() && win.center.is_finite()) {
            return Err(Error::InvalidInput("degenerate window".into()));
        }
        Ok(())
    }

    pub fn pixel_to_plane(&self, i: usize, j: usize) -> Complex64 {
        let (w, h) = (self.resolution.0 as f64, self.resolution.1 as f64);
        let win = &self.window;
        Complex64::new(
            win.center.re + (i as f64 + 0.5 - w / 2.0) * win.width / w,
            win.center.im + (h / 2.0 - j as f64 - 0.5) * win.height / h,
        )
    }

    /// Inverse of `pixel_to_plane` in continuous pixel coordinates.
    pub fn plane_to_pixel(&self, z: Complex64) -> (f64, f64) {
        let (w, h) = (self.resolution.0 as f64, self.resolution.1 as f64);
        let win = &self.window;
        ((z.re - win.center.re) * w / win.width + w / 2.0 - 0.5, h / 2.0 - 0.5 - (z.im - win.center.im) * h / win.height)
    }
}

/// 8-bit RGB, row-major, no alpha.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn filled(width: usize, height: usize, color: Rgb) -> Image {
        Image { width, height, pixels: color.repeat(width * height) }
    }

    pub fn get(&self, i: usize, j: usize) -> Rgb {
        let k = 3 * (j * self.width + i);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }

    pub fn put(&mut self, i: usize, j: usize, c: Rgb) {
        let k = 3 * (j * self.width + i);
        self.pixels[k..k + 3].copy_from_slice(&c);
    }

    fn put_f(&mut self, x: f64, y: f64, c: Rgb) {
        let (i, j) = (x.round(), y.round());
        if i >= 0.0 && j >= 0.0 && (i as usize) < self.width && (j as usize) < self.height {
            self.put(i as usize, j as usize, c);
        }
    }

    /// Polyline in pixel coordinates, sampled at half-pixel spacing.
    pub fn draw_polyline(&mut self, pts: &[(f64, f64)], c: Rgb) {
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = (b.0 - a.0).hypot(b.1 - a.1);
            if !len.is_finite() || len > 4.0 * (self.width + self.height) as f64 {
                continue;
            }
            let n = (2.0 * len).ceil().max(1.0) as usize;
            for k in 0..=n {
                let t = k as f64 / n as f64;
                self.put_f(a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1), c);
            }
        }
    }

    fn from_rows(width: usize, height: usize, rows: Vec<Vec<u8>>) -> Image {
        Image { width, height, pixels: rows.concat() }
    }
}

fn hsv(h: f64, s: f64, v: f64) -> Rgb {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let f = h6 - h6.floor();
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match h6 as u32 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [(r * 255.0).round() as u8, (g * 255.0).round() as u8, (b * 255.0).round() as u8]
}

/// Hue in [0, 1) from the first 8 symbols, read as base-3 digits (symbol − 1).
pub fn address_hue(word: &Word) -> f64 {
    let mut h = 0.0;
    let mut scale = 1.0 / 3.0;
    for &s in word.symbols().iter().take(8) {
        h += f64::from(s.saturating_sub(1)) * scale;
        scale /= 3.0;
    }
    h
}

fn escape_color(word: &Word, rank: usize, pal: &Palette) -> Rgb {
    let shade = (rank % pal.shade_period.max(1)) as f64 / pal.shade_period.max(1) as f64;
    hsv(address_hue(word), 0.65, 1.0 - 0.55 * shade)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub re_a: f64,
    pub im_a: f64,
    /// Rank at which ∞ reaches the fundamental tile; None when bounded or on the slit.
    pub depth: Option<usize>,
    pub slit: bool,
    pub address: Word,
    pub color: Rgb,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "re_a,im_a,depth,address,r,g,b";

    pub fn csv_line(&self) -> String {
        let depth = match (self.slit, self.depth) {
            (true, _) => "slit".to_string(),
            (false, Some(d)) => d.to_string(),
            (false, None) => "bounded".to_string(),
        };
        format!("{:.17e},{:.17e},{},{},{},{},{}", self.re_a, self.im_a, depth, self.address, self.color[0], self.color[1], self.color[2])
    }
}

/// Slit test, then escape depth and address of ∞ for one parameter.
pub fn scan_parameter(a: Complex64, max_iter: usize, tol: &Tolerances, pal: &Palette) -> ScanRow {
    match schwarz::parameter_record(a, max_iter, tol) {
        None => ScanRow { re_a: a.re, im_a: a.im, depth: None, slit: true, address: Word(Vec::new()), color: pal.slit },
        Some(rec) if rec.escapes => {
            let color = escape_color(&rec.address, rec.rank, pal);
            ScanRow { re_a: a.re, im_a: a.im, depth: Some(rec.rank), slit: false, address: rec.address, color }
        }
        Some(rec) => ScanRow { re_a: a.re, im_a: a.im, depth: None, slit: false, address: rec.address, color: pal.interior },
    }
}

/// Parameter plane of the Schwarz family with per-pixel scan data (rows top to bottom).
pub fn render_cs_locus(job: &RenderJob) -> Result<(Image, Vec<ScanRow>)> {
    job.validate()?;
    let (w, h) = job.resolution;
    let rows: Vec<Vec<ScanRow>> = (0..h)
        .into_par_iter()
        .map(|j| (0..w).map(|i| scan_parameter(job.pixel_to_plane(i, j), job.max_iter, &job.tolerances, &job.palette)).collect())
        .collect();
    let scan: Vec<ScanRow> = rows.into_iter().flatten().collect();
    let mut img = Image { width: w, height: h, pixels: scan.iter().flat_map(|r| r.color).collect() };
    draw_overlays(&mut img, job, None)?;
    Ok((img, scan))
}

/// Dynamical plane of F_a: tiles coloured by address and rank, the non-escaping set flat, the
/// boundary of the droplet outlined.
pub fn render_dynamical_plane(a: Complex64, job: &RenderJob) -> Result<Image> {
    job.validate()?;
    let map = SchwarzMap::with_tolerances(Finite(a), job.tolerances)?;
    let (w, h) = job.resolution;
    let pal = &job.palette;
    let classes: Vec<Vec<(Rgb, bool)>> = (0..h)
        .into_par_iter()
        .map(|j| {
            (0..w)
                .map(|i| {
                    let z = job.pixel_to_plane(i, j);
                    let rec = map.classify_point(Finite(z), job.max_iter);
                    let color = if rec.escapes { escape_color(&rec.address, rec.rank, pal) } else { pal.interior };
                    (color, rec.escapes && rec.rank == 0)
                })
                .collect()
        })
        .collect();
    let mut img = Image::from_rows(w, h, classes.iter().map(|r| r.iter().flat_map(|p| p.0).collect()).collect());
    for j in 0..h {
        for i in 0..w {
            let d = classes[j][i].1;
            let edge = (i + 1 < w && classes[j][i + 1].1 != d) || (j + 1 < h && classes[j + 1][i].1 != d);
            if edge && d {
                img.put(i, j, pal.outline);
            }
        }
    }
    draw_overlays(&mut img, job, Some(&map))?;
    Ok(img)
}

fn render_escape_time(job: &RenderJob) -> Result<Image> {
    job.validate()?;
    let (w, h) = job.resolution;
    let pal = &job.palette;
    let rows: Vec<Vec<u8>> = (0..h)
        .into_par_iter()
        .map(|j| {
            (0..w)
                .flat_map(|i| {
                    let c = job.pixel_to_plane(i, j);
                    match tricorn::escape_time(c, c, 4.0, job.max_iter) {
                        Escape::Bounded => pal.interior,
                        Escape::Escaped(n) => {
                            let t = (n % pal.shade_period.max(1)) as f64 / pal.shade_period.max(1) as f64;
                            hsv(0.58 + 0.3 * t, 0.5, 1.0 - 0.4 * t)
                        }
                    }
                })
                .collect()
        })
        .collect();
    let mut img = Image::from_rows(w, h, rows);
    draw_overlays(&mut img, job, None)?;
    Ok(img)
}

/// Escape-time picture of the Tricorn (critical orbit from c).
pub fn render_tricorn(job: &RenderJob) -> Result<Image> {
    render_escape_time(job)
}

/// The real basilica limb; the parameter rays at 1/3 and 2/3 are added when no overlay is given.
pub fn render_basilica_limb(job: &RenderJob) -> Result<Image> {
    if job.overlays.is_empty() {
        let mut job = job.clone();
        job.overlays = vec![Overlay::ParameterRay(RationalAngle::new(1, 3)), Overlay::ParameterRay(RationalAngle::new(2, 3))];
        return render_escape_time(&job);
    }
    render_escape_time(job)
}

const OVERLAY_LEVELS: usize = 14;
const OVERLAY_DEPTH: usize = 30;

fn draw_overlays(img: &mut Image, job: &RenderJob, map: Option<&SchwarzMap>) -> Result<()> {
    let col = job.palette.overlay;
    for ov in &job.overlays {
        let pts: Vec<Complex64> = match ov {
            Overlay::ParameterRay(t) => tricorn::trace_parameter_ray(t, OVERLAY_LEVELS)?.points,
            Overlay::DynamicalRay(code) => {
                let map = map.ok_or_else(|| Error::InvalidInput("dynamical rays need a dynamical plane".into()))?;
                schwarz::trace_dynamical_ray(map, code, OVERLAY_DEPTH)?.points
            }
            Overlay::Points(ps) => {
                for p in ps {
                    let (x, y) = job.plane_to_pixel(*p);
                    for dx in -2..=2 {
                        for dy in -2..=2 {
                            img.put_f(x + f64::from(dx), y + f64::from(dy), col);
                        }
                    }
                }
                continue;
            }
            Overlay::Slit => {
                // Mark real parameters where the circumcircle is not unique.
                let (_, y) = job.plane_to_pixel(Complex64::new(0.0, 0.0));
                for i in 0..img.width {
                    let x = job.pixel_to_plane(i, 0).re;
                    if matches!(crate::cardioid::circumcircle_with(Finite(Complex64::new(x, 0.0)), &job.tolerances), Err(Error::SlitError { .. })) {
                        img.put_f(i as f64, y, job.palette.slit);
                    }
                }
                continue;
            }
        };
        let px: Vec<(f64, f64)> = pts.iter().map(|&z| job.plane_to_pixel(z)).collect();
        img.draw_polyline(&px, col);
    }
    Ok(())
}

/// Geodesic of the unit disk between e^{2πis} and e^{2πit}, as sampled points.
pub fn geodesic_points(s: f64, t: f64, samples: usize) -> Vec<Complex64> {
    let p = Complex64::from_polar(1.0, TAU * s);
    let q = Complex64::from_polar(1.0, TAU * t);
    let delta = (q / p).arg();
    if (delta.abs() - std::f64::consts::PI).abs() < 1e-12 {
        return (0..=samples).map(|k| p + (q - p) * (k as f64 / samples as f64)).collect();
    }
    let center = (p + q) / (1.0 + delta.cos());
    let r = (delta / 2.0).tan().abs();
    let (a0, a1) = ((p - center).arg(), (q - center).arg());
    let mut span = a1 - a0;
    span -= TAU * (span / TAU).round();
    (0..=samples).map(|k| center + Complex64::from_polar(r, a0 + span * k as f64 / samples as f64)).collect()
}

/// Signed side of z relative to the geodesic (s, t): negative inside the disk cut off by the
/// orthogonal circle (or to the right of a diameter).
fn geodesic_side(s: f64, t: f64, z: Complex64) -> f64 {
    let p = Complex64::from_polar(1.0, TAU * s);
    let q = Complex64::from_polar(1.0, TAU * t);
    let delta = (q / p).arg();
    if (delta.abs() - std::f64::consts::PI).abs() < 1e-12 {
        return ((q - p).conj() * (z - p)).im;
    }
    let center = (p + q) / (1.0 + delta.cos());
    let r = (delta / 2.0).tan();
    (z - center).norm_sqr() - r * r
}

/// Gaps (in the cyclic order) of each class with at least three angles, as turns.
fn polygons<A: Angle>(lam: &Lamination<A>) -> Vec<Vec<f64>> {
    lam.classes
        .iter()
        .filter(|c| c.len() >= 3)
        .map(|c| {
            let mut t: Vec<f64> = c.iter().map(|a| a.turn()).collect();
            t.sort_by(|x, y| x.partial_cmp(y).unwrap());
            t
        })
        .collect()
}

fn inside_polygon(turns: &[f64], z: Complex64) -> bool {
    let n = turns.len();
    (0..n).all(|k| {
        let (s, t) = (turns[k], turns[(k + 1) % n]);
        let other = Complex64::from_polar(1.0, TAU * turns[(k + 2) % n]);
        geodesic_side(s, t, z) * geodesic_side(s, t, other) >= 0.0
    })
}

/// Leaves as hyperbolic geodesics and classes of three or more angles as filled ideal polygons.
/// Returns the raster picture and an SVG document of the same drawing.
pub fn render_lamination_disk<A: Angle>(lam: &Lamination<A>, job: &RenderJob) -> Result<(Image, String)> {
    job.validate()?;
    if !lam.crossings().is_empty() {
        return Err(Error::InvalidInput("lamination has crossing leaves".into()));
    }
    let (w, h) = job.resolution;
    let pal = &job.palette;
    let polys = polygons(lam);
    let rows: Vec<Vec<u8>> = (0..h)
        .into_par_iter()
        .map(|j| {
            (0..w)
                .flat_map(|i| {
                    let z = job.pixel_to_plane(i, j);
                    if z.norm() > 1.0 {
                        pal.background
                    } else if polys.iter().any(|p| inside_polygon(p, z)) {
                        pal.overlay
                    } else {
                        [255, 255, 255]
                    }
                })
                .collect()
        })
        .collect();
    let mut img = Image::from_rows(w, h, rows);
    let circle: Vec<(f64, f64)> = (0..=720).map(|k| job.plane_to_pixel(Complex64::from_polar(1.0, TAU * k as f64 / 720.0))).collect();
    img.draw_polyline(&circle, pal.outline);
    for leaf in &lam.leaves {
        let pts = geodesic_points(leaf.endpoints[0].turn(), leaf.endpoints[1].turn(), 256);
        let px: Vec<(f64, f64)> = pts.iter().map(|&z| job.plane_to_pixel(z)).collect();
        img.draw_polyline(&px, pal.outline);
    }
    Ok((img, lamination_svg(lam, w as f64)))
}

fn svg_point(z: Complex64, size: f64) -> (f64, f64) {
    (size / 2.0 * (1.0 + 0.9 * z.re), size / 2.0 * (1.0 - 0.9 * z.im))
}

fn svg_geodesic(s: f64, t: f64, size: f64, out: &mut String, first: bool) {
    let p = Complex64::from_polar(1.0, TAU * s);
    let q = Complex64::from_polar(1.0, TAU * t);
    let (px, py) = svg_point(p, size);
    let (qx, qy) = svg_point(q, size);
    if first {
        let _ = write!(out, "M {px:.3} {py:.3} ");
    }
    let delta = (q / p).arg();
    if (delta.abs() - std::f64::consts::PI).abs() < 1e-12 {
        let _ = write!(out, "L {qx:.3} {qy:.3} ");
    } else {
        let r = (delta / 2.0).tan().abs() * 0.45 * size;
        // Counter-clockwise travel from p to q bends the geodesic clockwise, and y points down in SVG.
        let sweep = u8::from(delta < 0.0);
        let _ = write!(out, "A {r:.3} {r:.3} 0 0 {sweep} {qx:.3} {qy:.3} ");
    }
}

pub fn lamination_svg<A: Angle>(lam: &Lamination<A>, size: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(s, r#"<circle cx="{0}" cy="{0}" r="{1}" fill="white" stroke="black"/>"#, size / 2.0, 0.45 * size);
    for poly in polygons(lam) {
        let mut d = String::new();
        for k in 0..poly.len() {
            svg_geodesic(poly[k], poly[(k + 1) % poly.len()], size, &mut d, k == 0);
        }
        let _ = writeln!(s, r#"<path d="{}Z" fill="rgb(230,60,20)" stroke="none"/>"#, d);
    }
    for leaf in &lam.leaves {
        let mut d = String::new();
        svg_geodesic(leaf.endpoints[0].turn(), leaf.endpoints[1].turn(), size, &mut d, true);
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="black" stroke-width="0.6"><title>{}</title></path>"#, d.trim_end(), leaf);
    }
    s.push_str("</svg>\n");
    s
}

fn code_text<S: serde::Serializer>(code: &AngleCode, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&code.to_string())
}
