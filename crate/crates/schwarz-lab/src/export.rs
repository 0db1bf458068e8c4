//! File formats: PNG (8-bit RGB), CSV with a header row, versioned JSON, SVG.

use crate::error::{Error, Result};
use crate::render::{Image, ScanRow};
use serde::Serialize;
use std::fs;
use std::path::Path;

pub const SCHEMA: &str = "sdl-1";

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    kind: &'a str,
    data: &'a T,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("i/o: {e}"))
}

/// Pretty JSON wrapped as {"schema": "sdl-1", "kind": ..., "data": ...}.
pub fn to_json<T: Serialize>(kind: &str, data: &T) -> Result<String> {
    serde_json::to_string_pretty(&Envelope { schema: SCHEMA, kind, data }).map_err(io)
}

pub fn png_bytes(img: &Image) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width as u32, img.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(io)?;
        w.write_image_data(&img.pixels).map_err(io)?;
    }
    Ok(out)
}

pub fn write_png(img: &Image, path: &Path) -> Result<()> {
    fs::write(path, png_bytes(img)?).map_err(io)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s = String::with_capacity(64 * rows.len());
    s.push_str(ScanRow::CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

pub fn write_text(text: &str, path: &Path) -> Result<()> {
    fs::write(path, text).map_err(io)
}

/// Sidecar `<path>.meta.json` with the run configuration and wall-clock time; the payload itself
/// stays free of timestamps.
pub fn write_sidecar<T: Serialize>(path: &Path, config: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Meta<'a, T: Serialize> {
        schema: &'static str,
        version: &'static str,
        unix_time: u64,
        config: &'a T,
    }
    let unix_time = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = Meta { schema: SCHEMA, version: env!("CARGO_PKG_VERSION"), unix_time, config };
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    fs::write(Path::new(&name), serde_json::to_string_pretty(&meta).map_err(io)?).map_err(io)
}
