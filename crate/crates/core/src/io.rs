//! Text and raster encodings of every emitted object, plus atomic file
//! writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};

use crate::error::Result;
use crate::fields::{BoolField, ScalarField, Voxel};
use crate::grid::GridSpec;
use crate::msets::{PlateauHistogram, StepFunction};
use crate::templates::DyadicIntervalSet;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent notation outside `[1e-5, 1e17)`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn interval_set_csv(set: &DyadicIntervalSet) -> String {
    let mut out = String::from("depth,index\n");
    for j in set.members() {
        writeln!(out, "{},{}", set.depth(), j).unwrap();
    }
    out
}

pub fn step_function_csv(f: &StepFunction) -> String {
    let mut out = String::from("t,phi\n");
    for (t, phi) in f.breakpoints().zip(f.values()) {
        writeln!(out, "{},{}", fmt_g17(t), fmt_g17(phi)).unwrap();
    }
    out
}

pub fn histogram_csv(h: &PlateauHistogram) -> String {
    let mut out = String::from("length,count\n");
    for (l, s) in &h.counts {
        writeln!(out, "{l},{s}").unwrap();
    }
    out
}

pub fn loglog_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("log_length,log_count_plus_one\n");
    for &(x, y) in points {
        writeln!(out, "{},{}", fmt_g17(x), fmt_g17(y)).unwrap();
    }
    out
}

fn grid_csv<F: Fn(usize) -> String>(grid: &GridSpec, value: F) -> String {
    let mut out = String::from("re,im,value\n");
    for i in 0..grid.len() {
        let z = grid.point_at(i);
        writeln!(out, "{},{},{}", fmt_g17(z.re), fmt_g17(z.im), value(i)).unwrap();
    }
    out
}

pub fn scalar_field_csv(field: &ScalarField) -> String {
    grid_csv(&field.grid, |i| fmt_g17(field.data[i]))
}

pub fn bool_field_csv(field: &BoolField) -> String {
    grid_csv(&field.grid, |i| if field.data[i] { "1".into() } else { "0".into() })
}

pub fn voxels_csv(voxels: &[Voxel]) -> String {
    let mut out = String::from("re_c0,re_c1,im_c1\n");
    for v in voxels {
        writeln!(out, "{},{},{}", fmt_g17(v.re_c0), fmt_g17(v.re_c1), fmt_g17(v.im_c1)).unwrap();
    }
    out
}

/// One byte per cell: `round(v * 255)`, clamped to `[0, 255]`.
pub fn scalar_gray(field: &ScalarField) -> Vec<u8> {
    field
        .data
        .iter()
        .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect()
}

pub fn bool_gray(field: &BoolField) -> Vec<u8> {
    field.data.iter().map(|&b| if b { 255 } else { 0 }).collect()
}

/// Binary PGM (`P5`, maxval 255).
pub fn pgm(grid: &GridSpec, gray: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", grid.cols, grid.rows).into_bytes();
    out.extend_from_slice(gray);
    out
}

/// 8-bit grayscale PNG with the same byte-per-pixel mapping as [`pgm`].
pub fn png(grid: &GridSpec, gray: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(gray, grid.cols as u32, grid.rows as u32, ExtendedColorType::L8)?;
    Ok(out)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::msets::accumulation_map;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(0.25), "0.25");
        assert_eq!(fmt_g17(-1.5), "-1.5");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_g17(2f64.powi(-20)), "9.5367431640625e-07");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(0.0001), "0.0001");
    }

    #[test]
    fn g17_round_trips() {
        for &x in &[0.1, 2.0 / 3.0, -1.9921875, 1e-300, 6.02e23, std::f64::consts::LN_2] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layouts() {
        let set = DyadicIntervalSet::new(2, vec![0, 2]).unwrap();
        assert_eq!(interval_set_csv(&set), "depth,index\n2,0\n2,2\n");
        assert_eq!(
            step_function_csv(&accumulation_map(&set)),
            "t,phi\n0,0\n0.25,0.25\n0.5,0.25\n0.75,0.5\n1,0.5\n"
        );
    }

    #[test]
    fn pgm_header_and_mapping() {
        let grid = GridSpec::new(0.0, 1.0, 0.0, 1.0, 3, 1).unwrap();
        let field = ScalarField { grid, data: vec![0.0, 0.5, 1.0] };
        let bytes = pgm(&grid, &scalar_gray(&field));
        assert_eq!(&bytes[..11], b"P5\n3 1\n255\n");
        assert_eq!(&bytes[11..], &[0, 128, 255]);
    }

    #[test]
    fn png_decodes_to_same_bytes() {
        let grid = GridSpec::new(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let gray = vec![0, 64, 128, 255];
        let bytes = png(&grid, &gray).unwrap();
        let img = image::load_from_memory(&bytes).unwrap().to_luma8();
        assert_eq!(img.into_raw(), gray);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"a").unwrap();
        write_atomic(&path, b"bc").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"bc");
    }
}
