//! Plain-text grid matrices and Netpbm heatmaps.

use std::io::{self, BufRead, Write};

use crate::Scalar;

/// Writes a row-major grid as `resolution` comma-separated lines. The first
/// line is the `y = 0` row.
pub fn write_csv_matrix<T: Scalar, W: Write>(values: &[T], resolution: usize, mut out: W) -> io::Result<()> {
    for row in values.chunks(resolution) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Reads a square matrix written by [`write_csv_matrix`]; returns the values
/// and the resolution.
pub fn read_csv_matrix<T: Scalar, R: BufRead>(input: R) -> io::Result<(Vec<T>, usize)> {
    let mut values = Vec::new();
    let mut rows = 0;
    let mut width = None;
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for cell in line.split(',') {
            let v: f64 = cell.trim().parse().map_err(|e| {
                io::Error::new(io::ErrorKind::InvalidData, format!("line {}: bad number `{cell}`: {e}", n + 1))
            })?;
            values.push(T::of(v));
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("line {}: expected {w} columns, found {count}", n + 1),
                ))
            }
            _ => {}
        }
        rows += 1;
    }
    let width = width.unwrap_or(0);
    if width != rows {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("grid is {rows}x{width}, expected a square matrix"),
        ));
    }
    Ok((values, rows))
}

fn to_byte<T: Scalar>(v: T, lo: f64, hi: f64) -> u8 {
    let t = ((v.as_f64() - lo) / (hi - lo)).clamp(0.0, 1.0);
    (t * 255.0).round() as u8
}

/// Binary graymap (P5) on the fixed scale `[lo, hi]`, rows flipped so that
/// `y` increases upwards in the image.
pub fn write_pgm<T: Scalar, W: Write>(values: &[T], resolution: usize, lo: f64, hi: f64, mut out: W) -> io::Result<()> {
    write!(out, "P5\n{resolution} {resolution}\n255\n")?;
    let mut buf = Vec::with_capacity(values.len());
    for row in values.chunks(resolution).rev() {
        buf.extend(row.iter().map(|&v| to_byte(v, lo, hi)));
    }
    out.write_all(&buf)
}

/// Blue → white → red ramp.
fn ramp(t: u8) -> [u8; 3] {
    if t < 128 {
        let s = t as u16 * 2;
        [s as u8, s as u8, 255]
    } else {
        let s = 255 - (t as u16 - 128) * 2;
        [255, s as u8, s as u8]
    }
}

/// Binary pixmap (P6) with a diverging colour ramp over `[lo, hi]`.
pub fn write_ppm<T: Scalar, W: Write>(values: &[T], resolution: usize, lo: f64, hi: f64, mut out: W) -> io::Result<()> {
    write!(out, "P6\n{resolution} {resolution}\n255\n")?;
    let mut buf = Vec::with_capacity(values.len() * 3);
    for row in values.chunks(resolution).rev() {
        for &v in row {
            buf.extend_from_slice(&ramp(to_byte(v, lo, hi)));
        }
    }
    out.write_all(&buf)
}
