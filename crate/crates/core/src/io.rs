//! Readers and writers for the exported artifacts: JSON documents and the
//! `x,lambda` / `x,y,lambda` CSV grids.
//!
//! Floats go out in Rust's shortest round-trip form, so reading a file back
//! gives the same bits.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

/// Pretty JSON with a trailing newline. Field order follows the struct, so
/// equal values give identical bytes.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample1D {
    pub x: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample2D {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
}

fn write_rows<W: Write, T: Serialize>(w: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: DeserializeOwned>(r: R, header: &[&str]) -> Result<Vec<T>> {
    let mut rd = csv::Reader::from_reader(r);
    let got: Vec<String> = rd.headers()?.iter().map(str::to_owned).collect();
    if got != header {
        return Err(Error::Parse(format!("expected header {}, found {}", header.join(","), got.join(","))));
    }
    Ok(rd.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

/// `x,lambda` rows.
pub fn write_samples_csv<W: Write>(w: W, samples: &[(f64, f64)]) -> Result<()> {
    write_rows(w, samples.iter().map(|&(x, lambda)| Sample1D { x, lambda }))
}

pub fn read_samples_csv<R: Read>(r: R) -> Result<Vec<(f64, f64)>> {
    let rows: Vec<Sample1D> = read_rows(r, &["x", "lambda"])?;
    Ok(rows.into_iter().map(|s| (s.x, s.lambda)).collect())
}

/// `x,y,lambda` rows, in the order given (row-major for surfaces).
pub fn write_grid_csv<W: Write>(w: W, points: &[[f64; 3]]) -> Result<()> {
    write_rows(w, points.iter().map(|&[x, y, lambda]| Sample2D { x, y, lambda }))
}

pub fn read_grid_csv<R: Read>(r: R) -> Result<Vec<[f64; 3]>> {
    let rows: Vec<Sample2D> = read_rows(r, &["x", "y", "lambda"])?;
    Ok(rows.into_iter().map(|s| [s.x, s.y, s.lambda]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue2d::{zero_curves, CardinalEvaluator, ZeroCurve};
    use crate::nodes1d::{chebyshev1, NodeSet1D};
    use crate::nodes2d::{padua, NodeSet2D};

    #[test]
    fn samples_round_trip() {
        let ns = chebyshev1(7).unwrap();
        let s = crate::lebesgue1d::sample(&ns, &crate::lebesgue1d::uniform_grid(101));
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &s).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("x,lambda\n"));
        assert_eq!(read_samples_csv(&buf[..]).unwrap(), s);
    }

    #[test]
    fn grid_round_trip() {
        let ce = CardinalEvaluator::new(&padua(3).unwrap()).unwrap();
        let pts = crate::lebesgue2d::surface(&ce, 12);
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &pts).unwrap();
        assert_eq!(read_grid_csv(&buf[..]).unwrap(), pts);
        // wrong header
        assert!(read_samples_csv(&buf[..]).is_err());
    }

    #[test]
    fn json_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let ns = chebyshev1(9).unwrap();
        let p = dir.path().join("n.json");
        write_json(&p, &ns).unwrap();
        assert_eq!(read_json::<NodeSet1D>(&p).unwrap(), ns);

        let ns2 = padua(4).unwrap();
        write_json(&p, &ns2).unwrap();
        assert_eq!(read_json::<NodeSet2D>(&p).unwrap(), ns2);

        let ce = CardinalEvaluator::new(&ns2).unwrap();
        let zc = zero_curves(&ce, 2, 40).unwrap();
        write_json(&p, &zc).unwrap();
        let back: ZeroCurve = read_json(&p).unwrap();
        assert_eq!(back, zc);
        assert_eq!(to_json_string(&zc).unwrap(), to_json_string(&back).unwrap());
    }
}
