//! Angle parsing and the JSON, CSV and Wavefront OBJ formats.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{pi_fraction, residual, BondAngle, Polygon, Vec3};

/// Parses `pi`, `pi/2`, `2pi/3`, `2*pi/3`, `-pi/4` or a decimal. Multiples of
/// `pi` are evaluated in extended precision and rounded once, so `pi/3`
/// gives the double nearest to the true value.
pub fn parse_theta(s: &str) -> Result<f64> {
    let err = || Error::ParseAngle(s.to_string());
    let t: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let Some(at) = t.find("pi") else {
        let v: f64 = t.parse().map_err(|_| err())?;
        return if v.is_finite() { Ok(v) } else { Err(err()) };
    };
    let (head, tail) = (&t[..at], &t[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let num: i64 = match head {
        "" | "+" => 1,
        "-" => -1,
        h => h.parse().map_err(|_| err())?,
    };
    let den: i64 = match tail {
        "" => 1,
        t => t
            .strip_prefix('/')
            .ok_or_else(err)?
            .parse()
            .map_err(|_| err())?,
    };
    if den <= 0 {
        return Err(err());
    }
    Ok(pi_fraction(num, den))
}

pub fn parse_bond_angle(s: &str) -> Result<BondAngle> {
    BondAngle::new(parse_theta(s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Obj,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "obj" => Ok(Format::Obj),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?} (json, csv, obj)"
            ))),
        }
    }
}

/// One configuration as written to disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub n: usize,
    pub theta: f64,
    pub family: String,
    /// `(phi1, phi3, phi5)` for hexagons, the solver coordinates otherwise.
    pub torus_point: Option<Vec<f64>>,
    pub vertices: Vec<[f64; 3]>,
    pub residual: f64,
}

impl ConfigRecord {
    pub fn new(
        polygon: &Polygon,
        theta: BondAngle,
        family: impl Into<String>,
        torus_point: Option<Vec<f64>>,
    ) -> Self {
        let residual = residual(polygon, theta)
            .map(|r| r.max_residual)
            .unwrap_or(f64::INFINITY);
        Self {
            n: polygon.len(),
            theta: theta.theta(),
            family: family.into(),
            torus_point,
            vertices: polygon.vertices().iter().map(|v| v.to_array()).collect(),
            residual,
        }
    }

    pub fn polygon(&self) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|&v| Vec3::from(v)).collect())
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Reads a list of records or a single record.
pub fn records_from_json(text: &str) -> Result<Vec<ConfigRecord>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Many(Vec<ConfigRecord>),
        One(ConfigRecord),
    }
    Ok(match serde_json::from_str(text)? {
        Doc::Many(v) => v,
        Doc::One(r) => vec![r],
    })
}

pub fn write_csv<W: Write>(records: &[ConfigRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["frame", "vertex", "x", "y", "z"])?;
    for (frame, rec) in records.iter().enumerate() {
        for (vertex, v) in rec.vertices.iter().enumerate() {
            w.write_record([
                frame.to_string(),
                vertex.to_string(),
                v[0].to_string(),
                v[1].to_string(),
                v[2].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv(records: &[ConfigRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Vertex lists per frame from CSV written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<Vec<[f64; 3]>>> {
    #[derive(Deserialize)]
    struct Row {
        frame: usize,
        vertex: usize,
        x: f64,
        y: f64,
        z: f64,
    }
    let mut frames: Vec<Vec<[f64; 3]>> = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: Row = row?;
        if row.frame >= frames.len() {
            frames.resize(row.frame + 1, Vec::new());
        }
        let f = &mut frames[row.frame];
        if row.vertex != f.len() {
            return Err(Error::InvalidArgument(format!(
                "vertex {} out of order in frame {}",
                row.vertex, row.frame
            )));
        }
        f.push([row.x, row.y, row.z]);
    }
    Ok(frames)
}

/// One polygon as `v` lines and a closed cycle of `l` segments.
pub fn to_obj(rec: &ConfigRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# n {} theta {} family {}", rec.n, rec.theta, rec.family);
    for v in &rec.vertices {
        let _ = writeln!(s, "v {} {} {}", v[0], v[1], v[2]);
    }
    let n = rec.vertices.len();
    for i in 0..n {
        let _ = writeln!(s, "l {} {}", i + 1, (i + 1) % n + 1);
    }
    s
}

/// Vertices of an OBJ file; `l` records are checked to form the closed cycle.
pub fn read_obj(text: &str) -> Result<Vec<[f64; 3]>> {
    let bad = |line: &str| Error::InvalidArgument(format!("bad OBJ line {line:?}"));
    let mut vertices = Vec::new();
    let mut segments = Vec::new();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let xs: Vec<f64> = parts
                    .map(|p| p.parse().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
                let [x, y, z] = xs[..] else {
                    return Err(bad(line));
                };
                vertices.push([x, y, z]);
            }
            Some("l") => {
                let ix: Vec<usize> = parts
                    .map(|p| p.parse().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
                let [a, b] = ix[..] else {
                    return Err(bad(line));
                };
                segments.push((a, b));
            }
            _ => {}
        }
    }
    let n = vertices.len();
    let cycle: Vec<(usize, usize)> = (0..n).map(|i| (i + 1, (i + 1) % n + 1)).collect();
    if segments != cycle {
        return Err(Error::InvalidArgument(
            "OBJ segments do not close the vertex cycle".into(),
        ));
    }
    Ok(vertices)
}

/// Writes one OBJ file per record into `dir`, named `frame_0000.obj`, ...
pub fn write_obj_frames(records: &[ConfigRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let width = records.len().saturating_sub(1).to_string().len().max(4);
    records
        .iter()
        .enumerate()
        .map(|(k, rec)| {
            let path = dir.join(format!("frame_{k:0width$}.obj"));
            fs::write(&path, to_obj(rec))?;
            Ok(path)
        })
        .collect()
}

/// Writes `records` to `out` in the given format. JSON and CSV go to a
/// single file (`None`: returned as text); OBJ needs a directory.
pub fn export(
    records: &[ConfigRecord],
    format: Format,
    out: Option<&Path>,
) -> Result<Option<String>> {
    let text = match format {
        Format::Json => to_json(records)?,
        Format::Csv => to_csv(records)?,
        Format::Obj => {
            let dir =
                out.ok_or_else(|| Error::InvalidArgument("OBJ output needs --out <dir>".into()))?;
            write_obj_frames(records, dir)?;
            return Ok(None);
        }
    };
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn angle_syntax() {
        assert_eq!(parse_theta("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_theta("pi/3").unwrap(), std::f64::consts::FRAC_PI_3);
        assert_eq!(parse_theta("2pi/3").unwrap(), 2.094_395_102_393_195_7);
        assert_eq!(
            parse_theta("2*pi/3").unwrap(),
            parse_theta("2pi/3").unwrap()
        );
        assert_eq!(parse_theta(" 5 * PI / 6 ").unwrap(), pi_fraction(5, 6));
        assert_eq!(parse_theta("pi").unwrap(), PI);
        assert_eq!(parse_theta("0").unwrap(), 0.0);
        assert_eq!(parse_theta("1.25").unwrap(), 1.25);
        assert_eq!(parse_theta("-pi/4").unwrap(), -PI / 4.0);
        for bad in ["", "pi/0", "pi/", "xpi", "pi/2x", "nan", "2pi3"] {
            assert!(parse_theta(bad).is_err(), "{bad}");
        }
        assert!(parse_bond_angle("pi").is_err());
    }

    fn record() -> ConfigRecord {
        let p = Polygon::new(vec![
            Vec3::new(0.1, 0.2, 0.3),
            Vec3::new(1.0 / 3.0, -2.0, 5e-17),
            Vec3::new(-0.7, 0.0, 1e10),
        ])
        .unwrap();
        ConfigRecord::new(
            &p,
            BondAngle::new(1.0).unwrap(),
            "test",
            Some(vec![0.1, -0.2, PI]),
        )
    }

    #[test]
    fn obj_cycle() {
        let text = to_obj(&record());
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 3);
        assert!(text.contains("l 3 1"));
        assert_eq!(read_obj(&text).unwrap(), record().vertices);
    }

    #[test]
    fn csv_header_and_round_trip() {
        let recs = vec![record(), record()];
        let text = to_csv(&recs).unwrap();
        assert!(text.starts_with("frame,vertex,x,y,z\n"));
        let frames = read_csv(text.as_bytes()).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(frames[1], recs[1].vertices);
    }

    #[test]
    fn json_schema_keys() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&record()).unwrap()).unwrap();
        for key in [
            "n",
            "theta",
            "family",
            "torus_point",
            "vertices",
            "residual",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(coords in prop::collection::vec(prop::array::uniform3(-1e6f64..1e6), 3..8)) {
            let p = Polygon::new(coords.iter().map(|&c| Vec3::from(c)).collect()).unwrap();
            let rec = ConfigRecord::new(&p, BondAngle::new(0.5).unwrap(), "x", None);
            let back = records_from_json(&to_json(std::slice::from_ref(&rec)).unwrap()).unwrap();
            let q = back[0].polygon().unwrap();
            for (a, b) in p.vertices().iter().zip(q.vertices()) {
                prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
                prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
                prop_assert_eq!(a.z.to_bits(), b.z.to_bits());
            }
        }
    }
}
