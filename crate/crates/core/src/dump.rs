//! Plain-text sequence dumps: `#`-prefixed header lines followed by one
//! `index<TAB>value` line per site. Values are written in shortest
//! round-trip decimal form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::{LatticeWindow, ProblemParams, Sequence};
use crate::nehari::{NehariPoint, SignChangingPoint};

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Projection data recorded alongside a dumped point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointHeader {
    pub s0: f64,
    pub t0: f64,
    pub residuals: [f64; 2],
    pub energy: f64,
}

impl From<&NehariPoint> for PointHeader {
    /// A ray projection has a single scale; it is stored in both slots.
    fn from(pt: &NehariPoint) -> Self {
        Self { s0: pt.t0, t0: pt.t0, residuals: [pt.residual, pt.residual], energy: pt.energy }
    }
}

impl From<&SignChangingPoint> for PointHeader {
    fn from(pt: &SignChangingPoint) -> Self {
        Self { s0: pt.s0, t0: pt.t0, residuals: pt.residuals, energy: pt.energy }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumpHeader {
    pub radius: usize,
    pub params: ProblemParams,
    pub profile: String,
    pub point: Option<PointHeader>,
}

pub fn write_sequence<W: Write>(mut out: W, u: &Sequence, header: &DumpHeader) -> Result<()> {
    let p = &header.params;
    writeln!(out, "# N {}", header.radius)?;
    writeln!(out, "# p {}", p.p)?;
    writeln!(out, "# q {}", p.q)?;
    writeln!(out, "# r {}", p.r)?;
    writeln!(out, "# zeta {}", p.zeta)?;
    writeln!(out, "# profile {}", header.profile)?;
    if let Some(pt) = &header.point {
        writeln!(
            out,
            "# point s0={} t0={} residual1={} residual2={} energy={}",
            pt.s0, pt.t0, pt.residuals[0], pt.residuals[1], pt.energy
        )?;
    }
    for (n, v) in u.window().sites().zip(u.values()) {
        writeln!(out, "{n}\t{}", format_f64(*v))?;
    }
    Ok(())
}

pub fn save_sequence(path: &Path, u: &Sequence, header: &DumpHeader) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_sequence(&mut out, u, header)?;
    out.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, key: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: format!("bad value for {key}: {raw:?}"),
    })
}

/// Reads a dump; `path` is only used in error messages.
pub fn read_sequence<R: BufRead>(input: R, path: &Path) -> Result<(DumpHeader, Sequence)> {
    let mut radius = None;
    let (mut p, mut q, mut r, mut zeta) = (None, None, None, None);
    let mut profile = String::new();
    let mut point = None;
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            match key {
                "N" => radius = Some(field::<usize>(path, lineno, key, value)?),
                "p" => p = Some(field::<f64>(path, lineno, key, value)?),
                "q" => q = Some(field::<f64>(path, lineno, key, value)?),
                "r" => r = Some(field::<f64>(path, lineno, key, value)?),
                "zeta" => zeta = Some(field::<f64>(path, lineno, key, value)?),
                "profile" => profile = value.trim().to_string(),
                "point" => {
                    let mut vals = [f64::NAN; 5];
                    for part in value.split_whitespace() {
                        let (name, v) = part.split_once('=').unwrap_or((part, ""));
                        let slot = match name {
                            "s0" => 0,
                            "t0" => 1,
                            "residual1" => 2,
                            "residual2" => 3,
                            "energy" => 4,
                            _ => continue,
                        };
                        vals[slot] = field(path, lineno, name, v)?;
                    }
                    point = Some(PointHeader { s0: vals[0], t0: vals[1], residuals: [vals[2], vals[3]], energy: vals[4] });
                }
                _ => {}
            }
            continue;
        }
        let mut cols = trimmed.split('\t');
        let (Some(n), Some(v), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse { path: path.to_path_buf(), line: lineno, msg: "expected index<TAB>value".into() });
        };
        entries.push((field(path, lineno, "index", n)?, field(path, lineno, "value", v)?));
    }
    let missing = |what: &str| Error::Parse { path: path.to_path_buf(), line: 0, msg: format!("missing header {what}") };
    let radius = radius.ok_or_else(|| missing("N"))?;
    let params = ProblemParams::new_unordered(
        p.ok_or_else(|| missing("p"))?,
        q.ok_or_else(|| missing("q"))?,
        r.ok_or_else(|| missing("r"))?,
        zeta.ok_or_else(|| missing("zeta"))?,
    )?;
    let window = LatticeWindow::new(radius)?;
    let mut values = vec![f64::NAN; window.len()];
    for (n, v) in entries {
        if !window.contains(n) {
            return Err(Error::Parse { path: path.to_path_buf(), line: 0, msg: format!("site {n} outside window") });
        }
        values[window.index(n)] = v;
    }
    if let Some(k) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::Parse { path: path.to_path_buf(), line: 0, msg: format!("site {} missing", window.site(k)) });
    }
    let u = Sequence::new(window, values)?;
    Ok((DumpHeader { radius, params, profile, point }, u))
}

pub fn load_sequence(path: &Path) -> Result<(DumpHeader, Sequence)> {
    read_sequence(BufReader::new(File::open(path)?), path)
}
