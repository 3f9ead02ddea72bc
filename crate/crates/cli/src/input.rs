//! Dataset selection and net files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use epsnet::dataio::{gen_gauss9, generate, load_points, Dataset, Format, Gauss9Params, Source};
use epsnet::{Error, Result};

/// A dataset named either by a generator spec (`uniform:1000`) or a path.
#[derive(Debug, Clone)]
pub enum DataRef {
    Gen(String),
    File(PathBuf),
}

const KINDS: [&str; 4] = ["uniform", "gauss9", "collinear", "duplicates"];

impl DataRef {
    /// Generator specs win when the prefix names a known generator.
    pub fn parse(s: &str) -> DataRef {
        match s.split_once(':') {
            Some((kind, _)) if KINDS.contains(&kind.trim()) => DataRef::Gen(s.to_string()),
            _ => DataRef::File(PathBuf::from(s)),
        }
    }

    pub fn load(&self, seed: u64, gauss: Gauss9Params) -> Result<Dataset> {
        match self {
            DataRef::File(p) => load_points(p, Format::from_path(p)),
            DataRef::Gen(spec) => {
                let (kind, n) = spec.split_once(':').unwrap_or((spec, ""));
                if kind.trim() == "gauss9" && gauss != Gauss9Params::default() {
                    let n = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidConfig(format!("bad point count in {spec:?}")))?;
                    let mut d = gen_gauss9(n, seed, gauss)?;
                    d.source = Source::Generator { spec: spec.clone(), seed };
                    Ok(d)
                } else {
                    generate(spec, seed)
                }
            }
        }
    }

    /// Short label for CSV rows.
    pub fn label(&self) -> String {
        match self {
            DataRef::Gen(spec) => spec.split(':').next().unwrap_or(spec).to_string(),
            DataRef::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
        }
    }
}

pub const NET_HEADER: &str = "# id x y weight";

pub fn net_text(d: &Dataset, net: &[u32]) -> String {
    let mut s = String::from(NET_HEADER);
    s.push('\n');
    for &id in net {
        let p = d.points[id as usize];
        let _ = writeln!(s, "{} {} {} {}", p.id, p.x, p.y, p.weight);
    }
    s
}

/// Reads a net file as point ids of `d`. Rows are `id x y weight` (the
/// coordinates decide), `x y`, or a bare `id`.
pub fn read_net(path: &Path, d: &Dataset) -> Result<Vec<u32>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let lookup = d.lookup();
    let key = |x: f64, y: f64| {
        let bits = |v: f64| if v == 0.0 { 0 } else { v.to_bits() };
        (bits(x), bits(y))
    };
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split([' ', '\t', ',']).filter(|f| !f.is_empty()).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("not a number: {s:?}")));
        let id = match fields.as_slice() {
            [id] => {
                let id: u32 = id.parse().map_err(|_| bad(format!("not an id: {id:?}")))?;
                if id as usize >= d.len() {
                    return Err(bad(format!("id {id} out of range")));
                }
                id
            }
            [x, y] | [_, x, y, _] => {
                let (x, y) = (num(x)?, num(y)?);
                *lookup
                    .get(&key(x, y))
                    .ok_or_else(|| bad(format!("({x}, {y}) is not an input point")))?
            }
            _ => return Err(bad(format!("expected 1, 2 or 4 fields, got {}", fields.len()))),
        };
        ids.push(id);
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}
