//! Point-set ingestion and seeded synthetic generators.
//!
//! Text format: one point per line, two decimals separated by whitespace or a
//! comma; lines starting with `#` and blank lines are ignored. Exact duplicate
//! coordinates are merged into one weighted point.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Coord, Point};
use crate::rng::{derive_seed, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Whitespace,
    Csv,
}

impl Format {
    /// `.csv` files are comma-separated, everything else whitespace.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Whitespace,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Source {
    File(PathBuf),
    Generator { spec: String, seed: u64 },
    Memory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    /// Distinct coordinates; `points[i].id == i`.
    pub points: Vec<Point>,
    pub source: Source,
    /// Rows before merging; equals the total weight.
    pub rows: usize,
}

impl Dataset {
    pub fn from_coords(name: impl Into<String>, coords: impl IntoIterator<Item = Coord>, source: Source) -> Dataset {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut points: Vec<Point> = Vec::new();
        let mut rows = 0usize;
        for c in coords {
            rows += 1;
            let key = (canonical_bits(c.x), canonical_bits(c.y));
            match index.get(&key) {
                Some(&i) => points[i].weight += 1,
                None => {
                    index.insert(key, points.len());
                    points.push(Point::new(points.len() as u32, c.x, c.y));
                }
            }
        }
        Dataset {
            name: name.into(),
            points,
            source,
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.points.iter().map(|p| u64::from(p.weight)).sum()
    }

    pub fn coords(&self) -> Vec<Coord> {
        self.points.iter().map(Point::xy).collect()
    }

    /// Serializes every row (duplicates repeated by weight), so loading the
    /// output reproduces this dataset.
    pub fn to_text(&self, format: Format) -> String {
        let sep = match format {
            Format::Whitespace => " ",
            Format::Csv => ",",
        };
        let mut out = String::with_capacity(self.rows * 24);
        let _ = writeln!(out, "# {}: {} rows, {} distinct", self.name, self.rows, self.points.len());
        for p in &self.points {
            for _ in 0..p.weight {
                let _ = writeln!(out, "{}{}{}", p.x, sep, p.y);
            }
        }
        out
    }

    /// Index from exact coordinates to point id.
    pub fn lookup(&self) -> HashMap<(u64, u64), u32> {
        self.points
            .iter()
            .map(|p| ((canonical_bits(p.x), canonical_bits(p.y)), p.id))
            .collect()
    }
}

pub(crate) fn canonical_bits(v: f64) -> u64 {
    if v == 0.0 {
        0
    } else {
        v.to_bits()
    }
}

/// Parses point rows in order. `line` numbers in errors are 1-based.
pub fn parse_points(text: &str, format: Format) -> Result<Vec<Coord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            Format::Csv => line.split(',').map(str::trim).collect(),
            Format::Whitespace => line.split_whitespace().collect(),
        };
        let bad = |message: String| Error::Parse { line: i + 1, message };
        if fields.len() != 2 {
            return Err(bad(format!("expected 2 coordinates, found {}", fields.len())));
        }
        let mut xy = [0.0; 2];
        for (slot, f) in xy.iter_mut().zip(&fields) {
            let v: f64 = f.parse().map_err(|_| bad(format!("not a number: {f:?}")))?;
            if !v.is_finite() {
                return Err(bad(format!("non-finite coordinate: {f:?}")));
            }
            *slot = v;
        }
        out.push(Coord::new(xy[0], xy[1]));
    }
    Ok(out)
}

pub fn load_points(path: &Path, format: Format) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let coords = parse_points(&text, format)?;
    if coords.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "points".into());
    Ok(Dataset::from_coords(name, coords, Source::File(path.to_path_buf())))
}

/// `n` points i.i.d. uniform in the unit square.
pub fn gen_uniform(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(derive_seed(seed, &[0x756e_6966]));
    let coords = (0..n).map(|_| Coord::new(rng.gen::<f64>(), rng.gen::<f64>())).collect::<Vec<_>>();
    Dataset::from_coords(
        "uniform",
        coords,
        Source::Generator {
            spec: format!("uniform:{n}"),
            seed,
        },
    )
}

/// Parameters of the nine-cluster Gaussian mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauss9Params {
    /// Entries of the covariance factor `A` are uniform in `[-sigma, sigma]`.
    pub sigma: f64,
    /// Ridge added to `A Aᵀ`.
    pub delta: f64,
}

impl Default for Gauss9Params {
    fn default() -> Self {
        Gauss9Params {
            sigma: 0.05,
            delta: 1e-4,
        }
    }
}

pub const GAUSS9_COMPONENTS: usize = 9;

/// Points per component: `n / 9`, plus one for the first `n mod 9`.
pub fn gauss9_component_sizes(n: usize) -> [usize; GAUSS9_COMPONENTS] {
    std::array::from_fn(|k| n / GAUSS9_COMPONENTS + usize::from(k < n % GAUSS9_COMPONENTS))
}

/// Nine Gaussian clusters with random means in the unit square and
/// covariance `A Aᵀ + δI`. Points are split evenly; the first `n mod 9`
/// components get one extra point.
pub fn gen_gauss9(n: usize, seed: u64, params: Gauss9Params) -> Result<Dataset> {
    if n < GAUSS9_COMPONENTS {
        return Err(Error::InvalidConfig(format!("gauss9 needs n >= 9, got {n}")));
    }
    let mut rng = stream(derive_seed(seed, &[0x6761_7573]));
    let mut coords = Vec::with_capacity(n);
    for count in gauss9_component_sizes(n) {
        let mean = (rng.gen::<f64>(), rng.gen::<f64>());
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-params.sigma..=params.sigma));
        // Σ = A Aᵀ + δI, then its Cholesky factor L.
        let s00 = a[0] * a[0] + a[1] * a[1] + params.delta;
        let s01 = a[0] * a[2] + a[1] * a[3];
        let s11 = a[2] * a[2] + a[3] * a[3] + params.delta;
        let l00 = s00.sqrt();
        let l10 = s01 / l00;
        let l11 = (s11 - l10 * l10).max(0.0).sqrt();
        for _ in 0..count {
            let z0: f64 = rng.sample(StandardNormal);
            let z1: f64 = rng.sample(StandardNormal);
            coords.push(Coord::new(mean.0 + l00 * z0, mean.1 + l10 * z0 + l11 * z1));
        }
    }
    Ok(Dataset::from_coords(
        "gauss9",
        coords,
        Source::Generator {
            spec: format!("gauss9:{n}"),
            seed,
        },
    ))
}

/// Half of the points on three axis-parallel or diagonal lines, the rest
/// uniform. Exercises collinear samples and hull edges.
pub fn gen_collinear_heavy(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(derive_seed(seed, &[0x636f_6c6c]));
    let coords: Vec<Coord> = (0..n)
        .map(|i| {
            let t = rng.gen_range(0..64) as f64 / 64.0;
            match i % 6 {
                0 => Coord::new(t, 0.5),
                1 => Coord::new(0.25, t),
                2 => Coord::new(t, t),
                _ => Coord::new(rng.gen(), rng.gen()),
            }
        })
        .collect();
    Dataset::from_coords(
        "collinear",
        coords,
        Source::Generator {
            spec: format!("collinear:{n}"),
            seed,
        },
    )
}

/// Points drawn from a small pool of locations, so most rows repeat.
pub fn gen_duplicate_heavy(n: usize, seed: u64) -> Dataset {
    let mut rng = stream(derive_seed(seed, &[0x6475_706c]));
    let pool_size = (n / 4).max(3);
    let pool: Vec<Coord> = (0..pool_size).map(|_| Coord::new(rng.gen(), rng.gen())).collect();
    let coords: Vec<Coord> = (0..n)
        .map(|i| {
            // Heavy-tailed reuse: low pool indices repeat most.
            let u: f64 = rng.gen();
            let k = if i < pool_size { i } else { ((u * u) * pool_size as f64) as usize };
            pool[k.min(pool_size - 1)]
        })
        .collect();
    Dataset::from_coords(
        "duplicates",
        coords,
        Source::Generator {
            spec: format!("duplicates:{n}"),
            seed,
        },
    )
}

/// Builds a dataset from a generator spec `kind:n`, where `kind` is one of
/// `uniform`, `gauss9`, `collinear`, `duplicates`.
pub fn generate(spec: &str, seed: u64) -> Result<Dataset> {
    let (kind, n) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("generator spec must be kind:n, got {spec:?}")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad point count in {spec:?}")))?;
    if n == 0 {
        return Err(Error::InvalidConfig("generator needs n >= 1".into()));
    }
    match kind.trim() {
        "uniform" => Ok(gen_uniform(n, seed)),
        "gauss9" => gen_gauss9(n, seed, Gauss9Params::default()),
        "collinear" => Ok(gen_collinear_heavy(n, seed)),
        "duplicates" => Ok(gen_duplicate_heavy(n, seed)),
        other => Err(Error::InvalidConfig(format!("unknown generator {other:?}"))),
    }
}
