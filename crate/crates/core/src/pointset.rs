//! Scattered point clouds: Halton and uniform random generation, plain-text
//! files, and closed-ball restriction.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Axis-aligned box `[lo_1, hi_1] x ... x [lo_s, hi_s]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn unit(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&x, (&lo, &hi))| x >= lo && x <= hi)
    }
}

/// Where a cloud came from. Ball filtering wraps the parent provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Halton,
    UniformRandom {
        seed: u64,
    },
    File {
        path: PathBuf,
    },
    Ball {
        parent: Box<Provenance>,
        center: Vec<f64>,
        radius: f64,
    },
    /// Points assembled by hand (tests, library callers).
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    provenance: Provenance,
    domain: DomainBox,
}

impl PointCloud {
    /// Builds a cloud from explicit points in the unit box.
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self::from_flat(dim, coords, Provenance::Explicit))
    }

    /// `coords` holds the points back to back, `dim` values each.
    pub fn from_flat(dim: usize, coords: Vec<f64>, provenance: Provenance) -> Self {
        assert!(dim >= 1);
        assert_eq!(coords.len() % dim, 0, "coordinate count not a multiple of dim");
        Self {
            dim,
            coords,
            provenance,
            domain: DomainBox::unit(dim),
        }
    }

    pub fn with_domain(mut self, domain: DomainBox) -> Self {
        assert_eq!(domain.dim(), self.dim);
        self.domain = domain;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    /// Number of points lying outside the domain box.
    pub fn outside_domain(&self) -> usize {
        self.iter().filter(|p| !self.domain.contains(p)).count()
    }

    /// Sub-cloud made of the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
            provenance: self.provenance.clone(),
            domain: self.domain.clone(),
        }
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Radical inverse of `k` in `base` (digit reversal about the radix point).
pub fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut acc = 0.0;
    while k > 0 {
        acc += (k % base) as f64 * scale;
        k /= base;
        scale *= inv_base;
    }
    acc
}

/// The first `n` Halton points in `[0,1]^dim`, bases 2, 3, 5, 7, starting at
/// sequence index 1 (the origin at index 0 is skipped).
pub fn halton_points(n: usize, dim: usize) -> Result<PointCloud> {
    Ok(PointCloud::from_flat(
        dim,
        halton_coords(1, n, dim)?,
        Provenance::Halton,
    ))
}

/// Halton coordinates for sequence indices `start..start + n`.
pub(crate) fn halton_coords(start: u64, n: usize, dim: usize) -> Result<Vec<f64>> {
    if dim == 0 || dim > PRIMES.len() {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut coords = Vec::with_capacity(n * dim);
    for k in start..start + n as u64 {
        coords.extend(PRIMES[..dim].iter().map(|&b| radical_inverse(k, b)));
    }
    Ok(coords)
}

/// `n` independent uniform draws in the unit box; bit-for-bit reproducible per seed.
pub fn uniform_random_points(n: usize, dim: usize, seed: u64) -> PointCloud {
    uniform_random_in(n, &DomainBox::unit(dim), seed)
}

pub fn uniform_random_in(n: usize, domain: &DomainBox, seed: u64) -> PointCloud {
    let dim = domain.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        for j in 0..dim {
            let u: f64 = rng.gen();
            coords.push(domain.lo[j] + (domain.hi[j] - domain.lo[j]) * u);
        }
    }
    PointCloud::from_flat(dim, coords, Provenance::UniformRandom { seed }).with_domain(domain.clone())
}

/// Indices of the points at distance `<= radius` from `center`, in cloud order.
pub fn ball_indices(cloud: &PointCloud, center: &[f64], radius: f64) -> Result<Vec<usize>> {
    if center.len() != cloud.dim() {
        return Err(Error::Dimension {
            expected: cloud.dim(),
            found: center.len(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::Config(format!("ball radius must be positive, got {radius}")));
    }
    Ok(cloud
        .iter()
        .enumerate()
        .filter(|(_, p)| distance(p, center) <= radius)
        .map(|(i, _)| i)
        .collect())
}

/// The closed ball `B_r(center)` restricted to the cloud. An empty result is
/// a valid cloud.
pub fn points_in_ball(cloud: &PointCloud, center: &[f64], radius: f64) -> Result<PointCloud> {
    let idx = ball_indices(cloud, center, radius)?;
    let mut sub = cloud.select(&idx);
    sub.provenance = Provenance::Ball {
        parent: Box::new(cloud.provenance.clone()),
        center: center.to_vec(),
        radius,
    };
    Ok(sub)
}

/// Parses one point per line; coordinates separated by whitespace and/or
/// commas. Blank lines and lines starting with `#` are skipped.
pub fn parse_cloud(text: &str, path: &Path) -> Result<PointCloud> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fmt_err = |message: String| Error::Format {
            path: path.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| fmt_err(format!("non-numeric token {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(fmt_err(format!("expected {d} coordinates, found {}", row.len())))
            }
            _ => {}
        }
        coords.extend(row);
    }
    let dim = dim.ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        line: 0,
        message: "no points".into(),
    })?;
    Ok(PointCloud::from_flat(
        dim,
        coords,
        Provenance::File {
            path: path.to_path_buf(),
        },
    ))
}

/// Loads a point file. Points outside the unit box only trigger a warning.
pub fn load_cloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cloud = parse_cloud(&text, path)?;
    let outside = cloud.outside_domain();
    if outside > 0 {
        log::warn!(
            "{}: {outside} of {} points lie outside the unit box",
            path.display(),
            cloud.len()
        );
    }
    Ok(cloud)
}

pub fn format_cloud(cloud: &PointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * cloud.dim() * 25);
    for p in cloud.iter() {
        for (j, x) in p.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{x:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes one point per line with 17 significant digits.
pub fn save_cloud(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_cloud(cloud)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
