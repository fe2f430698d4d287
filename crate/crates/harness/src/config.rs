//! Sweep and identity-suite configuration, and per-instance seeding.

use std::path::PathBuf;

use ffgeom::theorems::Theorem;
use ffgeom::{Error, FieldContext, Result};

/// `(p, ell, d)`.
pub type Cell = (u32, u32, usize);

/// Largest `q^d` a sweep cell may use; keeps `F_q^{2d}` spectra at desk scale.
pub const MAX_POINTS: usize = 20_000;

/// How the sets of a sweep are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Policy {
    /// Independent inclusion on a logarithmic density grid.
    Random,
    /// Strips, subspaces, spheres and lattices.
    Structured,
    Mixed,
    /// `A` (and `B = A`) read from a point-set file.
    File(PathBuf),
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Policy::Random),
            "structured" => Ok(Policy::Structured),
            "mixed" => Ok(Policy::Mixed),
            _ => match s.strip_prefix("file:") {
                Some(path) => Ok(Policy::File(path.into())),
                None => Err(format!("unknown policy `{s}` (random|structured|mixed|file:<path>)")),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub theorem: Theorem,
    pub grid: Vec<Cell>,
    pub policy: Policy,
    pub trials: usize,
    pub seed: u64,
    /// Exponent in the growth threshold `|B|^{1+eps}`.
    pub eps: f64,
    /// Projection dimension for the projection theorems.
    pub m: usize,
}

impl SweepConfig {
    pub fn new(theorem: Theorem, grid: Vec<Cell>) -> SweepConfig {
        SweepConfig { theorem, grid, policy: Policy::Mixed, trials: 6, seed: 1, eps: 0.25, m: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.iter().try_for_each(|&c| check_cell(c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Subtract the Gauss-sum correction in the sphere transform instead of adding it.
    SphereSign,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sphere-sign" => Ok(Fault::SphereSign),
            _ => Err(format!("unknown fault `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityConfig {
    pub grid: Vec<Cell>,
    pub trials: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig { grid: vec![(3, 1, 2), (5, 1, 2), (7, 1, 2), (3, 1, 3)], trials: 4, seed: 1, fault: None }
    }
}

pub fn check_cell((p, ell, d): Cell) -> Result<()> {
    let f = FieldContext::new(p, ell)?;
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let size = (f.q() as usize).checked_pow(d as u32).unwrap_or(usize::MAX);
    if size > MAX_POINTS {
        return Err(Error::Resource(format!("q^d = {size} exceeds {MAX_POINTS}")));
    }
    Ok(())
}

/// Parses `p:ell:d` triples separated by commas; an empty string is an empty grid.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<Cell>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(':').collect();
            let bad = || format!("bad grid cell `{t}` (expected p:ell:d)");
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok((
                parts[0].parse().map_err(|_| bad())?,
                parts[1].parse().map_err(|_| bad())?,
                parts[2].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Seed for one instance, mixing the run seed with its coordinates.
pub fn instance_seed(seed: u64, tag: &str, cell: Cell, instance: usize) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    let mut mix = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    };
    for b in tag.bytes() {
        mix(b as u64);
    }
    mix(cell.0 as u64);
    mix(cell.1 as u64);
    mix(cell.2 as u64);
    mix(instance as u64);
    h
}
