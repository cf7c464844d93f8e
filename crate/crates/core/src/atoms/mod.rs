//! Atomic configurations, periodic cells, neighbor lists, and XYZ I/O.

mod elements;
mod neighbor;
mod xyz;

pub use elements::{atomic_number, element_symbol};
pub use neighbor::{build_neighbor_list, NeighborEntry, NeighborList};
pub use xyz::{read_xyz, write_xyz};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Determinant threshold below which a cell counts as degenerate (A^3).
pub const DEGENERATE_CELL_DET: f64 = 1e-12;

/// A spatial arrangement of atoms, optionally in a periodic cell.
///
/// `cell` holds lattice vectors as rows (A). Free-standing string properties
/// (energies, labels, ...) travel with the configuration through XYZ
/// round-trips.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    species: Vec<u32>,
    positions: Vec<[f64; 3]>,
    cell: Option<[[f64; 3]; 3]>,
    pbc: [bool; 3],
    pub properties: BTreeMap<String, String>,
}

impl Configuration {
    /// Validates invariants: equal non-zero lengths, finite coordinates, and
    /// a positive-determinant cell whenever any direction is periodic.
    pub fn new(
        species: Vec<u32>,
        positions: Vec<[f64; 3]>,
        cell: Option<[[f64; 3]; 3]>,
        pbc: [bool; 3],
    ) -> Result<Self> {
        if species.is_empty() {
            return Err(Error::InvalidConfiguration(
                "configuration must contain at least one atom".into(),
            ));
        }
        if species.len() != positions.len() {
            return Err(Error::InvalidConfiguration(format!(
                "species ({}) and positions ({}) differ in length",
                species.len(),
                positions.len()
            )));
        }
        if let Some(&z) = species.iter().find(|&&z| z == 0 || z > 118) {
            return Err(Error::InvalidConfiguration(format!(
                "atomic number {z} outside 1..=118"
            )));
        }
        for (i, p) in positions.iter().enumerate() {
            if !p.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidConfiguration(format!(
                    "non-finite coordinate on atom {i}"
                )));
            }
        }
        if pbc.iter().any(|&b| b) {
            let cell = cell.ok_or_else(|| {
                Error::InvalidConfiguration("periodic directions require a cell".into())
            })?;
            let det = det3(&cell);
            if !(det > 0.0) || !det.is_finite() {
                return Err(Error::InvalidCell(format!(
                    "cell determinant must be strictly positive, got {det:e}"
                )));
            }
        }
        Ok(Self {
            species,
            positions,
            cell,
            pbc,
            properties: BTreeMap::new(),
        })
    }

    pub fn with_properties(mut self, properties: BTreeMap<String, String>) -> Self {
        self.properties = properties;
        self
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }

    pub fn species(&self) -> &[u32] {
        &self.species
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn cell(&self) -> Option<&[[f64; 3]; 3]> {
        self.cell.as_ref()
    }

    pub fn pbc(&self) -> [bool; 3] {
        self.pbc
    }

    /// Distinct species present, ascending.
    pub fn species_set(&self) -> Vec<u32> {
        let mut zs = self.species.clone();
        zs.sort_unstable();
        zs.dedup();
        zs
    }

    /// New configuration with every position rigidly shifted by `delta`.
    pub fn translated(&self, delta: [f64; 3]) -> Self {
        let mut out = self.clone();
        for p in &mut out.positions {
            for d in 0..3 {
                p[d] += delta[d];
            }
        }
        out
    }

    /// New configuration with positions mapped through a 3x3 matrix
    /// (rotation matrices preserve all interatomic geometry).
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Self {
        let mut out = self.clone();
        for p in &mut out.positions {
            let q = *p;
            for d in 0..3 {
                p[d] = rot[d][0] * q[0] + rot[d][1] * q[1] + rot[d][2] * q[2];
            }
        }
        if let Some(cell) = &mut out.cell {
            let old = *cell;
            for r in 0..3 {
                for d in 0..3 {
                    cell[r][d] =
                        rot[d][0] * old[r][0] + rot[d][1] * old[r][1] + rot[d][2] * old[r][2];
                }
            }
        }
        out
    }

    /// New configuration with atoms reordered by `perm` (new index -> old index).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len());
        let mut out = self.clone();
        out.species = perm.iter().map(|&i| self.species[i]).collect();
        out.positions = perm.iter().map(|&i| self.positions[i]).collect();
        out
    }
}

/// Wraps positions into the cell along periodic directions; positions are
/// otherwise stored as given, so this is an explicit opt-in.
pub fn wrap_positions(config: &Configuration) -> Result<Configuration> {
    let Some(cell) = config.cell() else {
        return Ok(config.clone());
    };
    let inv = invert3(cell).ok_or_else(|| Error::InvalidCell("cell is singular".into()))?;
    let mut out = config.clone();
    for p in &mut out.positions {
        // fractional coordinates: f = p * cell^{-1} with row-vector convention
        let mut frac = [0.0; 3];
        for c in 0..3 {
            frac[c] = p[0] * inv[0][c] + p[1] * inv[1][c] + p[2] * inv[2][c];
        }
        for d in 0..3 {
            if config.pbc()[d] {
                frac[d] -= frac[d].floor();
            }
        }
        for c in 0..3 {
            p[c] = frac[0] * cell[0][c] + frac[1] * cell[1][c] + frac[2] * cell[2][c];
        }
    }
    Ok(out)
}

pub(crate) fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = det3(m);
    if det.abs() < DEGENERATE_CELL_DET {
        return None;
    }
    let c = |r: usize, s: usize| {
        let (r1, r2) = match r {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (s1, s2) = match s {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[r1][s1] * m[r2][s2] - m[r1][s2] * m[r2][s1];
        if (r + s) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut inv = [[0.0; 3]; 3];
    for r in 0..3 {
        for s in 0..3 {
            inv[r][s] = c(s, r) / det;
        }
    }
    Some(inv)
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
