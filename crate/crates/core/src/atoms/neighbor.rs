//! Neighbor lists under explicit periodic-image enumeration.

use super::{cross, det3, norm, Configuration, DEGENERATE_CELL_DET};
use crate::error::{Error, Result};

/// One directed neighbor record: atom `j` seen through periodic image `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEntry {
    pub j: usize,
    pub shift: [i32; 3],
    /// r_j + shift * cell - r_i
    pub disp: [f64; 3],
    pub dist: f64,
}

/// Per-atom neighbor lists within a cutoff.
///
/// Symmetric by construction: `(i -> j, s)` is present iff `(j -> i, -s)` is.
/// Pairs closer than the coincidence threshold 1e-8 A are not listed; the
/// first such pair is recorded in `coincident` so potential evaluation can
/// refuse the configuration.
#[derive(Debug, Clone)]
pub struct NeighborList {
    pub cutoff: f64,
    pub entries: Vec<Vec<NeighborEntry>>,
    pub coincident: Option<(usize, usize, f64)>,
}

const COINCIDENT_DIST: f64 = 1e-8;

impl NeighborList {
    /// Total number of directed entries.
    pub fn num_entries(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    /// All entry distances, unordered.
    pub fn distances(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|es| es.iter().map(|e| e.dist))
            .collect()
    }
}

/// Builds the neighbor list for `config` at `cutoff`.
///
/// Periodic directions are searched over enough image shifts to cover the
/// cutoff plus the fractional spread of the (possibly unwrapped) positions;
/// non-periodic directions use no images. Image enumeration is explicit, so
/// cutoffs larger than half the cell are handled.
pub fn build_neighbor_list(config: &Configuration, cutoff: f64) -> Result<NeighborList> {
    if !(cutoff > 0.0) {
        return Err(Error::argument(format!("cutoff must be > 0, got {cutoff}")));
    }
    let n = config.len();
    let pbc = config.pbc();
    let periodic = pbc.iter().any(|&b| b);

    let mut ranges = [0i32; 3];
    if periodic {
        let cell = config
            .cell()
            .ok_or_else(|| Error::InvalidCell("periodic configuration without cell".into()))?;
        let det = det3(cell);
        if det.abs() < DEGENERATE_CELL_DET {
            return Err(Error::InvalidCell(format!(
                "cell determinant {det:e} below {DEGENERATE_CELL_DET:e}"
            )));
        }
        let inv = super::invert3(cell)
            .ok_or_else(|| Error::InvalidCell("cell is numerically singular".into()))?;
        // Fractional spans account for positions stored outside the cell.
        let mut fmin = [f64::INFINITY; 3];
        let mut fmax = [f64::NEG_INFINITY; 3];
        for p in config.positions() {
            for c in 0..3 {
                let f = p[0] * inv[0][c] + p[1] * inv[1][c] + p[2] * inv[2][c];
                fmin[c] = fmin[c].min(f);
                fmax[c] = fmax[c].max(f);
            }
        }
        for d in 0..3 {
            if pbc[d] {
                let (a, b) = match d {
                    0 => (cell[1], cell[2]),
                    1 => (cell[0], cell[2]),
                    _ => (cell[0], cell[1]),
                };
                let height = det.abs() / norm(&cross(&a, &b));
                let span = (fmax[d] - fmin[d]).max(0.0);
                ranges[d] = (cutoff / height + span).ceil() as i32;
            }
        }
    }

    let positions = config.positions();
    let cell = config.cell();
    let mut entries: Vec<Vec<NeighborEntry>> = vec![Vec::new(); n];
    let mut coincident = None;

    for i in 0..n {
        for j in 0..n {
            for sx in -ranges[0]..=ranges[0] {
                for sy in -ranges[1]..=ranges[1] {
                    for sz in -ranges[2]..=ranges[2] {
                        let shift = [sx, sy, sz];
                        if i == j && shift == [0, 0, 0] {
                            continue;
                        }
                        let mut disp = [0.0; 3];
                        for c in 0..3 {
                            disp[c] = positions[j][c] - positions[i][c];
                        }
                        if let Some(cell) = cell {
                            for (s, row) in shift.iter().zip(cell.iter()) {
                                for c in 0..3 {
                                    disp[c] += *s as f64 * row[c];
                                }
                            }
                        }
                        let dist = norm(&disp);
                        if dist > cutoff {
                            continue;
                        }
                        if dist < COINCIDENT_DIST {
                            if coincident.is_none() {
                                coincident = Some((i, j, dist));
                            }
                            continue;
                        }
                        entries[i].push(NeighborEntry { j, shift, disp, dist });
                    }
                }
            }
        }
    }

    Ok(NeighborList {
        cutoff,
        entries,
        coincident,
    })
}
