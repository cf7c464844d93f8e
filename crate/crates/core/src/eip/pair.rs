//! Lennard-Jones and Morse pair terms with the cosine cutoff taper.

use super::{EipKind, EipModel};
use crate::atoms::NeighborList;
use crate::error::Result;

/// Cosine taper and its derivative: `t(r) = 0.5 (cos(pi r / rc) + 1)` for
/// r <= rc, zero beyond. C1 at both ends.
pub(crate) fn taper(r: f64, rc: f64) -> (f64, f64) {
    if r >= rc {
        return (0.0, 0.0);
    }
    let x = std::f64::consts::PI * r / rc;
    (0.5 * (x.cos() + 1.0), -0.5 * std::f64::consts::PI / rc * x.sin())
}

struct PairParams {
    kind: EipKind,
    a: f64,
    b: f64,
    c: f64,
}

fn pair_params(model: &EipModel) -> Result<PairParams> {
    match model.kind {
        EipKind::LennardJones => Ok(PairParams {
            kind: model.kind,
            a: model.param("epsilon")?,
            b: model.param("sigma")?,
            c: 0.0,
        }),
        EipKind::Morse => Ok(PairParams {
            kind: model.kind,
            a: model.param("d")?,
            b: model.param("a")?,
            c: model.param("r0")?,
        }),
        _ => unreachable!("pair evaluation is only dispatched for pair kinds"),
    }
}

/// Pair value and radial derivative, without the taper.
fn phi(p: &PairParams, r: f64) -> (f64, f64) {
    match p.kind {
        EipKind::LennardJones => {
            let (eps, sigma) = (p.a, p.b);
            let s6 = (sigma / r).powi(6);
            let e = 4.0 * eps * (s6 * s6 - s6);
            let de = 24.0 * eps * (s6 - 2.0 * s6 * s6) / r;
            (e, de)
        }
        EipKind::Morse => {
            let (d, a, r0) = (p.a, p.b, p.c);
            let e1 = (-a * (r - r0)).exp();
            let e2 = e1 * e1;
            let e = d * (e2 - 2.0 * e1);
            let de = 2.0 * a * d * (e1 - e2);
            (e, de)
        }
        _ => unreachable!(),
    }
}

/// Tapered pair value and derivative.
fn phi_tapered(model: &EipModel, p: &PairParams, r: f64) -> (f64, f64) {
    if r > model.cutoff {
        return (0.0, 0.0);
    }
    let (e, de) = phi(p, r);
    if model.taper {
        let (t, dt) = taper(r, model.cutoff);
        (e * t, de * t + e * dt)
    } else {
        (e, de)
    }
}

/// Half-sum over the symmetric neighbor list; each physical pair appears
/// twice, self-image pairs included.
pub(crate) fn pair_energy(model: &EipModel, nl: &NeighborList) -> Result<f64> {
    let p = pair_params(model)?;
    let mut total = 0.0;
    for entries in &nl.entries {
        for e in entries {
            total += 0.5 * phi_tapered(model, &p, e.dist).0;
        }
    }
    Ok(total)
}

pub(crate) fn pair_forces(
    model: &EipModel,
    n_atoms: usize,
    nl: &NeighborList,
) -> Result<Vec<[f64; 3]>> {
    let p = pair_params(model)?;
    let mut forces = vec![[0.0; 3]; n_atoms];
    for (i, entries) in nl.entries.iter().enumerate() {
        for e in entries {
            let (_, de) = phi_tapered(model, &p, e.dist);
            // E term = 0.5 phi(|disp|); F_i = +0.5 phi' disp/r, F_j the opposite
            let scale = 0.5 * de / e.dist;
            for c in 0..3 {
                forces[i][c] += scale * e.disp[c];
                forces[e.j][c] -= scale * e.disp[c];
            }
        }
    }
    Ok(forces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taper_is_one_at_zero_and_zero_at_cutoff() {
        let (t0, _) = taper(0.0, 3.0);
        assert!((t0 - 1.0).abs() < 1e-15);
        let (tc, dtc) = taper(3.0, 3.0);
        assert_eq!(tc, 0.0);
        assert_eq!(dtc, 0.0);
        let (tm, _) = taper(1.5, 3.0);
        assert!((tm - 0.5).abs() < 1e-15);
    }
}
