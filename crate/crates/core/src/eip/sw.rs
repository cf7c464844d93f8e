//! Stillinger-Weber potential: two-body term plus angular three-body term,
//! both with the native exponential cutoff.

use super::EipModel;
use crate::atoms::NeighborList;
use crate::error::Result;

pub(crate) struct SwParams {
    pub epsilon: f64,
    pub sigma: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub cos_theta0: f64,
}

impl SwParams {
    pub fn from_model(model: &EipModel) -> Result<Self> {
        Ok(Self {
            epsilon: model.param("epsilon")?,
            sigma: model.param("sigma")?,
            big_a: model.param("big_a")?,
            big_b: model.param("big_b")?,
            p: model.param("p")?,
            q: model.param("q")?,
            a: model.param("a")?,
            lambda: model.param("lambda")?,
            gamma: model.param("gamma")?,
            cos_theta0: model.param("cos_theta0")?,
        })
    }

    pub fn range(&self) -> f64 {
        self.a * self.sigma
    }

    /// Two-body value and radial derivative; zero at and beyond `a sigma`.
    pub fn phi2(&self, r: f64) -> (f64, f64) {
        let rc = self.range();
        if r >= rc {
            return (0.0, 0.0);
        }
        let x = self.sigma / r;
        let xp = x.powf(self.p);
        let xq = x.powf(self.q);
        let poly = self.big_b * xp - xq;
        let dpoly = (-self.p * self.big_b * xp + self.q * xq) / r;
        let ex = (self.sigma / (r - rc)).exp();
        let dex = -self.sigma / ((r - rc) * (r - rc)) * ex;
        let ae = self.big_a * self.epsilon;
        (ae * poly * ex, ae * (dpoly * ex + poly * dex))
    }

    /// Three-body radial factor `g(r) = exp(gamma sigma / (r - a sigma))`
    /// and its derivative; zero at and beyond the range.
    pub fn g(&self, r: f64) -> (f64, f64) {
        let rc = self.range();
        if r >= rc {
            return (0.0, 0.0);
        }
        let gs = self.gamma * self.sigma;
        let v = (gs / (r - rc)).exp();
        (v, -gs / ((r - rc) * (r - rc)) * v)
    }
}

pub(crate) fn sw_energy(model: &EipModel, nl: &NeighborList) -> Result<f64> {
    let sw = SwParams::from_model(model)?;
    let mut total = 0.0;
    for entries in &nl.entries {
        for e in entries {
            total += 0.5 * sw.phi2(e.dist).0;
        }
        // unordered pairs of neighbor entries around the central atom
        for (ai, ea) in entries.iter().enumerate() {
            let (ga, _) = sw.g(ea.dist);
            if ga == 0.0 {
                continue;
            }
            for eb in entries.iter().skip(ai + 1) {
                let (gb, _) = sw.g(eb.dist);
                if gb == 0.0 {
                    continue;
                }
                let cos = dot(&ea.disp, &eb.disp) / (ea.dist * eb.dist);
                let u = cos - sw.cos_theta0;
                total += sw.lambda * sw.epsilon * u * u * ga * gb;
            }
        }
    }
    Ok(total)
}

pub(crate) fn sw_forces(
    model: &EipModel,
    n_atoms: usize,
    nl: &NeighborList,
) -> Result<Vec<[f64; 3]>> {
    let sw = SwParams::from_model(model)?;
    let mut forces = vec![[0.0; 3]; n_atoms];

    for (i, entries) in nl.entries.iter().enumerate() {
        for e in entries {
            let (_, dphi) = sw.phi2(e.dist);
            let scale = 0.5 * dphi / e.dist;
            for c in 0..3 {
                forces[i][c] += scale * e.disp[c];
                forces[e.j][c] -= scale * e.disp[c];
            }
        }

        for (ai, ea) in entries.iter().enumerate() {
            let (ga, dga) = sw.g(ea.dist);
            if ga == 0.0 {
                continue;
            }
            for eb in entries.iter().skip(ai + 1) {
                let (gb, dgb) = sw.g(eb.dist);
                if gb == 0.0 {
                    continue;
                }
                let (r1, r2) = (ea.dist, eb.dist);
                let cos = dot(&ea.disp, &eb.disp) / (r1 * r2);
                let u = cos - sw.cos_theta0;
                let le = sw.lambda * sw.epsilon;

                // dh/d(disp_a) = le [2 u g1 g2 dcos/d(disp_a) + u^2 g1' g2 disp_a / r1]
                let mut da = [0.0; 3];
                let mut db = [0.0; 3];
                for c in 0..3 {
                    let dcos_da = eb.disp[c] / (r1 * r2) - cos * ea.disp[c] / (r1 * r1);
                    let dcos_db = ea.disp[c] / (r1 * r2) - cos * eb.disp[c] / (r2 * r2);
                    da[c] = le * (2.0 * u * ga * gb * dcos_da + u * u * dga * gb * ea.disp[c] / r1);
                    db[c] = le * (2.0 * u * ga * gb * dcos_db + u * u * ga * dgb * eb.disp[c] / r2);
                }
                for c in 0..3 {
                    forces[ea.j][c] -= da[c];
                    forces[eb.j][c] -= db[c];
                    forces[i][c] += da[c] + db[c];
                }
            }
        }
    }
    Ok(forces)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
