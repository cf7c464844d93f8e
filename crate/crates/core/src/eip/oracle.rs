//! The synthetic high-fidelity oracle standing in for first-principles
//! energies: published Stillinger-Weber plus a weak long-range Morse tail.

use std::collections::BTreeMap;

use super::constants as k;
use super::{eip_energy, EipKind, EipModel};
use crate::atoms::Configuration;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleModel {
    pub sw: EipModel,
    pub tail: EipModel,
    pub tail_weight: f64,
}

impl OracleModel {
    /// Deterministic, smooth, and invariant under translation, rotation, and
    /// permutation; by construction no single zoo member matches it uniformly.
    pub fn energy(&self, config: &Configuration) -> Result<f64> {
        Ok(eip_energy(&self.sw, config)? + self.tail_weight * eip_energy(&self.tail, config)?)
    }

    /// Parses the reserved `__oracle__` entry of a potential-set file.
    pub fn from_entry(entry: &EipModel) -> Result<Self> {
        if entry.kind != EipKind::Oracle {
            return Err(Error::DataIntegrity(format!(
                "__oracle__ entry must have kind `oracle`, got {:?}",
                entry.kind
            )));
        }
        let mut sw_params = BTreeMap::new();
        let mut tail_params = BTreeMap::new();
        let mut tail_weight = None;
        let mut tail_cutoff = None;
        for (key, &v) in &entry.params {
            if key == "tail_weight" {
                tail_weight = Some(v);
            } else if key == "tail_cutoff" {
                tail_cutoff = Some(v);
            } else if let Some(stripped) = key.strip_prefix("tail_") {
                tail_params.insert(stripped.to_string(), v);
            } else {
                sw_params.insert(key.clone(), v);
            }
        }
        let sw = EipModel {
            name: "oracle_sw".into(),
            kind: EipKind::StillingerWeber,
            params: sw_params,
            cutoff: entry.cutoff,
            taper: false,
        };
        let tail = EipModel {
            name: "oracle_tail".into(),
            kind: EipKind::Morse,
            params: tail_params,
            cutoff: tail_cutoff
                .ok_or_else(|| Error::DataIntegrity("__oracle__ lacks tail_cutoff".into()))?,
            taper: true,
        };
        sw.validate()?;
        tail.validate()?;
        Ok(Self {
            sw,
            tail,
            tail_weight: tail_weight
                .ok_or_else(|| Error::DataIntegrity("__oracle__ lacks tail_weight".into()))?,
        })
    }

    pub fn to_entry(&self) -> EipModel {
        let mut params = self.sw.params.clone();
        for (key, &v) in &self.tail.params {
            params.insert(format!("tail_{key}"), v);
        }
        params.insert("tail_weight".into(), self.tail_weight);
        params.insert("tail_cutoff".into(), self.tail.cutoff);
        EipModel {
            name: super::ORACLE_ENTRY_NAME.into(),
            kind: EipKind::Oracle,
            params,
            cutoff: self.sw.cutoff,
            taper: false,
        }
    }

    /// The largest cutoff the oracle evaluates at.
    pub fn max_cutoff(&self) -> f64 {
        self.sw.cutoff.max(self.tail.cutoff)
    }
}

/// Oracle energy of a configuration under the given oracle constants.
pub fn oracle_energy(oracle: &OracleModel, config: &Configuration) -> Result<f64> {
    oracle.energy(config)
}

/// The default oracle built from the versioned constants.
pub fn default_oracle() -> OracleModel {
    let sw = EipModel {
        name: "oracle_sw".into(),
        kind: EipKind::StillingerWeber,
        params: sw_params(k::SW_EPSILON, k::SW_LAMBDA, k::SW_GAMMA),
        cutoff: k::SW_CUTOFF,
        taper: false,
    };
    let tail = EipModel {
        name: "oracle_tail".into(),
        kind: EipKind::Morse,
        params: BTreeMap::from([
            ("d".to_string(), k::ORACLE_TAIL_D),
            ("a".to_string(), k::ORACLE_TAIL_A),
            ("r0".to_string(), k::ORACLE_TAIL_R0),
        ]),
        cutoff: k::ORACLE_TAIL_CUTOFF,
        taper: true,
    };
    OracleModel {
        sw,
        tail,
        tail_weight: k::ORACLE_TAIL_WEIGHT,
    }
}

/// The default four-member zoo in canonical class order.
pub fn default_eip_set() -> super::EipSet {
    let lj = EipModel {
        name: "lj".into(),
        kind: EipKind::LennardJones,
        params: BTreeMap::from([
            ("epsilon".to_string(), k::LJ_EPSILON),
            ("sigma".to_string(), k::LJ_SIGMA),
        ]),
        cutoff: k::LJ_CUTOFF,
        taper: true,
    };
    let morse = |name: &str, cutoff: f64| EipModel {
        name: name.into(),
        kind: EipKind::Morse,
        params: BTreeMap::from([
            ("d".to_string(), k::MORSE_D),
            ("a".to_string(), k::MORSE_A),
            ("r0".to_string(), k::MORSE_R0),
        ]),
        cutoff,
        taper: true,
    };
    let sw_pert = EipModel {
        name: "sw_perturbed".into(),
        kind: EipKind::StillingerWeber,
        params: sw_params(k::SW_PERT_EPSILON, k::SW_PERT_LAMBDA, k::SW_PERT_GAMMA),
        cutoff: k::SW_CUTOFF,
        taper: false,
    };
    super::EipSet::new(vec![
        lj,
        morse("morse_short", k::MORSE_CUTOFF_LOW),
        morse("morse_long", k::MORSE_CUTOFF_HIGH),
        sw_pert,
    ])
    .expect("default zoo is valid")
}

fn sw_params(epsilon: f64, lambda: f64, gamma: f64) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("epsilon".to_string(), epsilon),
        ("sigma".to_string(), k::SW_SIGMA),
        ("big_a".to_string(), k::SW_BIG_A),
        ("big_b".to_string(), k::SW_BIG_B),
        ("p".to_string(), k::SW_P),
        ("q".to_string(), k::SW_Q),
        ("a".to_string(), k::SW_A),
        ("lambda".to_string(), lambda),
        ("gamma".to_string(), gamma),
        ("cos_theta0".to_string(), k::SW_COS_THETA0),
    ])
}
