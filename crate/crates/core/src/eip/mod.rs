//! Closed-form interatomic potentials with analytic forces, the potential
//! registry, and the synthetic high-fidelity oracle.

pub mod constants;
mod oracle;
mod pair;
mod sw;

pub use oracle::{default_eip_set, default_oracle, oracle_energy, OracleModel};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::atoms::{build_neighbor_list, Configuration, NeighborList};
use crate::error::{Error, Result};
use crate::parallel;

/// Functional form of an empirical potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EipKind {
    LennardJones,
    Morse,
    StillingerWeber,
    /// Reserved for the `__oracle__` entry of a potential-set file.
    Oracle,
}

/// A named closed-form potential.
///
/// `taper` applies the cosine cutoff factor `0.5 (cos(pi r / r_cut) + 1)` to
/// pair terms; Stillinger-Weber keeps its native exponential cutoff and
/// ignores the flag. Disabling it truncates pair terms sharply at the cutoff
/// (used by analytic unit checks, not by the default zoo).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EipModel {
    pub name: String,
    pub kind: EipKind,
    pub params: BTreeMap<String, f64>,
    pub cutoff: f64,
    #[serde(default = "default_true")]
    pub taper: bool,
}

fn default_true() -> bool {
    true
}

impl EipModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff > 0.0) || !self.cutoff.is_finite() {
            return Err(Error::argument(format!(
                "eip `{}`: cutoff must be positive and finite",
                self.name
            )));
        }
        if let Some((k, v)) = self.params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::argument(format!(
                "eip `{}`: parameter `{k}` is not finite ({v})",
                self.name
            )));
        }
        Ok(())
    }

    pub(crate) fn param(&self, key: &str) -> Result<f64> {
        self.params.get(key).copied().ok_or_else(|| {
            Error::argument(format!("eip `{}`: missing parameter `{key}`", self.name))
        })
    }
}

/// Ordered set of potentials; the order is the canonical class order for the
/// best-potential classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EipSet {
    pub models: Vec<EipModel>,
}

impl EipSet {
    pub fn new(models: Vec<EipModel>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for m in &models {
            m.validate()?;
            if !seen.insert(m.name.clone()) {
                return Err(Error::argument(format!("duplicate eip name `{}`", m.name)));
            }
            if m.kind == EipKind::Oracle {
                return Err(Error::argument(
                    "kind `oracle` is reserved for the __oracle__ entry",
                ));
            }
        }
        Ok(Self { models })
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.models.iter().map(|m| m.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.models.iter().position(|m| m.name == name)
    }

    /// Largest cutoff over the set (used to size shared neighbor lists).
    pub fn max_cutoff(&self) -> f64 {
        self.models.iter().map(|m| m.cutoff).fold(0.0, f64::max)
    }
}

/// Serialized form of a potential-set file: the zoo plus the oracle under the
/// reserved name `__oracle__`.
pub const ORACLE_ENTRY_NAME: &str = "__oracle__";

/// Reads an `EipSet` and the oracle from a JSON list of
/// `{name, kind, params, cutoff}` entries.
pub fn read_eip_file(json: &str) -> Result<(EipSet, OracleModel)> {
    let entries: Vec<EipModel> = serde_json::from_str(json)?;
    let mut zoo = Vec::new();
    let mut oracle = None;
    for e in entries {
        if e.name == ORACLE_ENTRY_NAME {
            oracle = Some(OracleModel::from_entry(&e)?);
        } else {
            zoo.push(e);
        }
    }
    let oracle = oracle.ok_or_else(|| {
        Error::DataIntegrity(format!("potential-set file lacks a `{ORACLE_ENTRY_NAME}` entry"))
    })?;
    Ok((EipSet::new(zoo)?, oracle))
}

/// Serializes the zoo plus oracle back into the file format.
pub fn write_eip_file(set: &EipSet, oracle: &OracleModel) -> Result<String> {
    let mut entries = set.models.clone();
    entries.push(oracle.to_entry());
    Ok(serde_json::to_string_pretty(&entries)?)
}

/// Total potential energy (eV) of `config` under `model`.
pub fn eip_energy(model: &EipModel, config: &Configuration) -> Result<f64> {
    let nl = build_neighbor_list(config, model.cutoff)?;
    eip_energy_with_nl(model, config, &nl)
}

/// Energy evaluation on a prebuilt neighbor list (must be built at a cutoff
/// >= the model's; entries beyond the model cutoff are skipped).
pub fn eip_energy_with_nl(
    model: &EipModel,
    config: &Configuration,
    nl: &NeighborList,
) -> Result<f64> {
    check_coincident(nl)?;
    let e = match model.kind {
        EipKind::LennardJones | EipKind::Morse => pair::pair_energy(model, nl)?,
        EipKind::StillingerWeber => sw::sw_energy(model, nl)?,
        EipKind::Oracle => {
            return Err(Error::argument(
                "oracle entries are evaluated through OracleModel",
            ))
        }
    };
    debug_assert_eq!(config.len(), nl.entries.len());
    if !e.is_finite() {
        return Err(Error::DataIntegrity(format!(
            "eip `{}` produced non-finite energy",
            model.name
        )));
    }
    Ok(e)
}

/// Analytic forces `F_i = -dE/dr_i` (eV/A), one 3-vector per atom.
pub fn eip_forces(model: &EipModel, config: &Configuration) -> Result<Vec<[f64; 3]>> {
    let nl = build_neighbor_list(config, model.cutoff)?;
    check_coincident(&nl)?;
    let forces = match model.kind {
        EipKind::LennardJones | EipKind::Morse => pair::pair_forces(model, config.len(), &nl)?,
        EipKind::StillingerWeber => sw::sw_forces(model, config.len(), &nl)?,
        EipKind::Oracle => {
            return Err(Error::argument(
                "oracle entries are evaluated through OracleModel",
            ))
        }
    };
    Ok(forces)
}

pub(crate) fn check_coincident(nl: &NeighborList) -> Result<()> {
    if let Some((i, j, dist)) = nl.coincident {
        return Err(Error::CoincidentAtoms { i, j, dist });
    }
    Ok(())
}

/// Complete energy table: `energies[config][eip]` in the set's canonical
/// order. Pure and order-independent; configurations evaluate in parallel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyTable {
    pub names: Vec<String>,
    pub energies: Vec<Vec<f64>>,
}

impl EnergyTable {
    pub fn get(&self, config_index: usize, name: &str) -> Option<f64> {
        let col = self.names.iter().position(|n| n == name)?;
        self.energies.get(config_index).map(|row| row[col])
    }

    /// name -> energy map for one configuration.
    pub fn row_map(&self, config_index: usize) -> BTreeMap<String, f64> {
        self.names
            .iter()
            .cloned()
            .zip(self.energies[config_index].iter().copied())
            .collect()
    }
}

/// Labels every configuration with every potential in the set.
pub fn label_with_eips(eips: &EipSet, configs: &[Configuration]) -> Result<EnergyTable> {
    let rows = parallel::map_indices(configs.len(), |i| label_one(eips, &configs[i], i));
    let energies = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(EnergyTable {
        names: eips.names(),
        energies,
    })
}

/// Sequential variant of [`label_with_eips`]; the rayon path must match it
/// exactly (benchmarked against it in `benches/parallel.rs`).
pub fn label_with_eips_seq(eips: &EipSet, configs: &[Configuration]) -> Result<EnergyTable> {
    let energies = configs
        .iter()
        .enumerate()
        .map(|(i, c)| label_one(eips, c, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergyTable {
        names: eips.names(),
        energies,
    })
}

fn label_one(eips: &EipSet, config: &Configuration, index: usize) -> Result<Vec<f64>> {
    eips.models
        .iter()
        .map(|m| {
            eip_energy(m, config).map_err(|e| Error::EipEval {
                name: m.name.clone(),
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
