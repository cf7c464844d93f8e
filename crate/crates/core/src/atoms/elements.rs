//! Element symbol table for Z = 1..=118.

use crate::error::{Error, Result};

const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn",
    "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Symbol for an atomic number in 1..=118.
pub fn element_symbol(z: u32) -> Result<&'static str> {
    SYMBOLS
        .get(z.wrapping_sub(1) as usize)
        .copied()
        .ok_or_else(|| Error::argument(format!("atomic number {z} outside 1..=118")))
}

/// Atomic number for a case-sensitive element symbol.
pub fn atomic_number(symbol: &str) -> Option<u32> {
    SYMBOLS
        .iter()
        .position(|&s| s == symbol)
        .map(|i| i as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_symbols() {
        assert_eq!(element_symbol(1).unwrap(), "H");
        assert_eq!(element_symbol(14).unwrap(), "Si");
        assert_eq!(element_symbol(79).unwrap(), "Au");
        assert_eq!(element_symbol(118).unwrap(), "Og");
        assert!(element_symbol(0).is_err());
        assert!(element_symbol(119).is_err());
    }

    #[test]
    fn round_trip_all() {
        for z in 1..=118u32 {
            assert_eq!(atomic_number(element_symbol(z).unwrap()), Some(z));
        }
        assert_eq!(atomic_number("Xx"), None);
    }
}
