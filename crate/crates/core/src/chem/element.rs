//! Periodic-table data for the supported element subset.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Symbols indexed by atomic number (index 0 unused). Used for pattern
/// parsing, where any element may be named even if molecules cannot hold it.
const SYMBOLS: [&str; 119] = [
    "*", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S",
    "Cl", "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge",
    "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd",
    "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn",
    "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Atomic number lookup for any element symbol (case-sensitive).
pub fn atomic_number_of(symbol: &str) -> Option<u8> {
    SYMBOLS
        .iter()
        .skip(1)
        .position(|&s| s == symbol)
        .map(|i| (i + 1) as u8)
}

pub fn symbol_of(atomic_number: u8) -> &'static str {
    SYMBOLS.get(atomic_number as usize).copied().unwrap_or("*")
}

/// An element a [`Molecule`](super::Molecule) may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    H,
    Li,
    B,
    C,
    N,
    O,
    F,
    Na,
    Mg,
    Si,
    P,
    S,
    Cl,
    K,
    Ca,
    Fe,
    Zn,
    Se,
    Br,
    I,
}

struct ElementData {
    element: Element,
    symbol: &'static str,
    atomic_number: u8,
    monoisotopic_mass: f64,
    average_mass: f64,
    /// Allowed valences of the neutral atom; empty for metals (no valence model).
    valences: &'static [u8],
}

const DATA: [ElementData; 20] = [
    ElementData { element: Element::H, symbol: "H", atomic_number: 1, monoisotopic_mass: 1.007_825_032, average_mass: 1.008, valences: &[1] },
    ElementData { element: Element::Li, symbol: "Li", atomic_number: 3, monoisotopic_mass: 7.016_003_4, average_mass: 6.941, valences: &[] },
    ElementData { element: Element::B, symbol: "B", atomic_number: 5, monoisotopic_mass: 11.009_305_4, average_mass: 10.812, valences: &[3] },
    ElementData { element: Element::C, symbol: "C", atomic_number: 6, monoisotopic_mass: 12.0, average_mass: 12.011, valences: &[4] },
    ElementData { element: Element::N, symbol: "N", atomic_number: 7, monoisotopic_mass: 14.003_074_005, average_mass: 14.007, valences: &[3] },
    ElementData { element: Element::O, symbol: "O", atomic_number: 8, monoisotopic_mass: 15.994_914_622, average_mass: 15.999, valences: &[2] },
    ElementData { element: Element::F, symbol: "F", atomic_number: 9, monoisotopic_mass: 18.998_403_2, average_mass: 18.998, valences: &[1] },
    ElementData { element: Element::Na, symbol: "Na", atomic_number: 11, monoisotopic_mass: 22.989_769_7, average_mass: 22.990, valences: &[] },
    ElementData { element: Element::Mg, symbol: "Mg", atomic_number: 12, monoisotopic_mass: 23.985_041_9, average_mass: 24.305, valences: &[] },
    ElementData { element: Element::Si, symbol: "Si", atomic_number: 14, monoisotopic_mass: 27.976_926_5, average_mass: 28.086, valences: &[4] },
    ElementData { element: Element::P, symbol: "P", atomic_number: 15, monoisotopic_mass: 30.973_761_5, average_mass: 30.974, valences: &[3, 5] },
    ElementData { element: Element::S, symbol: "S", atomic_number: 16, monoisotopic_mass: 31.972_070_7, average_mass: 32.067, valences: &[2, 4, 6] },
    ElementData { element: Element::Cl, symbol: "Cl", atomic_number: 17, monoisotopic_mass: 34.968_852_7, average_mass: 35.453, valences: &[1] },
    ElementData { element: Element::K, symbol: "K", atomic_number: 19, monoisotopic_mass: 38.963_706_9, average_mass: 39.098, valences: &[] },
    ElementData { element: Element::Ca, symbol: "Ca", atomic_number: 20, monoisotopic_mass: 39.962_591_2, average_mass: 40.078, valences: &[] },
    ElementData { element: Element::Fe, symbol: "Fe", atomic_number: 26, monoisotopic_mass: 55.934_942_1, average_mass: 55.845, valences: &[] },
    ElementData { element: Element::Zn, symbol: "Zn", atomic_number: 30, monoisotopic_mass: 63.929_146_6, average_mass: 65.39, valences: &[] },
    ElementData { element: Element::Se, symbol: "Se", atomic_number: 34, monoisotopic_mass: 79.916_521_8, average_mass: 78.96, valences: &[2, 4, 6] },
    ElementData { element: Element::Br, symbol: "Br", atomic_number: 35, monoisotopic_mass: 78.918_337_6, average_mass: 79.904, valences: &[1] },
    ElementData { element: Element::I, symbol: "I", atomic_number: 53, monoisotopic_mass: 126.904_468, average_mass: 126.904, valences: &[1, 3, 5] },
];

/// Exact masses of common isotopes; other mass numbers fall back to the integer mass.
const ISOTOPE_MASSES: [(u8, u16, f64); 12] = [
    (1, 1, 1.007_825_032),
    (1, 2, 2.014_101_778),
    (1, 3, 3.016_049_278),
    (6, 12, 12.0),
    (6, 13, 13.003_354_838),
    (6, 14, 14.003_241_989),
    (7, 15, 15.000_108_898),
    (8, 17, 16.999_131_7),
    (8, 18, 17.999_161_0),
    (9, 18, 18.000_938_0),
    (16, 34, 33.967_866_9),
    (17, 37, 36.965_902_6),
];

impl Element {
    fn data(self) -> &'static ElementData {
        DATA.iter().find(|d| d.element == self).expect("element table is complete")
    }

    pub fn from_symbol(symbol: &str) -> Option<Element> {
        DATA.iter().find(|d| d.symbol == symbol).map(|d| d.element)
    }

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        DATA.iter().find(|d| d.atomic_number == z).map(|d| d.element)
    }

    pub fn symbol(self) -> &'static str {
        self.data().symbol
    }

    pub fn atomic_number(self) -> u8 {
        self.data().atomic_number
    }

    pub fn monoisotopic_mass(self) -> f64 {
        self.data().monoisotopic_mass
    }

    pub fn average_mass(self) -> f64 {
        self.data().average_mass
    }

    pub fn isotope_mass(self, mass_number: u16) -> f64 {
        let z = self.atomic_number();
        ISOTOPE_MASSES
            .iter()
            .find(|(iz, a, _)| *iz == z && *a == mass_number)
            .map(|(_, _, m)| *m)
            .unwrap_or(mass_number as f64)
    }

    /// Elements written without brackets in SMILES.
    pub fn is_organic_subset(self) -> bool {
        matches!(
            self,
            Element::B
                | Element::C
                | Element::N
                | Element::O
                | Element::P
                | Element::S
                | Element::F
                | Element::Cl
                | Element::Br
                | Element::I
        )
    }

    /// Elements that may be written lowercase (aromatic).
    pub fn can_be_aromatic(self) -> bool {
        matches!(
            self,
            Element::B | Element::C | Element::N | Element::O | Element::P | Element::S | Element::Se
        )
    }

    pub fn is_metal(self) -> bool {
        self.data().valences.is_empty()
    }

    /// Allowed total valences for this element at the given formal charge.
    ///
    /// Charged main-group atoms take the valences of their isoelectronic
    /// neutral neighbour (N+ behaves like C, O- like F, C- like N). Returns an
    /// empty slice when no valence model applies (metals).
    pub fn allowed_valences(self, charge: i8) -> &'static [u8] {
        if self.is_metal() {
            return &[];
        }
        if charge == 0 {
            return self.data().valences;
        }
        let z = self.atomic_number() as i16 - charge as i16;
        match z {
            1 => &[1],
            2 | 10 | 18 | 36 | 54 => &[0],
            5 | 13 => &[3],
            6 | 14 | 32 => &[4],
            7 => &[3],
            15 | 33 => &[3, 5],
            8 => &[2],
            16 | 34 => &[2, 4, 6],
            9 | 17 | 35 | 53 => &[1],
            // H+ / H-: bare ions
            0 => &[0],
            _ => &[],
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
