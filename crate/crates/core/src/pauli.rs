//! Phase-tracked n-qubit Pauli strings in binary symplectic form.
//!
//! A [`PauliString`] stores `i^phase · σ_1 ⊗ … ⊗ σ_n` where each `σ_j` is one of
//! `I, X, Y, Z` and `Y = iXZ`. Qubit `j` (0-based) lives at bit `j % 64` of word
//! `j / 64` in both the x and z bit vectors. With this convention a string is
//! Hermitian exactly when its phase exponent is even.
//!
//! The textual form lists qubit 0 leftmost, e.g. `"XIZY"`, with an optional
//! `+i`, `-` or `-i` prefix.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest qubit count for which [`PauliString::to_matrix`] will allocate.
pub const MATRIX_QUBIT_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn check_dims(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(())
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: vec![0; words_for(n)],
            z: vec![0; words_for(n)],
            phase: 0,
        }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut p = Self::identity(paulis.len());
        for (q, &s) in paulis.iter().enumerate() {
            p.set(q, s);
        }
        p
    }

    /// `pauli` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, pauli);
        p
    }

    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Self {
        let mut p = Self::identity(n);
        for &(q, s) in terms {
            p.set(q, s);
        }
        p
    }

    /// Product of `X` on every listed qubit.
    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        let terms: Vec<_> = qubits.iter().map(|&q| (q, Pauli::X)).collect();
        Self::from_sparse(n, &terms)
    }

    /// Product of `Z` on every listed qubit.
    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        let terms: Vec<_> = qubits.iter().map(|&q| (q, Pauli::Z)).collect();
        Self::from_sparse(n, &terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Same tensor factors with the global phase replaced by `i^k`.
    pub fn with_phase(mut self, k: u8) -> Self {
        self.phase = k % 4;
        self
    }

    /// Multiplies the global phase by `i^k`.
    pub fn times_phase(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) % 4;
        self
    }

    pub fn negated(self) -> Self {
        self.times_phase(2)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, pauli: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = pauli.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn paulis(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.get(q)).collect()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// Qubits on which the string applies `X` or `Y`.
    pub fn xy_support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x_bit(q)).collect()
    }

    /// True when every tensor factor is the identity, whatever the phase.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_identity_up_to_phase()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// True when only `I` and `Z` factors appear.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// Equality of the tensor factors, ignoring the global phase.
    pub fn same_up_to_phase(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// `(x · z' + x' · z) mod 2`; zero exactly when the two strings commute.
    pub fn symplectic_inner_product(&self, other: &Self) -> Result<u8> {
        check_dims(self, other)?;
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc += (self.x[w] & other.z[w]).count_ones();
            acc += (other.x[w] & self.z[w]).count_ones();
        }
        Ok((acc % 2) as u8)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_inner_product(other)? == 0)
    }

    /// Exact operator product `self · other`, including the `i^k` phase.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let mut plus = 0u32;
        let mut minus = 0u32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            let (y1, xo1, zo1) = (x1 & z1, x1 & !z1, !x1 & z1);
            let (y2, xo2, zo2) = (x2 & z2, x2 & !z2, !x2 & z2);
            // YZ = iX, XY = iZ, ZX = iY and the reversed orders give -i.
            plus += ((y1 & zo2) | (xo1 & y2) | (zo1 & xo2)).count_ones();
            minus += ((y1 & xo2) | (xo1 & zo2) | (zo1 & y2)).count_ones();
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        let phase = (self.phase as u32 + other.phase as u32 + plus + 4 * minus - minus) % 4;
        Ok(Self {
            n: self.n,
            x,
            z,
            phase: phase as u8,
        })
    }

    /// Hermitian conjugate, which is also the inverse.
    pub fn adjoint(&self) -> Self {
        let mut p = self.clone();
        p.phase = (4 - self.phase) % 4;
        p
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::identity(self.n + other.n);
        for q in 0..self.n {
            out.set(q, self.get(q));
        }
        for q in 0..other.n {
            out.set(self.n + q, other.get(q));
        }
        out.phase = (self.phase + other.phase) % 4;
        out
    }

    /// Moves the factor on qubit `q` to qubit `mapping[q]`.
    pub fn permuted(&self, mapping: &[usize]) -> Result<Self> {
        if mapping.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: mapping.len(),
            });
        }
        let mut out = Self::identity(self.n);
        out.phase = self.phase;
        for (q, &target) in mapping.iter().enumerate() {
            out.set(target, self.get(q));
        }
        Ok(out)
    }

    /// Unsigned text without the phase prefix; used as a stable sort key.
    pub fn factors_string(&self) -> String {
        (0..self.n).map(|q| self.get(q).as_char()).collect()
    }

    /// Flip and sign masks in statevector index space, where qubit 0 is the
    /// most significant bit of a basis index.
    pub fn index_masks(&self) -> (usize, usize) {
        assert!(self.n < usize::BITS as usize);
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in 0..self.n {
            let bit = 1usize << (self.n - 1 - q);
            if self.x_bit(q) {
                xm |= bit;
            }
            if self.z_bit(q) {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    /// Phase exponent picked up when `Y = iXZ` factors are rewritten as `XZ`.
    pub(crate) fn xz_phase_exp(&self) -> u8 {
        let ys: u32 = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum();
        ((self.phase as u32 + ys) % 4) as u8
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n > MATRIX_QUBIT_LIMIT {
            return Err(Error::SizeGuard {
                what: "dense Pauli matrix",
                n: self.n,
                max: MATRIX_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << self.n;
        let (xm, zm) = self.index_masks();
        let base = i_pow(self.xz_phase_exp());
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let sign = if (col & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            m[(col ^ xm, col)] = base * sign;
        }
        Ok(m)
    }
}

/// `i^k` as a complex number.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.factors_string())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('\u{2212}', "-");
        let (phase, body) = if let Some(rest) = t.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (0, rest)
        } else {
            (0, t.as_str())
        };
        if body.is_empty() {
            return Err(Error::PauliParse(s.to_string()));
        }
        let paulis = body
            .chars()
            .map(Pauli::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::PauliParse(s.to_string()))?;
        Ok(PauliString::from_paulis(&paulis).with_phase(phase))
    }
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    phase: u8,
    paulis: String,
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PauliJson {
            phase: self.phase,
            paulis: self.factors_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PauliJson::deserialize(deserializer)?;
        if raw.phase > 3 {
            return Err(serde::de::Error::custom("phase must be in 0..=3"));
        }
        let p: PauliString = raw.paulis.parse().map_err(serde::de::Error::custom)?;
        Ok(p.with_phase(raw.phase))
    }
}

/// Serde adapter storing Pauli strings in their textual form (`"-XIZ"`).
pub mod text {
    use super::PauliString;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &PauliString, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PauliString, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::PauliString;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(ps: &[PauliString], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(ps.len()))?;
            for p in ps {
                seq.serialize_element(&p.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PauliString>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
