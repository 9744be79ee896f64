//! Concatenation of an outer stabilizer code with the two-qubit repetition code
//! (REP2) and its rotated, constant-excitation form (KLM, dual rail).
//!
//! Layout: outer qubit `i` of block `b` becomes the physical pair
//! `(2(bn+i), 2(bn+i)+1)`. The rotation `R` is `X` on every odd physical
//! position, so each pair `00/11` of the REP2 code becomes `01/10`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, MATRIX_QUBIT_LIMIT};
use crate::sim::StateVector;
use crate::stabilizer::{Gf2Basis, StabilizerCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InnerKind {
    #[serde(rename = "REP2")]
    Rep2,
    #[serde(rename = "KLM")]
    Klm,
}

impl std::str::FromStr for InnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "REP2" => Ok(Self::Rep2),
            "KLM" => Ok(Self::Klm),
            _ => Err(Error::InvalidParameter(format!("inner code must be REP2 or KLM, got {s:?}"))),
        }
    }
}

impl std::fmt::Display for InnerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Rep2 => "REP2",
            Self::Klm => "KLM",
        })
    }
}

/// Interleaving `π_m` on `2mn` qubits: qubit `j` of the first block of `mn`
/// goes to `2j`, qubit `j` of the second block goes to `2j+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavePermutation {
    pub m: usize,
    pub n: usize,
    pub mapping: Vec<usize>,
}

impl InterleavePermutation {
    pub fn new(m: usize, n: usize) -> Self {
        let half = m * n;
        let mapping = (0..2 * half)
            .map(|q| if q < half { 2 * q } else { 2 * (q - half) + 1 })
            .collect();
        Self { m, n, mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.mapping.len()];
        for &t in &self.mapping {
            if t >= seen.len() || seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.mapping.len()];
        for (q, &t) in self.mapping.iter().enumerate() {
            inv[t] = q;
        }
        inv
    }

    /// `π P π†`.
    pub fn apply(&self, p: &PauliString) -> Result<PauliString> {
        p.permuted(&self.mapping)
    }

    /// `π† P π`.
    pub fn apply_inverse(&self, p: &PauliString) -> Result<PauliString> {
        p.permuted(&self.inverse())
    }
}

/// `CNOT P CNOT` for a CNOT with the given control and target, phase exact.
pub fn cnot_conjugate(p: &PauliString, control: usize, target: usize) -> Result<PauliString> {
    let n = p.n();
    if control >= n || target >= n || control == target {
        return Err(Error::InvalidParameter(format!("bad CNOT ({control}, {target}) on {n} qubits")));
    }
    let image = |q: usize, pauli: Pauli| -> PauliString {
        let mut out = PauliString::single(n, q, pauli);
        if q == control && pauli == Pauli::X {
            out.set(target, Pauli::X);
        }
        if q == target && pauli == Pauli::Z {
            out.set(control, Pauli::Z);
        }
        out
    };
    // i^phase ∏_q i^{x_q z_q} X_q^{x_q} Z_q^{z_q}
    let ys = (0..n).filter(|&q| p.get(q) == Pauli::Y).count() as u8;
    let mut acc = PauliString::identity(n).with_phase((p.phase_exp() + ys) % 4);
    for q in 0..n {
        if p.x_bit(q) {
            acc = acc.multiply(&image(q, Pauli::X))?;
        }
        if p.z_bit(q) {
            acc = acc.multiply(&image(q, Pauli::Z))?;
        }
    }
    Ok(acc)
}

/// `L_REP2(U) = π_m ∘ Ad(CNOT^{⊗mn})(U ⊗ I^{⊗mn})` where the transversal CNOT
/// runs from the first block to the second. Per qubit `I, X, Y, Z` become
/// `II, XX, YX, ZI` on the pair.
pub fn lift_operator(u: &PauliString, m: usize) -> Result<PauliString> {
    let mn = u.n();
    if m == 0 || mn % m != 0 {
        return Err(Error::DimensionMismatch { left: mn, right: m });
    }
    let mut wide = u.tensor(&PauliString::identity(mn));
    for q in 0..mn {
        if wide.x_bit(q) {
            wide = cnot_conjugate(&wide, q, q + mn)?;
        }
    }
    InterleavePermutation::new(m, mn / m).apply(&wide)
}

/// `(I ⊗ X)^{⊗N}` on `2N` qubits.
pub fn rotation_operator(pairs: usize) -> PauliString {
    let odd: Vec<usize> = (0..pairs).map(|j| 2 * j + 1).collect();
    PauliString::x_on(2 * pairs, &odd)
}

/// An outer code concatenated with REP2 or its rotated KLM form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcatenatedCode {
    pub outer: StabilizerCode,
    pub inner_kind: InnerKind,
    /// The REP2-concatenated stabilizer structure `{Ḡ_j}` with lifted logicals.
    pub lifted: StabilizerCode,
    /// The code actually realised: `lifted` for REP2, `R·lifted·R` (signed
    /// generators `(−1)^{r_j} Ḡ_j`) for KLM.
    pub code: StabilizerCode,
    #[serde(with = "crate::pauli::text")]
    pub rotation: PauliString,
    pub permutation: InterleavePermutation,
    #[serde(with = "bits_text")]
    pub r_vector: Vec<u8>,
    #[serde(with = "crate::pauli::text::vec")]
    pub word_stabilizer_generators: Vec<PauliString>,
    #[serde(with = "crate::pauli::text::vec")]
    pub word_operators: Vec<PauliString>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcitationReport {
    pub constant: bool,
    /// Distinct Hamming weights found in the codespace support, ascending.
    pub weights: Vec<usize>,
}

impl ExcitationReport {
    pub fn excitation(&self) -> Option<usize> {
        if self.constant {
            self.weights.first().copied()
        } else {
            None
        }
    }
}

pub fn concatenate(outer: &StabilizerCode, inner_kind: InnerKind) -> Result<ConcatenatedCode> {
    if let Some(f) = outer.validate().failures().next() {
        return Err(Error::InvalidCode(format!("outer code {}: {}", outer.name, f.name)));
    }
    let n = outer.n;
    let nn = 2 * n;
    let lift = |p: &PauliString| lift_operator(p, 1);

    let mut gens = outer.generators.iter().map(lift).collect::<Result<Vec<_>>>()?;
    gens.extend((0..n).map(|j| PauliString::z_on(nn, &[2 * j, 2 * j + 1])));
    let lx = outer.logical_x.iter().map(lift).collect::<Result<Vec<_>>>()?;
    let lz = outer.logical_z.iter().map(lift).collect::<Result<Vec<_>>>()?;
    let lifted = StabilizerCode::new(
        format!("{}+REP2", outer.name),
        gens.clone(),
        lx.clone(),
        lz.clone(),
        outer.distance_hint,
    )?;

    let rotation = rotation_operator(n);
    let r_vector = gens
        .iter()
        .map(|g| g.symplectic_inner_product(&rotation))
        .collect::<Result<Vec<u8>>>()?;

    let code = match inner_kind {
        InnerKind::Rep2 => lifted.clone(),
        InnerKind::Klm => {
            let conj = |p: &PauliString| rotation.multiply(p)?.multiply(&rotation);
            StabilizerCode::new(
                format!("{}+KLM", outer.name),
                gens.iter().map(conj).collect::<Result<Vec<_>>>()?,
                lx.iter().map(conj).collect::<Result<Vec<_>>>()?,
                lz.iter().map(conj).collect::<Result<Vec<_>>>()?,
                outer.distance_hint,
            )?
        }
    };

    let mut word_stabilizer_generators = gens;
    word_stabilizer_generators.extend(lz);
    let k = outer.k;
    let mut word_operators = Vec::with_capacity(1 << k);
    for b in 0..1usize << k {
        let mut w = match inner_kind {
            InnerKind::Rep2 => PauliString::identity(nn),
            InnerKind::Klm => rotation.clone(),
        };
        for (i, x) in lx.iter().enumerate() {
            if (b >> (k - 1 - i)) & 1 == 1 {
                w = w.multiply(x)?;
            }
        }
        word_operators.push(w);
    }

    Ok(ConcatenatedCode {
        outer: outer.clone(),
        inner_kind,
        lifted,
        code,
        rotation,
        permutation: InterleavePermutation::new(1, n),
        r_vector,
        word_stabilizer_generators,
        word_operators,
    })
}

impl ConcatenatedCode {
    pub fn n_physical(&self) -> usize {
        self.lifted.n
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn codespace_basis(&self) -> Result<Vec<StateVector>> {
        self.code.codespace_basis()
    }

    /// Hamming weights across the support of a codespace basis.
    pub fn is_constant_excitation(&self) -> Result<ExcitationReport> {
        let mut weights: Vec<usize> = Vec::new();
        for v in self.codespace_basis()? {
            for i in v.support(1e-9) {
                let w = i.count_ones() as usize;
                if !weights.contains(&w) {
                    weights.push(w);
                }
            }
        }
        weights.sort_unstable();
        Ok(ExcitationReport {
            constant: weights.len() == 1,
            weights,
        })
    }

    /// `R^{⊗m} L_REP2(u) R^{⊗m}` for KLM, `L_REP2(u)` for REP2.
    pub fn logical_operator(&self, u: &PauliString, m: usize) -> Result<PauliString> {
        if u.n() != m * self.outer.n {
            return Err(Error::DimensionMismatch {
                left: u.n(),
                right: m * self.outer.n,
            });
        }
        let lifted = lift_operator(u, m)?;
        match self.inner_kind {
            InnerKind::Rep2 => Ok(lifted),
            InnerKind::Klm => {
                let r = rotation_operator(m * self.outer.n);
                r.multiply(&lifted)?.multiply(&r)
            }
        }
    }

    /// For KLM `s_j = ⟨bin(Ḡ_j), bin(E) + bin(R)⟩`; for REP2 `s_j = ⟨bin(Ḡ_j), bin(E)⟩`.
    pub fn syndrome_of(&self, error: &PauliString) -> Result<Vec<u8>> {
        let base = self.lifted.syndrome(error)?;
        Ok(match self.inner_kind {
            InnerKind::Rep2 => base,
            InnerKind::Klm => xor(&base, &self.r_vector),
        })
    }

    /// Unique joint `+1` state of the word stabilizer.
    pub fn word_state(&self) -> Result<StateVector> {
        let word = StabilizerCode {
            name: format!("{} word", self.code.name),
            n: self.n_physical(),
            k: 0,
            generators: self.word_stabilizer_generators.clone(),
            logical_x: vec![],
            logical_z: vec![],
            distance_hint: None,
        };
        Ok(word.codespace_basis()?.remove(0))
    }

    /// Re-derives the code from its outer code and inner kind.
    pub fn rederive(&self) -> Result<Self> {
        concatenate(&self.outer, self.inner_kind)
    }
}

pub fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidParameter(format!("bad bit string {s:?}"))),
        })
        .collect()
}

mod bits_text {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::bits_to_string(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_bits(&s).map_err(serde::de::Error::custom)
    }
}

/// Upper bound on correction candidates enumerated when building a table.
pub const DECODER_CANDIDATE_LIMIT: usize = 5_000_000;

/// Minimum-weight lookup decoder for the REP2-concatenated code. Among
/// candidates of equal weight the lexicographically smallest text wins.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderTable {
    pub syndrome_bits: usize,
    pub max_weight: usize,
    pub r_vector: Vec<u8>,
    entries: BTreeMap<Vec<u8>, PauliString>,
}

#[derive(Serialize, Deserialize)]
struct DecoderEntryJson {
    syndrome: String,
    correction: String,
}

#[derive(Serialize, Deserialize)]
struct DecoderTableJson {
    syndrome_bits: usize,
    max_weight: usize,
    entries: Vec<DecoderEntryJson>,
    r_vector: String,
}

impl DecoderTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &PauliString)> {
        self.entries.iter()
    }

    /// `Dec_REP2(s)`.
    pub fn decode_rep2(&self, s: &[u8]) -> Result<PauliString> {
        if s.len() != self.syndrome_bits {
            return Err(Error::DimensionMismatch {
                left: s.len(),
                right: self.syndrome_bits,
            });
        }
        self.entries
            .get(s)
            .cloned()
            .ok_or_else(|| Error::Uncorrectable(bits_to_string(s)))
    }

    /// `Dec_KLM(s) = Dec_REP2(r ⊕ s)`.
    pub fn decode_klm(&self, s: &[u8]) -> Result<PauliString> {
        if s.len() != self.syndrome_bits {
            return Err(Error::DimensionMismatch {
                left: s.len(),
                right: self.syndrome_bits,
            });
        }
        self.decode_rep2(&xor(&self.r_vector, s))
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = DecoderTableJson {
            syndrome_bits: self.syndrome_bits,
            max_weight: self.max_weight,
            entries: self
                .entries
                .iter()
                .map(|(s, c)| DecoderEntryJson {
                    syndrome: bits_to_string(s),
                    correction: c.to_string(),
                })
                .collect(),
            r_vector: bits_to_string(&self.r_vector),
        };
        Ok(serde_json::to_string_pretty(&raw)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: DecoderTableJson = serde_json::from_str(s)?;
        let mut entries = BTreeMap::new();
        for e in raw.entries {
            let bits = parse_bits(&e.syndrome)?;
            if bits.len() != raw.syndrome_bits {
                return Err(Error::InvalidParameter(format!("syndrome {} has the wrong length", e.syndrome)));
            }
            entries.insert(bits, e.correction.parse()?);
        }
        Ok(Self {
            syndrome_bits: raw.syndrome_bits,
            max_weight: raw.max_weight,
            r_vector: parse_bits(&raw.r_vector)?,
            entries,
        })
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All Pauli strings of exactly weight `w` on `n` qubits, sorted by text.
pub fn paulis_of_weight(n: usize, w: usize) -> Vec<PauliString> {
    fn rec(n: usize, w: usize, start: usize, cur: &mut Vec<(usize, Pauli)>, out: &mut Vec<PauliString>) {
        if cur.len() == w {
            out.push(PauliString::from_sparse(n, cur));
            return;
        }
        for q in start..n {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                cur.push((q, p));
                rec(n, w, q + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, w, 0, &mut Vec::new(), &mut out);
    out.sort_by_cached_key(|p| p.factors_string());
    out
}

pub fn build_lookup_decoder(code: &ConcatenatedCode, max_weight: usize) -> Result<DecoderTable> {
    let n = code.n_physical();
    let candidates: usize = (0..=max_weight)
        .map(|w| binomial(n, w).saturating_mul(3usize.saturating_pow(w as u32)))
        .fold(0usize, usize::saturating_add);
    if candidates > DECODER_CANDIDATE_LIMIT {
        return Err(Error::SizeGuard {
            what: "decoder enumeration",
            n,
            max: MATRIX_QUBIT_LIMIT,
        });
    }
    let mut entries = BTreeMap::new();
    for w in 0..=max_weight {
        for e in paulis_of_weight(n, w) {
            let s = code.lifted.syndrome(&e)?;
            entries.entry(s).or_insert(e);
        }
    }
    Ok(DecoderTable {
        syndrome_bits: code.lifted.generators.len(),
        max_weight,
        r_vector: code.r_vector.clone(),
        entries,
    })
}

/// Outcome of a correction attempt judged in the stabilizer formalism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionOutcome {
    /// `C·E` lies in the stabilizer group up to phase.
    Corrected,
    /// `C·E` commutes with the stabilizer but acts as a nontrivial logical.
    LogicalError,
    /// The table has no entry for the syndrome.
    Uncorrectable,
}

/// Decodes the KLM-code syndrome of `error` and classifies the result.
pub fn judge_correction(code: &ConcatenatedCode, table: &DecoderTable, error: &PauliString) -> Result<CorrectionOutcome> {
    let s = code.syndrome_of(error)?;
    let correction = match code.inner_kind {
        InnerKind::Klm => table.decode_klm(&s),
        InnerKind::Rep2 => table.decode_rep2(&s),
    };
    let correction = match correction {
        Ok(c) => c,
        Err(Error::Uncorrectable(_)) => return Ok(CorrectionOutcome::Uncorrectable),
        Err(e) => return Err(e),
    };
    let residual = correction.multiply(error)?;
    if Gf2Basis::from_paulis(&code.lifted.generators).contains(&residual) {
        Ok(CorrectionOutcome::Corrected)
    } else {
        Ok(CorrectionOutcome::LogicalError)
    }
}
