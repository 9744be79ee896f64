//! `[[n,k,d]]` stabilizer codes with logical operators, validation and the
//! built-in codes REP2, LNCY4 and STEANE7.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, MATRIX_QUBIT_LIMIT};
use crate::sim::StateVector;

/// Seed for the random vector projected onto a codespace.
const CODESPACE_SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    #[serde(with = "crate::pauli::text::vec")]
    pub generators: Vec<PauliString>,
    #[serde(with = "crate::pauli::text::vec")]
    pub logical_x: Vec<PauliString>,
    #[serde(with = "crate::pauli::text::vec")]
    pub logical_z: Vec<PauliString>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_hint: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure,
        });
    }
}

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
        distance_hint: Option<usize>,
    ) -> Result<Self> {
        let n = generators
            .first()
            .or(logical_x.first())
            .map(|g| g.n())
            .ok_or_else(|| Error::InvalidCode("a code needs generators or logical operators".into()))?;
        let code = Self {
            name: name.into(),
            n,
            k: logical_x.len(),
            generators,
            logical_x,
            logical_z,
            distance_hint,
        };
        let report = code.validate();
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidCode(format!(
                "{}: {} failed{}",
                code.name,
                f.name,
                f.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
            )));
        }
        Ok(code)
    }

    /// Builds and validates a code from textual Pauli strings.
    pub fn from_text(
        name: &str,
        generators: &[&str],
        logical_x: &[&str],
        logical_z: &[&str],
        distance_hint: Option<usize>,
    ) -> Result<Self> {
        let parse = |v: &[&str]| v.iter().map(|s| s.parse()).collect::<Result<Vec<PauliString>>>();
        Self::new(name, parse(generators)?, parse(logical_x)?, parse(logical_z)?, distance_hint)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "REP2" => Self::from_text("REP2", &["ZZ"], &["XX"], &["ZI"], Some(1)),
            "LNCY4" => Self::from_text(
                "LNCY4",
                &["XXXX", "ZZII", "IIZZ"],
                &["XXII"],
                &["ZIZI"],
                Some(2),
            ),
            "STEANE7" => Self::from_text(
                "STEANE7",
                &[
                    "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
                ],
                &["XXXXXXX"],
                &["ZZZZZZZ"],
                Some(3),
            ),
            _ => Err(Error::UnknownCode(name.to_string())),
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 3] = ["REP2", "LNCY4", "STEANE7"];

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(s)?;
        let report = raw.validate();
        if let Some(f) = report.failures().next() {
            return Err(Error::InvalidCode(format!(
                "{}: {}{}",
                raw.name,
                f.name,
                f.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
            )));
        }
        Ok(raw)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks every structural invariant and reports the first offending pair
    /// for each one.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let all_ops = self
            .generators
            .iter()
            .chain(&self.logical_x)
            .chain(&self.logical_z);

        let sizes = all_ops
            .clone()
            .find(|p| p.n() != self.n)
            .map(|p| format!("{p} acts on {} qubits, code has {}", p.n(), self.n));
        let counts = if self.generators.len() + self.k != self.n
            || self.logical_x.len() != self.k
            || self.logical_z.len() != self.k
        {
            Some(format!(
                "{} generators, {} logical X, {} logical Z for n={}, k={}",
                self.generators.len(),
                self.logical_x.len(),
                self.logical_z.len(),
                self.n,
                self.k
            ))
        } else {
            None
        };
        r.push("dimensions", sizes.clone().or(counts));
        if sizes.is_some() {
            return r;
        }

        r.push(
            "hermitian",
            all_ops
                .clone()
                .find(|p| !p.is_hermitian())
                .map(|p| format!("{p} is not Hermitian")),
        );
        r.push(
            "generators commute",
            first_pair(&self.generators, &self.generators, |i, j, a, b| {
                i < j && sip(a, b) == 1
            }),
        );
        r.push(
            "generators independent",
            if gf2_rank(&self.generators) == self.generators.len() {
                None
            } else {
                Some(format!(
                    "rank {} < {}",
                    gf2_rank(&self.generators),
                    self.generators.len()
                ))
            },
        );
        let logicals: Vec<PauliString> = self.logical_x.iter().chain(&self.logical_z).cloned().collect();
        r.push(
            "logicals commute with generators",
            first_pair(&logicals, &self.generators, |_, _, a, b| sip(a, b) == 1),
        );
        r.push(
            "logical X/Z pairing",
            first_pair(&self.logical_x, &self.logical_z, |i, j, a, b| {
                sip(a, b) != u8::from(i == j)
            })
            .or_else(|| {
                first_pair(&self.logical_x, &self.logical_x, |i, j, a, b| i < j && sip(a, b) == 1)
            })
            .or_else(|| {
                first_pair(&self.logical_z, &self.logical_z, |i, j, a, b| i < j && sip(a, b) == 1)
            }),
        );
        r
    }

    /// `s_j = ⟨bin(G_j), bin(E)⟩`.
    pub fn syndrome(&self, error: &PauliString) -> Result<Vec<u8>> {
        self.generators
            .iter()
            .map(|g| g.symplectic_inner_product(error))
            .collect()
    }

    /// True when `p` lies in the stabilizer group up to a phase.
    pub fn in_stabilizer_up_to_phase(&self, p: &PauliString) -> bool {
        in_span(&self.generators, p)
    }

    /// Orthonormal codespace basis indexed by the logical bitstring `b`
    /// (logical qubit 0 most significant). Basis state 0 is the `+1`
    /// eigenvector of every logical Z with its first nonzero amplitude real and
    /// positive; state `b` is `∏ X̄_i^{b_i}` applied to it.
    pub fn codespace_basis(&self) -> Result<Vec<StateVector>> {
        if self.n > MATRIX_QUBIT_LIMIT {
            return Err(Error::SizeGuard {
                what: "codespace basis",
                n: self.n,
                max: MATRIX_QUBIT_LIMIT,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(CODESPACE_SEED);
        let dim = 1usize << self.n;
        let mut zero = None;
        for _ in 0..8 {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let mut v = StateVector::from_amplitudes(self.n, amps)?;
            let start = v.norm_sqr();
            v.project_onto_stabilizer(&self.generators)?;
            v.project_onto_stabilizer(&self.logical_z)?;
            if v.norm_sqr() > 1e-6 * start {
                zero = Some(v);
                break;
            }
        }
        let mut zero = zero.ok_or_else(|| Error::InvalidCode(format!("{} has an empty codespace", self.name)))?;
        zero.normalize();
        let lead = zero
            .amplitudes()
            .iter()
            .copied()
            .find(|a| a.norm() > 1e-9)
            .unwrap_or(Complex64::new(1.0, 0.0));
        zero.scale(lead.conj() / lead.norm());
        let mut basis = Vec::with_capacity(1 << self.k);
        for b in 0..1usize << self.k {
            let mut v = zero.clone();
            for i in 0..self.k {
                if (b >> (self.k - 1 - i)) & 1 == 1 {
                    v.apply_pauli(&self.logical_x[i])?;
                }
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

fn sip(a: &PauliString, b: &PauliString) -> u8 {
    a.symplectic_inner_product(b).unwrap_or(1)
}

fn first_pair(
    left: &[PauliString],
    right: &[PauliString],
    bad: impl Fn(usize, usize, &PauliString, &PauliString) -> bool,
) -> Option<String> {
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if bad(i, j, a, b) {
                return Some(format!("{a} / {b}"));
            }
        }
    }
    None
}

fn row_of(p: &PauliString) -> Vec<u64> {
    p.x_words().iter().chain(p.z_words()).copied().collect()
}

/// Row-reduced GF(2) basis of the rows `(x|z)`; each kept row has a distinct
/// pivot bit that is cleared in all other kept rows.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Gf2Basis {
    pub fn from_paulis(ps: &[PauliString]) -> Self {
        let mut b = Self::default();
        for p in ps {
            b.insert(p);
        }
        b
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (piv, row) in &self.rows {
            if (v[piv / 64] >> (piv % 64)) & 1 == 1 {
                v.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
            }
        }
        v
    }

    /// Returns false when `p` was already in the span.
    pub fn insert(&mut self, p: &PauliString) -> bool {
        let v = self.reduce(row_of(p));
        let Some(w) = v.iter().position(|&w| w != 0) else {
            return false;
        };
        let piv = w * 64 + v[w].trailing_zeros() as usize;
        for (_, row) in &mut self.rows {
            if (row[piv / 64] >> (piv % 64)) & 1 == 1 {
                row.iter_mut().zip(&v).for_each(|(a, b)| *a ^= b);
            }
        }
        self.rows.push((piv, v));
        true
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.reduce(row_of(p)).iter().all(|&w| w == 0)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn gf2_rank(ps: &[PauliString]) -> usize {
    Gf2Basis::from_paulis(ps).rank()
}

/// Membership of `p` (ignoring phase) in the group generated by `gens`.
pub fn in_span(gens: &[PauliString], p: &PauliString) -> bool {
    Gf2Basis::from_paulis(gens).contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::StateVector;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn validation_examples() {
        let rep2 = StabilizerCode::builtin("REP2").unwrap();
        assert!(rep2.validate().passed());
        assert_eq!((rep2.n, rep2.k), (2, 1));
        assert_eq!(rep2.generators[0].to_string(), "ZZ");

        let bell = StabilizerCode {
            name: "bell".into(),
            n: 2,
            k: 0,
            generators: vec!["XX".parse().unwrap(), "ZZ".parse().unwrap()],
            logical_x: vec![],
            logical_z: vec![],
            distance_hint: None,
        };
        assert!(bell.validate().passed());

        let bad = StabilizerCode {
            generators: vec!["XI".parse().unwrap(), "ZI".parse().unwrap()],
            ..bell.clone()
        };
        let report = bad.validate();
        assert!(!report.passed());
        let f = report.failures().next().unwrap();
        assert_eq!(f.name, "generators commute");
        assert_eq!(f.detail.as_deref(), Some("XI / ZI"));
    }

    #[test]
    fn validation_catches_each_invariant() {
        let base = StabilizerCode::builtin("LNCY4").unwrap();
        let dependent = StabilizerCode {
            generators: vec![
                "ZZII".parse().unwrap(),
                "IIZZ".parse().unwrap(),
                "ZZZZ".parse().unwrap(),
            ],
            ..base.clone()
        };
        assert_eq!(dependent.validate().failures().next().unwrap().name, "generators independent");

        let bad_logical = StabilizerCode {
            logical_z: vec!["ZIII".parse().unwrap()],
            ..base.clone()
        };
        assert_eq!(
            bad_logical.validate().failures().next().unwrap().name,
            "logicals commute with generators"
        );

        let unpaired = StabilizerCode {
            logical_z: vec!["ZZZZ".parse().unwrap()],
            ..base.clone()
        };
        assert_eq!(unpaired.validate().failures().next().unwrap().name, "logical X/Z pairing");

        let nonherm = StabilizerCode {
            generators: vec!["+iXXXX".parse().unwrap(), "ZZII".parse().unwrap(), "IIZZ".parse().unwrap()],
            ..base.clone()
        };
        assert_eq!(nonherm.validate().failures().next().unwrap().name, "hermitian");

        let wrong_n = StabilizerCode {
            logical_z: vec!["ZIZ".parse().unwrap()],
            ..base
        };
        assert_eq!(wrong_n.validate().failures().next().unwrap().name, "dimensions");
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(StabilizerCode::builtin("SHOR9"), Err(Error::UnknownCode(_))));
    }

    #[test]
    fn rep2_basis() {
        let b = StabilizerCode::builtin("REP2").unwrap().codespace_basis().unwrap();
        assert_eq!(b[0], StateVector::basis(2, 0b00).unwrap());
        assert!(b[1].max_abs_diff(&StateVector::basis(2, 0b11).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn lncy4_basis_matches_codewords() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = StabilizerCode::builtin("LNCY4").unwrap().codespace_basis().unwrap();
        let zero = StateVector::from_terms(&[("0000", c(h)), ("1111", c(h))]).unwrap();
        let one = StateVector::from_terms(&[("1100", c(h)), ("0011", c(h))]).unwrap();
        assert!(b[0].max_abs_diff(&zero).unwrap() < 1e-12);
        assert!(b[1].max_abs_diff(&one).unwrap() < 1e-12);
    }

    #[test]
    fn bell_state_for_k0() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let code = StabilizerCode {
            name: "bell".into(),
            n: 2,
            k: 0,
            generators: vec!["XX".parse().unwrap(), "ZZ".parse().unwrap()],
            logical_x: vec![],
            logical_z: vec![],
            distance_hint: None,
        };
        let b = code.codespace_basis().unwrap();
        assert_eq!(b.len(), 1);
        let bell = StateVector::from_terms(&[("00", c(h)), ("11", c(h))]).unwrap();
        assert!(b[0].max_abs_diff(&bell).unwrap() < 1e-12);
    }

    #[test]
    fn builtin_codespaces_are_stabilized_and_logicals_act() {
        for name in StabilizerCode::BUILTIN_NAMES {
            let code = StabilizerCode::builtin(name).unwrap();
            assert!(code.validate().passed(), "{name}");
            let basis = code.codespace_basis().unwrap();
            assert_eq!(basis.len(), 1 << code.k);
            for v in &basis {
                assert!((v.norm() - 1.0).abs() < 1e-12);
                for g in &code.generators {
                    let gv = v.clone().with_pauli(g).unwrap();
                    assert!(gv.max_abs_diff(v).unwrap() < 1e-12, "{name} {g}");
                }
            }
            for (i, u) in basis.iter().enumerate() {
                for (j, v) in basis.iter().enumerate() {
                    let ov = u.inner(v).unwrap();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ov - c(expect)).norm() < 1e-12);
                }
            }
            // projector rank equals 2^k: a second random draw stays inside the span
            let xl = &code.logical_x[0];
            let zl = &code.logical_z[0];
            let x0 = basis[0].clone().with_pauli(xl).unwrap();
            assert!(x0.max_abs_diff(&basis[1]).unwrap() < 1e-12);
            let z0 = basis[0].clone().with_pauli(zl).unwrap();
            assert!(z0.max_abs_diff(&basis[0]).unwrap() < 1e-12);
            let mut z1 = basis[1].clone().with_pauli(zl).unwrap();
            z1.scale(c(-1.0));
            assert!(z1.max_abs_diff(&basis[1]).unwrap() < 1e-12);
        }
    }

    #[test]
    fn steane_projector_rank_is_two() {
        // Brute-force rank of the codespace projector at 2^7.
        let code = StabilizerCode::builtin("STEANE7").unwrap();
        let mut trace = 0.0;
        for i in 0..128 {
            let mut v = StateVector::basis(7, i).unwrap();
            v.project_onto_stabilizer(&code.generators).unwrap();
            trace += v.amplitudes()[i].re;
        }
        assert!((trace - 2.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let code = StabilizerCode::builtin("STEANE7").unwrap();
        let s = code.to_json().unwrap();
        assert!(s.contains("\"generators\""));
        assert!(s.contains("\"IIIXXXX\""));
        let back = StabilizerCode::from_json(&s).unwrap();
        assert_eq!(back, code);
        assert!(StabilizerCode::from_json("{\"name\":1}").is_err());
        let bad = s.replace("IIIXXXX", "IIIZXXX");
        assert!(matches!(StabilizerCode::from_json(&bad), Err(Error::InvalidCode(_))));
    }

    #[test]
    fn gf2_span() {
        let gens: Vec<PauliString> = ["XXXX", "ZZII", "IIZZ"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(in_span(&gens, &"ZZZZ".parse().unwrap()));
        assert!(in_span(&gens, &"-YYXX".parse().unwrap()));
        assert!(!in_span(&gens, &"ZIZI".parse().unwrap()));
        assert_eq!(gf2_rank(&gens), 3);
    }
}
