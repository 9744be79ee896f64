//! Dense statevector and superoperator engine for small qubit counts.
//!
//! Basis index convention: qubit 0 is the most significant bit, so the index of
//! `|x_0 x_1 … x_{n-1}⟩` is `Σ x_j 2^{n-1-j}` and bitstrings print left to right.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{i_pow, Pauli, PauliString};

pub const STATE_QUBIT_LIMIT: usize = 16;
pub const SUPEROPERATOR_QUBIT_LIMIT: usize = 3;
pub const TWIRL_QUBIT_LIMIT: usize = 2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        guard_state(n)?;
        let mut amps = vec![ZERO; 1 << n];
        if index >= amps.len() {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        guard_state(n)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes given for {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    /// Builds `Σ c |bits⟩` from bitstring terms; the result is not normalised.
    pub fn from_terms(terms: &[(&str, Complex64)]) -> Result<Self> {
        let n = terms
            .first()
            .map(|(b, _)| b.len())
            .ok_or_else(|| Error::InvalidParameter("no terms".into()))?;
        let mut s = Self::from_amplitudes(n, vec![ZERO; 1 << n])?;
        for (bits, c) in terms {
            if bits.len() != n {
                return Err(Error::InvalidParameter(format!("ragged bitstring {bits}")));
            }
            let idx = usize::from_str_radix(bits, 2)
                .map_err(|_| Error::InvalidParameter(format!("bad bitstring {bits}")))?;
            s.amps[idx] += c;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scales to unit norm; returns the norm before scaling.
    pub fn normalize(&mut self) -> f64 {
        let nrm = self.norm();
        if nrm > 0.0 {
            let inv = 1.0 / nrm;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        nrm
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn scale(&mut self, c: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= c);
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_n(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest entrywise distance after aligning the global phase of `other`.
    pub fn distance_up_to_phase(&self, other: &Self) -> Result<f64> {
        let ov = self.inner(other)?;
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { ONE };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_n(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self ⊗ other` with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        guard_state(self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self {
            n: self.n + other.n,
            amps,
        })
    }

    /// Basis indices whose amplitude magnitude exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.amps[i].norm() > tol)
            .collect()
    }

    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n)
    }

    fn bit_of(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    /// Exact permutation-with-phases action of a Pauli string.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        check_n(self.n, p.n())?;
        let (xm, zm) = p.index_masks();
        let base = i_pow(p.xz_phase_exp());
        let mut out = vec![ZERO; self.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            let sign = if (i & zm).count_ones() % 2 == 1 { -base } else { base };
            out[i ^ xm] = a * sign;
        }
        self.amps = out;
        Ok(())
    }

    pub fn with_pauli(mut self, p: &PauliString) -> Result<Self> {
        self.apply_pauli(p)?;
        Ok(self)
    }

    /// `exp(-iθ S^z)` with `S^z = Z_1 + … + Z_n`.
    pub fn apply_collective_phase(&mut self, theta: f64) {
        let n = self.n as f64;
        for (i, a) in self.amps.iter_mut().enumerate() {
            let w = i.count_ones() as f64;
            *a *= Complex64::from_polar(1.0, -theta * (n - 2.0 * w));
        }
    }

    /// Multiplies each amplitude by `phase(index)`.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phase(i);
        }
    }

    /// Applies a `2^k × 2^k` matrix to the listed target qubits; `targets[0]` is
    /// the most significant qubit of the matrix index.
    pub fn apply_matrix(&mut self, m: &CMatrix, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if m.nrows() != 1 << k || m.ncols() != 1 << k {
            return Err(Error::InvalidParameter(format!(
                "{}x{} matrix on {k} targets",
                m.nrows(),
                m.ncols()
            )));
        }
        for (a, &t) in targets.iter().enumerate() {
            if t >= self.n || targets[..a].contains(&t) {
                return Err(Error::InvalidParameter(format!("bad target list {targets:?}")));
            }
        }
        let masks: Vec<usize> = targets.iter().map(|&t| self.bit_of(t)).collect();
        let all: usize = masks.iter().sum();
        let sub = 1usize << k;
        let offsets: Vec<usize> = (0..sub)
            .map(|r| {
                (0..k)
                    .filter(|&a| (r >> (k - 1 - a)) & 1 == 1)
                    .map(|a| masks[a])
                    .sum()
            })
            .collect();
        let mut buf = vec![ZERO; sub];
        for base in 0..self.dim() {
            if base & all != 0 {
                continue;
            }
            for (r, off) in offsets.iter().enumerate() {
                buf[r] = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, b) in buf.iter().enumerate() {
                    acc += m[(r, c)] * b;
                }
                self.amps[base | off] = acc;
            }
        }
        Ok(())
    }

    pub fn apply_single(&mut self, m: &CMatrix, qubit: usize) -> Result<()> {
        self.apply_matrix(m, &[qubit])
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.apply_single(&gates::hadamard(), qubit)
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        if control >= self.n || target >= self.n || control == target {
            return Err(Error::InvalidParameter(format!(
                "bad CNOT ({control}, {target}) on {} qubits",
                self.n
            )));
        }
        let (cb, tb) = (self.bit_of(control), self.bit_of(target));
        for i in 0..self.dim() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
        Ok(())
    }

    /// Reorders qubits: the qubit at position `q` moves to `mapping[q]`.
    pub fn permute_qubits(&self, mapping: &[usize]) -> Result<Self> {
        if mapping.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: mapping.len(),
            });
        }
        let mut out = vec![ZERO; self.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for (q, &m) in mapping.iter().enumerate() {
                if i & self.bit_of(q) != 0 {
                    j |= 1 << (self.n - 1 - m);
                }
            }
            out[j] = *a;
        }
        Ok(Self { n: self.n, amps: out })
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        let moved = self.clone().with_pauli(p)?;
        self.inner(&moved)
    }

    /// Projects onto the `(-1)^outcome` eigenspace of a Hermitian Pauli without
    /// renormalising; returns the Born probability of that outcome.
    pub fn project_pauli(&mut self, p: &PauliString, outcome_minus: bool) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.to_string()));
        }
        let mut moved = self.clone();
        moved.apply_pauli(p)?;
        let sign = if outcome_minus { -1.0 } else { 1.0 };
        for (a, b) in self.amps.iter_mut().zip(&moved.amps) {
            *a = (*a + b * sign) * 0.5;
        }
        Ok(self.norm_sqr())
    }

    /// Born-rule measurement of a Hermitian Pauli; the state is left normalised
    /// in the sampled eigenspace. Returns the eigenvalue `±1`.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<i8> {
        let mut plus = self.clone();
        let total = self.norm_sqr();
        let p_plus = plus.project_pauli(p, false)? / total;
        let u: f64 = rng.random();
        if u < p_plus {
            *self = plus.normalized();
            Ok(1)
        } else {
            self.project_pauli(p, true)?;
            self.normalize();
            Ok(-1)
        }
    }

    /// One Monte-Carlo unravelling step of `channel` acting on `targets`.
    /// Returns the sampled Kraus index; the state is left normalised.
    pub fn apply_kraus_trajectory<R: Rng + ?Sized>(
        &mut self,
        channel: &KrausChannel,
        targets: &[usize],
        rng: &mut R,
    ) -> Result<usize> {
        if targets.len() != channel.n() {
            return Err(Error::DimensionMismatch {
                left: channel.n(),
                right: targets.len(),
            });
        }
        let total = self.norm_sqr();
        let u: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = None;
        for (a, k) in channel.operators().iter().enumerate() {
            let mut branch = self.clone();
            branch.apply_matrix(k, targets)?;
            let w = branch.norm_sqr();
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = Some((a, branch.clone()));
            if u < acc {
                *self = branch.normalized();
                return Ok(a);
            }
        }
        // rounding left u just above the accumulated weight
        let (a, branch) = last.ok_or_else(|| Error::InvalidParameter("all Kraus branches vanish".into()))?;
        *self = branch.normalized();
        Ok(a)
    }

    /// Inner product over the leading `k` qubits with `bra`, leaving the state of
    /// the remaining qubits: `(⟨bra| ⊗ I) |self⟩`.
    pub fn contract_leading(&self, bra: &StateVector) -> Result<StateVector> {
        if bra.n > self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: bra.n,
            });
        }
        let rest = self.n - bra.n;
        let rdim = 1usize << rest;
        let mut out = vec![ZERO; rdim];
        for (h, b) in bra.amps.iter().enumerate() {
            if b.norm_sqr() == 0.0 {
                continue;
            }
            let bc = b.conj();
            for (r, o) in out.iter_mut().enumerate() {
                *o += bc * self.amps[(h << rest) | r];
            }
        }
        StateVector::from_amplitudes(rest, out)
    }

    /// Same as [`contract_leading`](Self::contract_leading) but over the trailing qubits.
    pub fn contract_trailing(&self, bra: &StateVector) -> Result<StateVector> {
        if bra.n > self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: bra.n,
            });
        }
        let lead = self.n - bra.n;
        let bdim = bra.dim();
        let mut out = vec![ZERO; 1 << lead];
        for (h, o) in out.iter_mut().enumerate() {
            for (t, b) in bra.amps.iter().enumerate() {
                *o += b.conj() * self.amps[h * bdim + t];
            }
        }
        StateVector::from_amplitudes(lead, out)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.support(1e-12) {
            if !first {
                writeln!(f)?;
            }
            first = false;
            let a = self.amps[i];
            write!(f, "({:+.6}{:+.6}i) |{}⟩", a.re, a.im, self.bitstring(i))?;
        }
        Ok(())
    }
}

impl StateVector {
    /// Projection onto the joint `+1` eigenspace of commuting Hermitian Paulis.
    pub fn project_onto_stabilizer(&mut self, generators: &[PauliString]) -> Result<f64> {
        for g in generators {
            self.project_pauli(g, false)?;
        }
        Ok(self.norm_sqr())
    }
}

fn guard_state(n: usize) -> Result<()> {
    if n == 0 || n > STATE_QUBIT_LIMIT {
        return Err(Error::SizeGuard {
            what: "statevector",
            n,
            max: STATE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

fn check_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Single- and two-qubit gate matrices.
pub mod gates {
    use super::{CMatrix, ONE, ZERO};
    use num_complex::Complex64;

    pub fn identity(k: usize) -> CMatrix {
        CMatrix::identity(1 << k, 1 << k)
    }

    pub fn hadamard() -> CMatrix {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
    }

    pub fn phase_s() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, Complex64::new(0.0, 1.0)])
    }

    /// `exp(-iθZ)`.
    pub fn z_rotation(theta: f64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(1.0, -theta),
                ZERO,
                ZERO,
                Complex64::from_polar(1.0, theta),
            ],
        )
    }
}

/// A CPTP map given by Kraus operators on `n` qubits.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    n: usize,
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    pub const COMPLETENESS_TOL: f64 = 1e-10;

    pub fn new(n: usize, operators: Vec<CMatrix>) -> Result<Self> {
        let dim = 1usize << n;
        if operators.is_empty() {
            return Err(Error::InvalidParameter("a channel needs at least one Kraus operator".into()));
        }
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::InvalidParameter(format!(
                    "Kraus operator of shape {}x{} on {n} qubits",
                    k.nrows(),
                    k.ncols()
                )));
            }
        }
        let ch = Self { n, operators };
        let dev = ch.completeness_deviation();
        if dev > Self::COMPLETENESS_TOL {
            return Err(Error::InvalidParameter(format!(
                "Kraus operators are not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(ch)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `max |Σ K†K − I|` entrywise.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = 1usize << self.n;
        let mut acc = CMatrix::zeros(dim, dim);
        for k in &self.operators {
            acc += k.adjoint() * k;
        }
        acc -= CMatrix::identity(dim, dim);
        acc.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            operators: vec![gates::identity(n)],
        }
    }

    pub fn unitary(n: usize, u: CMatrix) -> Result<Self> {
        Self::new(n, vec![u])
    }

    /// Kraus operators `A_0 = |0⟩⟨0| + √(1−γ)|1⟩⟨1|`, `A_1 = √γ |0⟩⟨1|`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_prob("gamma", gamma)?;
        let c = |x: f64| Complex64::new(x, 0.0);
        let a0 = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c((1.0 - gamma).sqrt())]);
        let a1 = CMatrix::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt()), ZERO, ZERO]);
        Self::new(1, vec![a0, a1])
    }

    /// `ρ ↦ (1−p)ρ + (p/3)(XρX + YρY + ZρZ)`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_prob("p", p)?;
        Self::pauli_channel(1, &[(1.0 - p), p / 3.0, p / 3.0, p / 3.0])
    }

    /// Z-flip with probability `prob`.
    pub fn dephasing(prob: f64) -> Result<Self> {
        check_prob("dephasing probability", prob)?;
        Self::pauli_channel(1, &[1.0 - prob, 0.0, 0.0, prob])
    }

    /// Pauli channel with probabilities indexed like [`pauli_basis`].
    pub fn pauli_channel(n: usize, probs: &[f64]) -> Result<Self> {
        let basis = pauli_basis(n);
        if probs.len() != basis.len() {
            return Err(Error::InvalidParameter(format!(
                "{} probabilities for {} Paulis",
                probs.len(),
                basis.len()
            )));
        }
        let mut ops = Vec::new();
        for (p, pr) in basis.iter().zip(probs) {
            if *pr < 0.0 {
                return Err(Error::InvalidParameter(format!("negative probability {pr}")));
            }
            if *pr > 0.0 {
                ops.push(p.to_matrix()? * Complex64::new(pr.sqrt(), 0.0));
            }
        }
        Self::new(n, ops)
    }

    /// The collective phase unitary `exp(-iθ S^z)` on `n` qubits.
    pub fn coherent_phase(n: usize, theta: f64) -> Result<Self> {
        let mut u = gates::z_rotation(theta);
        for _ in 1..n {
            u = u.kronecker(&gates::z_rotation(theta));
        }
        Self::unitary(n, u)
    }

    /// `M(ρ) = (1−λ) UρU† + λ D_p^{⊗n}(ρ)` with `U = exp(-iθ S^z)`.
    pub fn mixed_coherent_depolarizing(n: usize, lambda: f64, p: f64, theta: f64) -> Result<Self> {
        check_prob("lambda", lambda)?;
        let coherent = Self::coherent_phase(n, theta)?;
        let dep = Self::depolarizing(p)?.tensor_power(n)?;
        Self::mixture(&[(1.0 - lambda, &coherent), (lambda, &dep)])
    }

    /// Convex combination of channels on the same qubits.
    pub fn mixture(parts: &[(f64, &KrausChannel)]) -> Result<Self> {
        let n = parts
            .first()
            .map(|(_, c)| c.n)
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut ops = Vec::new();
        for (w, ch) in parts {
            check_n(n, ch.n)?;
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!("negative weight {w}")));
            }
            if *w > 0.0 {
                let s = Complex64::new(w.sqrt(), 0.0);
                ops.extend(ch.operators.iter().map(|k| k * s));
            }
        }
        Self::new(n, ops)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut ops = Vec::with_capacity(self.operators.len() * other.operators.len());
        for a in &self.operators {
            for b in &other.operators {
                ops.push(a.kronecker(b));
            }
        }
        Self::new(self.n + other.n, ops)
    }

    pub fn tensor_power(&self, m: usize) -> Result<Self> {
        let mut out = self.clone();
        for _ in 1..m {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// `ρ ↦ Σ K ρ K†` on a dense density matrix.
    pub fn apply_to_density(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        for k in &self.operators {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Kraus set `{V† K V}` implementing `ρ ↦ V† N(VρV†) V`.
    pub fn conjugated(&self, v: &CMatrix) -> Self {
        let vd = v.adjoint();
        Self {
            n: self.n,
            operators: self.operators.iter().map(|k| &vd * k * v).collect(),
        }
    }
}

fn check_prob(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::InvalidParameter(format!("{name} = {x} is not in [0, 1]")));
    }
    Ok(())
}

/// All `4^n` unsigned Pauli strings; digit order `I, X, Y, Z` with qubit 0 most
/// significant.
pub fn pauli_basis(n: usize) -> Vec<PauliString> {
    (0..4usize.pow(n as u32))
        .map(|idx| {
            let ps: Vec<Pauli> = (0..n)
                .map(|q| Pauli::ALL[(idx >> (2 * (n - 1 - q))) & 3])
                .collect();
            PauliString::from_paulis(&ps)
        })
        .collect()
}

/// Pauli transfer matrix `R_ij = tr(P_i N(P_j)) / 2^n`.
pub fn channel_superoperator(channel: &KrausChannel) -> Result<DMatrix<f64>> {
    let n = channel.n();
    if n > SUPEROPERATOR_QUBIT_LIMIT {
        return Err(Error::SizeGuard {
            what: "superoperator",
            n,
            max: SUPEROPERATOR_QUBIT_LIMIT,
        });
    }
    let mats: Vec<CMatrix> = pauli_basis(n)
        .iter()
        .map(|p| p.to_matrix())
        .collect::<Result<_>>()?;
    let d = mats.len();
    let scale = 1.0 / (1usize << n) as f64;
    let mut out = DMatrix::zeros(d, d);
    for (j, pj) in mats.iter().enumerate() {
        let image = channel.apply_to_density(pj);
        for (i, pi) in mats.iter().enumerate() {
            out[(i, j)] = (pi * &image).trace().re * scale;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwirlGroup {
    /// The `4^n` Pauli strings.
    Pauli,
    /// Tensor products of the 24 single-qubit Cliffords.
    SingleQubitCliffordTensor,
}

/// The 24 single-qubit Clifford unitaries modulo global phase, generated by
/// closing `{H, S}` under multiplication.
pub fn single_qubit_cliffords() -> Vec<CMatrix> {
    fn canonical(m: &CMatrix) -> CMatrix {
        let lead = m
            .iter()
            .find(|c| c.norm() > 1e-9)
            .copied()
            .unwrap_or(ONE);
        m * (lead.conj() / lead.norm())
    }
    fn key(m: &CMatrix) -> Vec<(i64, i64)> {
        m.iter()
            .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
            .collect()
    }
    let gens = [gates::hadamard(), gates::phase_s()];
    let mut group = vec![canonical(&gates::identity(1))];
    let mut keys = vec![key(&group[0])];
    let mut frontier = group.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let c = canonical(&(g * m));
                let k = key(&c);
                if !keys.contains(&k) {
                    keys.push(k);
                    group.push(c.clone());
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    group
}

fn group_elements(group: TwirlGroup, n: usize) -> Result<Vec<CMatrix>> {
    let singles: Vec<CMatrix> = match group {
        TwirlGroup::Pauli => Pauli::ALL
            .iter()
            .map(|&p| PauliString::from_paulis(&[p]).to_matrix())
            .collect::<Result<_>>()?,
        TwirlGroup::SingleQubitCliffordTensor => single_qubit_cliffords(),
    };
    let mut out = singles.clone();
    for _ in 1..n {
        out = out
            .iter()
            .flat_map(|a| singles.iter().map(move |b| a.kronecker(b)))
            .collect();
    }
    Ok(out)
}

/// Pauli transfer matrix of `ρ ↦ (1/|V|) Σ_V V† N(VρV†) V`.
pub fn twirl_channel(channel: &KrausChannel, group: TwirlGroup) -> Result<DMatrix<f64>> {
    let n = channel.n();
    if n > TWIRL_QUBIT_LIMIT {
        return Err(Error::SizeGuard {
            what: "twirl",
            n,
            max: TWIRL_QUBIT_LIMIT,
        });
    }
    let elements = group_elements(group, n)?;
    let d = 4usize.pow(n as u32);
    let mut acc = DMatrix::<f64>::zeros(d, d);
    for v in &elements {
        acc += channel_superoperator(&channel.conjugated(v))?;
    }
    Ok(acc / elements.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn pauli_on_basis_states() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_pauli(&"X".parse().unwrap()).unwrap();
        assert_eq!(s.amplitudes()[1], ONE);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut plus = StateVector::from_amplitudes(1, vec![c(h), c(h)]).unwrap();
        plus.apply_pauli(&"Z".parse().unwrap()).unwrap();
        assert_eq!(plus.amplitudes(), &[c(h), c(-h)]);
    }

    #[test]
    fn pauli_application_matches_matrix() {
        let p: PauliString = "-iYXZ".parse().unwrap();
        let m = p.to_matrix().unwrap();
        let amps: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let mut s = StateVector::from_amplitudes(3, amps.clone()).unwrap();
        s.apply_pauli(&p).unwrap();
        let v = nalgebra::DVector::from_vec(amps);
        let expect = &m * v;
        for i in 0..8 {
            assert!((s.amplitudes()[i] - expect[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn collective_phase() {
        let mut s = StateVector::basis(1, 1).unwrap();
        s.apply_collective_phase(0.3);
        assert!((s.amplitudes()[1] - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);

        let mut t = StateVector::from_terms(&[("11110000", c(0.6)), ("00001111", c(0.8))]).unwrap();
        let before = t.clone();
        t.apply_collective_phase(0.0);
        assert_eq!(t, before);
        t.apply_collective_phase(1.234);
        assert!(t.max_abs_diff(&before).unwrap() < 1e-15);
    }

    #[test]
    fn collective_phase_commutes_with_z() {
        let amps: Vec<Complex64> = (0..16).map(|i| Complex64::new(1.0 + i as f64, 0.5)).collect();
        let z: PauliString = "IZIZ".parse().unwrap();
        let mut a = StateVector::from_amplitudes(4, amps.clone()).unwrap();
        a.apply_collective_phase(0.7);
        a.apply_pauli(&z).unwrap();
        let mut b = StateVector::from_amplitudes(4, amps).unwrap();
        b.apply_pauli(&z).unwrap();
        b.apply_collective_phase(0.7);
        assert_eq!(a, b);
    }

    #[test]
    fn cnot_and_matrix_application_agree() {
        let amps: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let mut a = StateVector::from_amplitudes(3, amps.clone()).unwrap();
        a.apply_cnot(2, 0).unwrap();
        let cnot = CMatrix::from_row_slice(
            4,
            4,
            &[ONE, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ONE, ZERO],
        );
        let mut b = StateVector::from_amplitudes(3, amps).unwrap();
        b.apply_matrix(&cnot, &[2, 0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kraus_trajectory_deterministic_cases() {
        let ad = KrausChannel::amplitude_damping(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let mut s = StateVector::zero(1).unwrap();
            assert_eq!(s.apply_kraus_trajectory(&ad, &[0], &mut rng).unwrap(), 0);
            assert_eq!(s, StateVector::zero(1).unwrap());
        }
        let full = KrausChannel::amplitude_damping(1.0).unwrap();
        for _ in 0..100 {
            let mut s = StateVector::basis(1, 1).unwrap();
            assert_eq!(s.apply_kraus_trajectory(&full, &[0], &mut rng).unwrap(), 1);
            assert_eq!(s, StateVector::zero(1).unwrap());
        }
    }

    #[test]
    fn kraus_trajectory_binomial_frequency() {
        let ad = KrausChannel::amplitude_damping(0.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 100_000;
        let mut jumps = 0;
        for _ in 0..trials {
            let mut s = StateVector::basis(1, 1).unwrap();
            jumps += s.apply_kraus_trajectory(&ad, &[0], &mut rng).unwrap();
        }
        let freq = jumps as f64 / trials as f64;
        let sigma = (0.25f64 * 0.75 / trials as f64).sqrt();
        assert!((freq - 0.25).abs() < 3.0 * sigma, "freq {freq}");
    }

    #[test]
    fn trajectory_expectations_match_superoperator() {
        // Pauli expectations after one channel use, from trajectories vs the PTM.
        let cases: Vec<(KrausChannel, usize)> = vec![
            (KrausChannel::amplitude_damping(0.3).unwrap(), 1),
            (KrausChannel::depolarizing(0.2).unwrap(), 1),
            (KrausChannel::amplitude_damping(0.4).unwrap().tensor_power(2).unwrap(), 2),
            (KrausChannel::depolarizing(0.15).unwrap().tensor_power(2).unwrap(), 2),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (ch, n) in cases {
            let ptm = channel_superoperator(&ch).unwrap();
            let dim = 1 << n;
            let amps: Vec<Complex64> = (0..dim)
                .map(|i| Complex64::new(0.3 + i as f64 * 0.2, 0.1 * i as f64))
                .collect();
            let psi = StateVector::from_amplitudes(n, amps).unwrap().normalized();
            let basis = pauli_basis(n);
            let input: Vec<f64> = basis.iter().map(|p| psi.expectation(p).unwrap().re).collect();
            let targets: Vec<usize> = (0..n).collect();
            let trials = 100_000;
            let mut sums = vec![0.0; basis.len()];
            let mut sq = vec![0.0; basis.len()];
            for _ in 0..trials {
                let mut s = psi.clone();
                s.apply_kraus_trajectory(&ch, &targets, &mut rng).unwrap();
                for (i, p) in basis.iter().enumerate() {
                    let e = s.expectation(p).unwrap().re;
                    sums[i] += e;
                    sq[i] += e * e;
                }
            }
            for i in 0..basis.len() {
                let predicted: f64 = (0..basis.len()).map(|j| ptm[(i, j)] * input[j]).sum();
                let mean = sums[i] / trials as f64;
                let var = (sq[i] / trials as f64 - mean * mean).max(0.0);
                let sigma = (var / trials as f64).sqrt().max(1e-12);
                assert!(
                    (mean - predicted).abs() <= 5.0 * sigma + 1e-12,
                    "n={n} P={} mean {mean} predicted {predicted}",
                    basis[i]
                );
            }
        }
    }

    #[test]
    fn measurement_statistics() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z: PauliString = "Z".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut plus_count = 0;
        for _ in 0..20_000 {
            let mut s = StateVector::from_amplitudes(1, vec![c(h), c(h)]).unwrap();
            if s.measure_pauli(&z, &mut rng).unwrap() == 1 {
                plus_count += 1;
                assert_eq!(s, StateVector::zero(1).unwrap());
            }
        }
        let f = plus_count as f64 / 20_000.0;
        assert!((f - 0.5).abs() < 4.0 * (0.25f64 / 20_000.0).sqrt());
        let mut s = StateVector::zero(1).unwrap();
        assert!(matches!(
            s.measure_pauli(&"+iZ".parse().unwrap(), &mut rng),
            Err(Error::NonHermitian(_))
        ));
    }

    #[test]
    fn superoperator_examples() {
        let id = channel_superoperator(&KrausChannel::identity(2)).unwrap();
        assert!(max_diff(&id, &DMatrix::identity(16, 16)) < 1e-15);

        let p = 0.12;
        let dep = channel_superoperator(&KrausChannel::depolarizing(p).unwrap()).unwrap();
        let f = 1.0 - 4.0 * p / 3.0;
        assert!(max_diff(&dep, &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, f, f, f]))) < 1e-15);

        // dephasing as Kraus {|cos θ| I, |sin θ| Z}, against a direct density-matrix oracle
        let theta: f64 = 0.4;
        let deph = KrausChannel::dephasing(theta.sin().powi(2)).unwrap();
        let ptm = channel_superoperator(&deph).unwrap();
        for (j, pj) in pauli_basis(1).iter().enumerate() {
            let m = pj.to_matrix().unwrap();
            let z = "Z".parse::<PauliString>().unwrap().to_matrix().unwrap();
            let img = &m * c(theta.cos().powi(2)) + &z * &m * &z * c(theta.sin().powi(2));
            for (i, pi) in pauli_basis(1).iter().enumerate() {
                let direct = (pi.to_matrix().unwrap() * &img).trace().re / 2.0;
                assert!((ptm[(i, j)] - direct).abs() < 1e-15);
            }
        }
        assert!((ptm[(1, 1)] - (2.0 * theta).cos()).abs() < 1e-15);
    }

    #[test]
    fn superoperators_are_trace_preserving() {
        let chans = vec![
            KrausChannel::amplitude_damping(0.37).unwrap(),
            KrausChannel::mixed_coherent_depolarizing(2, 0.3, 0.1, 0.25).unwrap(),
            KrausChannel::amplitude_damping(0.2).unwrap().tensor_power(3).unwrap(),
        ];
        for ch in chans {
            let r = channel_superoperator(&ch).unwrap();
            assert!((r[(0, 0)] - 1.0).abs() < 1e-12);
            for j in 1..r.ncols() {
                assert!(r[(0, j)].abs() < 1e-12);
            }
        }
        assert!(channel_superoperator(&KrausChannel::identity(4)).is_err());
    }

    #[test]
    fn clifford_group_has_24_elements() {
        let g = single_qubit_cliffords();
        assert_eq!(g.len(), 24);
        for m in &g {
            let u = m.adjoint() * m;
            assert!((u - gates::identity(1)).iter().all(|c| c.norm() < 1e-8));
        }
    }

    #[test]
    fn twirls_of_pauli_channels_are_fixed_points() {
        let dep = KrausChannel::depolarizing(0.2).unwrap();
        let r = channel_superoperator(&dep).unwrap();
        for group in [TwirlGroup::Pauli, TwirlGroup::SingleQubitCliffordTensor] {
            assert!(max_diff(&twirl_channel(&dep, group).unwrap(), &r) < 1e-12);
        }
        let pc = KrausChannel::pauli_channel(1, &[0.7, 0.1, 0.05, 0.15]).unwrap();
        let r = channel_superoperator(&pc).unwrap();
        assert!(max_diff(&twirl_channel(&pc, TwirlGroup::Pauli).unwrap(), &r) < 1e-12);
        let id = KrausChannel::identity(1);
        assert!(max_diff(&twirl_channel(&id, TwirlGroup::SingleQubitCliffordTensor).unwrap(), &DMatrix::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn pauli_twirl_of_coherent_phase_is_dephasing() {
        let theta: f64 = 0.37;
        let u = KrausChannel::coherent_phase(1, theta).unwrap();
        let twirled = twirl_channel(&u, TwirlGroup::Pauli).unwrap();
        let deph = channel_superoperator(&KrausChannel::dephasing(theta.sin().powi(2)).unwrap()).unwrap();
        assert!(max_diff(&twirled, &deph) < 1e-12);
    }

    #[test]
    fn contraction_helpers() {
        let a = StateVector::from_terms(&[("01", c(0.6)), ("11", c(0.8))]).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let lead = a.contract_trailing(&one).unwrap();
        assert_eq!(lead.amplitudes(), &[c(0.6), c(0.8)]);
        let zero = StateVector::zero(1).unwrap();
        let rest = a.contract_leading(&zero).unwrap();
        assert_eq!(rest.amplitudes(), &[c(0.0), c(0.6)]);
    }

    #[test]
    fn permutation_moves_qubits() {
        let s = StateVector::from_terms(&[("100", ONE)]).unwrap();
        let t = s.permute_qubits(&[2, 0, 1]).unwrap();
        assert_eq!(t.support(0.0), vec![0b001]);
    }
}
