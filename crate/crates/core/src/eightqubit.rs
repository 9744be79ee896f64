//! The eight-qubit constant-excitation amplitude-damping code
//!
//! ```text
//! |0_L⟩ = (|11110000⟩ + |00001111⟩)/√2
//! |1_L⟩ = (|00111100⟩ + |11000011⟩)/√2
//! ```
//!
//! in block layout (qubits 0..3 form the first block, 4..7 the second). It is
//! the LNCY4 code concatenated with the dual-rail code, with the interleave
//! undone. Syndrome observables are the pair parities `Z_{2a} Z_{2a+1}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::concat::{concatenate, InnerKind, InterleavePermutation};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::sim::{gates, CMatrix, KrausChannel, StateVector};
use crate::stabilizer::StabilizerCode;

pub const N_QUBITS: usize = 8;
pub const N_PAIRS: usize = 4;
/// Kraus operators `K_0 … K_8`.
pub const N_KRAUS: usize = 9;

/// Logical fidelity at or above this counts as a successful recovery.
pub const SUCCESS_FIDELITY: f64 = 1.0 - 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Logical single-qubit state `(α, β)`.
pub type Logical = [Complex64; 2];

#[derive(Clone, Debug)]
pub struct EightQubitCode {
    pub zero: StateVector,
    pub one: StateVector,
    /// `Z_0Z_1, Z_2Z_3, Z_4Z_5, Z_6Z_7`.
    pub syndrome_observables: [PauliString; N_PAIRS],
    /// Signed stabilizer generators obtained from the rotated construction.
    pub stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    /// For pair `a`: the normalised six-qubit residual codewords left after
    /// the pair decays, i.e. the recovery isometry of that outcome.
    residuals: Vec<[StateVector; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryOutcome {
    Success,
    /// Recovery ran but returned the wrong logical state.
    LogicalError,
    /// `wt(b) ≥ 2`, or the post-measurement state left the recoverable space.
    Uncorrectable,
}

impl EightQubitCode {
    pub fn new() -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero = StateVector::from_terms(&[("11110000", c(h)), ("00001111", c(h))])?;
        let one = StateVector::from_terms(&[("00111100", c(h)), ("11000011", c(h))])?;
        let syndrome_observables =
            [0, 1, 2, 3].map(|a| PauliString::z_on(N_QUBITS, &[2 * a, 2 * a + 1]));

        let cc = concatenate(&StabilizerCode::builtin("LNCY4")?, InnerKind::Klm)?;
        let pi = InterleavePermutation::new(1, 4);
        let unweave = |p: &PauliString| pi.apply_inverse(p);
        let stabilizers = cc.code.generators.iter().map(unweave).collect::<Result<Vec<_>>>()?;
        let logical_x = unweave(&cc.code.logical_x[0])?;
        let logical_z = unweave(&cc.code.logical_z[0])?;

        let mut code = Self {
            zero,
            one,
            syndrome_observables,
            stabilizers,
            logical_x,
            logical_z,
            residuals: Vec::new(),
        };
        for a in 0..N_PAIRS {
            let mut pair = Vec::with_capacity(2);
            for cw in [&code.zero, &code.one] {
                let damped = apply_kraus_index(cw, 2 * a + 1, 0.5)?;
                let rest = split_pair(&damped, a, 0b01)?;
                pair.push(rest.normalized());
            }
            let [r0, r1]: [StateVector; 2] = pair.try_into().expect("two residuals");
            code.residuals.push([r0, r1]);
        }
        Ok(code)
    }

    pub fn basis(&self) -> [&StateVector; 2] {
        [&self.zero, &self.one]
    }

    /// `α|0_L⟩ + β|1_L⟩`; the input must have unit norm.
    pub fn encode(&self, logical: Logical) -> Result<StateVector> {
        let norm = logical[0].norm_sqr() + logical[1].norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "logical state has squared norm {norm}, expected 1"
            )));
        }
        let amps = self
            .zero
            .amplitudes()
            .iter()
            .zip(self.one.amplitudes())
            .map(|(z, o)| logical[0] * z + logical[1] * o)
            .collect();
        StateVector::from_amplitudes(N_QUBITS, amps)
    }

    /// `(⟨0_L|ψ⟩, ⟨1_L|ψ⟩)`.
    pub fn logical_components(&self, state: &StateVector) -> Result<Logical> {
        Ok([self.zero.inner(state)?, self.one.inner(state)?])
    }

    /// Gate-level encoder: the input qubit sits on qubit 0, qubits 1..7 start
    /// in `|0⟩`. H(2); CNOT(0,1); CNOT(2,3); CNOT(2,0); CNOT(2,1) prepares the
    /// LNCY4 codeword on the first block, CNOT(j, j+4) copies it, and X on the
    /// first block complements it.
    pub fn encoding_circuit(&self, input: Logical) -> Result<StateVector> {
        let q0 = StateVector::from_amplitudes(1, input.to_vec())?;
        let mut s = q0.tensor(&StateVector::zero(7)?)?;
        s.apply_hadamard(2)?;
        s.apply_cnot(0, 1)?;
        s.apply_cnot(2, 3)?;
        s.apply_cnot(2, 0)?;
        s.apply_cnot(2, 1)?;
        for j in 0..4 {
            s.apply_cnot(j, j + 4)?;
        }
        s.apply_pauli(&PauliString::x_on(N_QUBITS, &[0, 1, 2, 3]))?;
        Ok(s)
    }

    /// Measures the four pair parities in order; `b_a = (1 − m_a)/2`.
    pub fn extract_syndrome<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<([u8; 4], StateVector)> {
        let mut s = state.clone();
        let mut b = [0u8; 4];
        for (a, obs) in self.syndrome_observables.iter().enumerate() {
            let m = s.measure_pauli(obs, rng)?;
            b[a] = u8::from(m == -1);
        }
        Ok((b, s))
    }

    /// Reads the logical state out of a syndrome-projected state. For a single
    /// flagged pair the pair is discarded and the six remaining qubits are
    /// matched against that outcome's residual codewords.
    ///
    /// The returned vector has norm below one when the state carries weight
    /// outside the recoverable space.
    pub fn recover(&self, state: &StateVector, b: [u8; 4]) -> Result<Logical> {
        if state.n() != N_QUBITS {
            return Err(Error::DimensionMismatch {
                left: state.n(),
                right: N_QUBITS,
            });
        }
        let flagged: Vec<usize> = (0..N_PAIRS).filter(|&a| b[a] == 1).collect();
        match flagged.as_slice() {
            [] => self.logical_components(state),
            &[a] => {
                let [r0, r1] = &self.residuals[a];
                let mut best: Option<(f64, Logical, f64)> = None;
                for pv in [0b01, 0b10] {
                    let rest = split_pair(state, a, pv)?;
                    let w = [r0.inner(&rest)?, r1.inner(&rest)?];
                    let wn = w[0].norm_sqr() + w[1].norm_sqr();
                    if best.as_ref().is_none_or(|(bn, _, _)| wn > *bn) {
                        best = Some((wn, w, rest.norm()));
                    }
                }
                let (_, w, rest_norm) = best.expect("two candidates");
                if rest_norm == 0.0 {
                    return Ok([ZERO, ZERO]);
                }
                Ok([w[0] / rest_norm, w[1] / rest_norm])
            }
            _ => Err(Error::Uncorrectable(b.iter().map(|x| char::from(b'0' + x)).collect())),
        }
    }

    /// Classifies a recovery against the logical state that was stored.
    pub fn classify(&self, input: Logical, state: &StateVector, b: [u8; 4]) -> Result<MemoryOutcome> {
        let w = match self.recover(state, b) {
            Ok(w) => w,
            Err(Error::Uncorrectable(_)) => return Ok(MemoryOutcome::Uncorrectable),
            Err(e) => return Err(e),
        };
        let norm = w[0].norm_sqr() + w[1].norm_sqr();
        if norm < SUCCESS_FIDELITY {
            return Ok(MemoryOutcome::Uncorrectable);
        }
        let f = (input[0].conj() * w[0] + input[1].conj() * w[1]).norm_sqr();
        Ok(if f >= SUCCESS_FIDELITY {
            MemoryOutcome::Success
        } else {
            MemoryOutcome::LogicalError
        })
    }

    pub fn apply_logical_x(&self, state: &mut StateVector) -> Result<()> {
        state.apply_pauli(&self.logical_x)
    }

    pub fn apply_logical_z(&self, state: &mut StateVector) -> Result<()> {
        state.apply_pauli(&self.logical_z)
    }

    /// Logical `exp(−iθ Z̄)` with `Z̄ = Z_0 Z_2`, applied as the diagonal phase
    /// `exp(−iθ (−1)^{x_0 ⊕ x_2})` on block `block` of a multi-block state.
    pub fn apply_logical_rz(&self, state: &mut StateVector, theta: f64, block: usize) -> Result<()> {
        let n = state.n();
        if n < N_QUBITS * (block + 1) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: N_QUBITS * (block + 1),
            });
        }
        let (b0, b2) = (
            1usize << (n - 1 - N_QUBITS * block),
            1usize << (n - 3 - N_QUBITS * block),
        );
        let plus = Complex64::from_polar(1.0, -theta);
        let minus = Complex64::from_polar(1.0, theta);
        state.apply_diagonal(|i| if (i & b0 != 0) ^ (i & b2 != 0) { minus } else { plus });
        Ok(())
    }

    /// Eight pairwise CNOTs from block 0 to block 1 of a 16-qubit state.
    pub fn transversal_cnot(state: &mut StateVector) -> Result<()> {
        check_two_blocks(state)?;
        for q in 0..N_QUBITS {
            state.apply_cnot(q, q + N_QUBITS)?;
        }
        Ok(())
    }

    /// Logical CNOT: transversal CNOT followed by the rotation frame
    /// `X_4X_5X_6X_7` on the target block.
    pub fn apply_logical_cnot(&self, state: &mut StateVector) -> Result<()> {
        Self::transversal_cnot(state)?;
        let frame = PauliString::identity(N_QUBITS).tensor(&PauliString::x_on(N_QUBITS, &[4, 5, 6, 7]));
        state.apply_pauli(&frame)
    }

    /// Logical CZ of a 16-qubit state, `(−1)^{Z̄_A Z̄_B}` as a diagonal phase.
    pub fn apply_logical_cz(&self, state: &mut StateVector) -> Result<()> {
        check_two_blocks(state)?;
        let bit = |q: usize| 1usize << (2 * N_QUBITS - 1 - q);
        let (a0, a2, b0, b2) = (bit(0), bit(2), bit(8), bit(10));
        state.apply_diagonal(|i| {
            let za = (i & a0 != 0) ^ (i & a2 != 0);
            let zb = (i & b0 != 0) ^ (i & b2 != 0);
            if za && zb {
                -ONE
            } else {
                ONE
            }
        });
        Ok(())
    }

    /// Logical Hadamard by one-bit teleportation onto a fresh `|+_L⟩` block:
    /// logical CZ, measure `X̄` on the data block, fix with `X̄` on the ancilla
    /// when the outcome is `−1`. Returns the ancilla block and the outcome.
    pub fn teleported_hadamard<R: Rng + ?Sized>(&self, data: &StateVector, rng: &mut R) -> Result<(StateVector, i8)> {
        if data.n() != N_QUBITS {
            return Err(Error::DimensionMismatch {
                left: data.n(),
                right: N_QUBITS,
            });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = self.encode([c(h), c(h)])?;
        let mut joint = data.tensor(&plus)?;
        self.apply_logical_cz(&mut joint)?;
        let xa = self.logical_x.tensor(&PauliString::identity(N_QUBITS));
        let m = joint.measure_pauli(&xa, rng)?;
        let sign = if m == 1 { h } else { -h };
        let data_after = self.encode([c(h), c(sign)])?;
        let mut out = joint.contract_leading(&data_after)?;
        out.normalize();
        if m == -1 {
            self.apply_logical_x(&mut out)?;
        }
        Ok((out, m))
    }

    /// Knill–Laflamme Gram tensors for the error set `{K_0, …, K_8}`.
    pub fn kl_check(&self, gamma: f64) -> Result<KlReport> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma = {gamma} is not in [0, 1]")));
        }
        let basis = self.basis();
        let mut images = Vec::with_capacity(N_KRAUS);
        for a in 0..N_KRAUS {
            images.push([apply_kraus_index(basis[0], a, gamma)?, apply_kraus_index(basis[1], a, gamma)?]);
        }
        let mut gram = vec![vec![[[ZERO; 2]; 2]; N_KRAUS]; N_KRAUS];
        let mut plain = vec![vec![[[ZERO; 2]; 2]; N_KRAUS]; N_KRAUS];
        for a in 0..N_KRAUS {
            for b in 0..N_KRAUS {
                for i in 0..2 {
                    for j in 0..2 {
                        gram[a][b][i][j] = images[a][i].inner(&images[b][j])?;
                        let kakb = apply_kraus_index(&images[b][j], a, gamma)?;
                        plain[a][b][i][j] = basis[i].inner(&kakb)?;
                    }
                }
            }
        }
        let summary = |t: &Vec<Vec<[[Complex64; 2]; 2]>>| -> GramSummary {
            let g: Vec<f64> = (0..N_KRAUS).map(|a| t[a][a][0][0].re).collect();
            let mut off = 0.0f64;
            let mut diag = 0.0f64;
            for a in 0..N_KRAUS {
                for b in 0..N_KRAUS {
                    for i in 0..2 {
                        for j in 0..2 {
                            let v = t[a][b][i][j];
                            if a == b && i == j {
                                diag = diag.max((v - c(g[a])).norm());
                            } else {
                                off = off.max(v.norm());
                            }
                        }
                    }
                }
            }
            GramSummary {
                g,
                max_off_diagonal: off,
                max_diagonal_mismatch: diag,
                tensor: t
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|m| m.map(|r| r.map(|z| [z.re, z.im])))
                            .collect()
                    })
                    .collect(),
            }
        };
        let dagger = summary(&gram);
        let plain = summary(&plain);
        let passed = dagger.max_off_diagonal < KlReport::TOL && dagger.max_diagonal_mismatch < KlReport::TOL;
        Ok(KlReport {
            gamma,
            passed,
            dagger,
            plain_product: plain,
        })
    }

    /// One memory experiment: `steps` rounds of `A_δ^{⊗8}`, then syndrome
    /// extraction and recovery.
    pub fn memory_trajectory<R: Rng + ?Sized>(
        &self,
        input: Logical,
        delta: f64,
        steps: u64,
        sampler: Sampler,
        rng: &mut R,
    ) -> Result<MemoryOutcome> {
        check_delta(delta)?;
        let encoded = self.encode(input)?;
        let state = match sampler {
            Sampler::Sparse => sparse_damping(&encoded, delta, steps, rng)?,
            Sampler::Dense => {
                let ad = KrausChannel::amplitude_damping(delta)?;
                let mut s = encoded;
                for _ in 0..steps {
                    for q in 0..N_QUBITS {
                        s.apply_kraus_trajectory(&ad, &[q], rng)?;
                    }
                }
                s
            }
        };
        let (b, post) = self.extract_syndrome(&state, rng)?;
        self.classify(input, &post, b)
    }

    /// Runs `cfg.trajectories` independent memory experiments in parallel.
    /// Trajectory `t` draws from the ChaCha8 stream `t` of `cfg.seed`, so the
    /// result does not depend on scheduling or thread count.
    pub fn simulate_memory(&self, cfg: &MemoryConfig) -> Result<MemorySummary> {
        check_delta(cfg.delta)?;
        if cfg.trajectories == 0 {
            return Err(Error::InvalidParameter("trajectories must be at least 1".into()));
        }
        self.encode(cfg.logical)?;
        let counts = (0..cfg.trajectories)
            .into_par_iter()
            .map(|t| -> Result<[u64; 3]> {
                let mut rng = trajectory_rng(cfg.seed, t);
                let out = self.memory_trajectory(cfg.logical, cfg.delta, cfg.steps, cfg.sampler, &mut rng)?;
                Ok(match out {
                    MemoryOutcome::Success => [1, 0, 0],
                    MemoryOutcome::LogicalError => [0, 1, 0],
                    MemoryOutcome::Uncorrectable => [0, 0, 1],
                })
            })
            .try_reduce(|| [0; 3], |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]))?;
        let failures = counts[1] + counts[2];
        Ok(MemorySummary {
            delta: cfg.delta,
            steps: cfg.steps,
            trajectories: cfg.trajectories,
            seed: cfg.seed,
            failures,
            uncorrectable: counts[2],
            logical_errors: counts[1],
            failure_rate: failures as f64 / cfg.trajectories as f64,
            ci_95: wilson_interval(failures, cfg.trajectories, 1.959_963_984_540_054),
        })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta = {delta} is not in [0, 1]")));
    }
    Ok(())
}

fn check_two_blocks(state: &StateVector) -> Result<()> {
    if state.n() != 2 * N_QUBITS {
        return Err(Error::DimensionMismatch {
            left: state.n(),
            right: 2 * N_QUBITS,
        });
    }
    Ok(())
}

/// The RNG of trajectory `t` under master seed `seed`.
pub fn trajectory_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

/// `K_0 = A_0^{⊗8}`; `K_a` (`a ≥ 1`) is `A_1` on qubit `a − 1` and `A_0` elsewhere.
pub fn apply_kraus_index(state: &StateVector, a: usize, gamma: f64) -> Result<StateVector> {
    let ad = KrausChannel::amplitude_damping(gamma)?;
    let (a0, a1) = (&ad.operators()[0], &ad.operators()[1]);
    let mut s = state.clone();
    for q in 0..state.n() {
        let k: &CMatrix = if a >= 1 && q == a - 1 { a1 } else { a0 };
        s.apply_single(k, q)?;
    }
    Ok(s)
}

/// `(⟨p| on pair a ⊗ I) |ψ⟩` as a six-qubit state (remaining qubits in order).
fn split_pair(state: &StateVector, a: usize, pair_value: usize) -> Result<StateVector> {
    let n = state.n();
    let mut mapping: Vec<usize> = Vec::with_capacity(n);
    let mut next = 2;
    for q in 0..n {
        if q == 2 * a {
            mapping.push(0);
        } else if q == 2 * a + 1 {
            mapping.push(1);
        } else {
            mapping.push(next);
            next += 1;
        }
    }
    state.permute_qubits(&mapping)?.contract_leading(&StateVector::basis(2, pair_value)?)
}

/// Exact trajectory sampler for `A_δ^{⊗n}` on states with few basis terms.
///
/// Picking a basis string `x` with probability `|a_x|²` and letting each
/// excited qubit of `x` jump with probability `δ` draws the jump set `S` with
/// the Born probability `‖K_S ψ‖²`, because `y ↦ y∖S` is injective on strings
/// containing `S`. The post-state is `K_S ψ / ‖K_S ψ‖`.
fn sparse_damping<R: Rng + ?Sized>(state: &StateVector, delta: f64, steps: u64, rng: &mut R) -> Result<StateVector> {
    let n = state.n();
    let mut terms: Vec<(usize, Complex64)> = state
        .support(0.0)
        .into_iter()
        .map(|i| (i, state.amplitudes()[i]))
        .collect();
    let keep = (1.0 - delta).sqrt();
    let jump = delta.sqrt();
    for _ in 0..steps {
        if terms.is_empty() {
            break;
        }
        let total: f64 = terms.iter().map(|(_, a)| a.norm_sqr()).sum();
        let mut u = rng.random::<f64>() * total;
        let mut x = terms[terms.len() - 1].0;
        for (i, a) in &terms {
            u -= a.norm_sqr();
            if u < 0.0 {
                x = *i;
                break;
            }
        }
        let mut jumps = 0usize;
        let mut bits = x;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            bits ^= b;
            if rng.random::<f64>() < delta {
                jumps |= b;
            }
        }
        let mut next: Vec<(usize, Complex64)> = Vec::with_capacity(terms.len());
        for (y, a) in &terms {
            if y & jumps != jumps {
                continue;
            }
            let k = jumps.count_ones() as i32;
            let stay = (y.count_ones() as i32) - k;
            let amp = a * jump.powi(k) * keep.powi(stay);
            if amp.norm_sqr() > 0.0 {
                next.push((y ^ jumps, amp));
            }
        }
        let norm: f64 = next.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
        for (_, a) in &mut next {
            *a /= norm;
        }
        terms = next;
    }
    let mut amps = vec![ZERO; 1 << n];
    for (i, a) in terms {
        amps[i] += a;
    }
    StateVector::from_amplitudes(n, amps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Sparse exact sampler; fast for the few-term states of this code.
    Sparse,
    /// Per-qubit Kraus unravelling on the full statevector.
    Dense,
}

#[derive(Clone, Debug)]
pub struct MemoryConfig {
    pub logical: Logical,
    pub delta: f64,
    pub steps: u64,
    pub trajectories: u64,
    pub seed: u64,
    pub sampler: Sampler,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemorySummary {
    pub delta: f64,
    pub steps: u64,
    pub trajectories: u64,
    pub seed: u64,
    pub failures: u64,
    pub uncorrectable: u64,
    pub logical_errors: u64,
    pub failure_rate: f64,
    pub ci_95: [f64; 2],
}

impl MemorySummary {
    /// Binomial standard error of `failure_rate` evaluated at `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trajectories as f64).sqrt()
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> [f64; 2] {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

#[derive(Clone, Debug, Serialize)]
pub struct GramSummary {
    /// `g_a = ⟨0_L|M_aa|0_L⟩` for `a = 0..8`.
    pub g: Vec<f64>,
    pub max_off_diagonal: f64,
    /// Largest `|M_aa,ii − g_a|`.
    pub max_diagonal_mismatch: f64,
    /// `[a][b][i][j]` as `[re, im]`.
    pub tensor: Vec<Vec<[[[f64; 2]; 2]; 2]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub gamma: f64,
    pub passed: bool,
    /// `⟨i_L|K_a† K_b|j_L⟩`.
    pub dagger: GramSummary,
    /// `⟨i_L|K_a K_b|j_L⟩`, kept for comparison.
    pub plain_product: GramSummary,
}

impl KlReport {
    pub const TOL: f64 = 1e-12;
}

/// The gate matrix `exp(−iθZ)` acting on a logical 2-vector.
pub fn logical_rz_matrix(theta: f64) -> CMatrix {
    gates::z_rotation(theta)
}
