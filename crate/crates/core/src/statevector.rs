//! Exact complex statevector simulation of the QAOA gate set.
//!
//! Basis index `i` encodes qubit 0 as its most significant bit, so the
//! binary rendering of `i` reads the same way as the textual bit strings
//! used everywhere else. Memory is `16 · 2^n` bytes; allocation is refused
//! above a configurable qubit cap.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{BitString, IsingHamiltonian, IsingTerm};

/// Default refusal threshold: 26 qubits = 1 GiB of amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 26;

/// One elementary gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    /// Hadamard on one qubit.
    H { qubit: usize },
    /// `e^{-i(θ/2)σ^x}` on one qubit.
    Rx { qubit: usize, theta: f64 },
    /// `diag(e^{-iθ/2}, e^{+iθ/2})` on one qubit.
    Rz { qubit: usize, theta: f64 },
    /// Controlled NOT.
    Cnot { control: usize, target: usize },
}

impl GateOp {
    /// Largest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        match *self {
            GateOp::H { qubit } | GateOp::Rx { qubit, .. } | GateOp::Rz { qubit, .. } => qubit,
            GateOp::Cnot { control, target } => control.max(target),
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let ok = match *self {
            GateOp::Cnot { control, target } => {
                control != target && control < n_qubits && target < n_qubits
            }
            _ => self.max_qubit() < n_qubits,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGate {
                gate: self.to_string(),
                n_qubits,
            })
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::H { qubit } => write!(f, "h {qubit}"),
            GateOp::Rx { qubit, theta } => write!(f, "rx {qubit} {theta}"),
            GateOp::Rz { qubit, theta } => write!(f, "rz {qubit} {theta}"),
            GateOp::Cnot { control, target } => write!(f, "cx {control} {target}"),
        }
    }
}

/// Histogram of measured bit strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleHistogram {
    /// Count per bit string, keyed by the textual form (qubit 0 first).
    pub counts: BTreeMap<String, u64>,
    /// Total number of draws.
    pub shots: u64,
}

impl SampleHistogram {
    /// Fraction of shots on a given string (0 if absent).
    pub fn probability(&self, bits: &str) -> f64 {
        *self.counts.get(bits).unwrap_or(&0) as f64 / self.shots as f64
    }
}

/// `2^n` complex amplitudes with unit norm.
#[derive(Debug, Clone)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition `|+⟩^{⊗n}` (every amplitude `2^{-n/2}`).
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        Self::uniform_with_cap(n_qubits, DEFAULT_MAX_QUBITS)
    }

    /// Uniform superposition with an explicit qubit cap.
    pub fn uniform_with_cap(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > max_qubits {
            return Err(Error::QubitCapExceeded {
                n: n_qubits,
                max: max_qubits,
                bytes: (16u128) << n_qubits.min(127),
            });
        }
        let dim = 1usize << n_qubits;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![amp; dim],
        })
    }

    /// The computational basis state for a bit string.
    pub fn basis(bits: &BitString) -> Result<Self> {
        let mut sv = Self::uniform_with_cap(bits.len(), DEFAULT_MAX_QUBITS)?;
        sv.amps.fill(Complex64::new(0.0, 0.0));
        sv.amps[bits.to_index() as usize] = Complex64::new(1.0, 0.0);
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `Σ |a_i|²`; stays within 1e-12 of 1 across gate applications.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit position (from the least significant end) backing qubit `q`.
    #[inline]
    fn stride(&self, qubit: usize) -> usize {
        1usize << (self.n_qubits - 1 - qubit)
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            GateOp::H { qubit } => {
                let s = FRAC_1_SQRT_2;
                self.apply_single(qubit, |a0, a1| (s * (a0 + a1), s * (a0 - a1)));
            }
            GateOp::Rx { qubit, theta } => {
                let c = (theta / 2.0).cos();
                let ms = Complex64::new(0.0, -(theta / 2.0).sin());
                self.apply_single(qubit, |a0, a1| (c * a0 + ms * a1, ms * a0 + c * a1));
            }
            GateOp::Rz { qubit, theta } => {
                let p0 = Complex64::from_polar(1.0, -theta / 2.0);
                let p1 = Complex64::from_polar(1.0, theta / 2.0);
                self.apply_single(qubit, |a0, a1| (p0 * a0, p1 * a1));
            }
            GateOp::Cnot { control, target } => {
                let cm = self.stride(control);
                let tm = self.stride(target);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn apply_single(
        &mut self,
        qubit: usize,
        f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64),
    ) {
        let d = self.stride(qubit);
        let mut base = 0;
        while base < self.amps.len() {
            for i in base..base + d {
                let (a0, a1) = (self.amps[i], self.amps[i + d]);
                let (b0, b1) = f(a0, a1);
                self.amps[i] = b0;
                self.amps[i + d] = b1;
            }
            base += 2 * d;
        }
    }

    /// Apply `e^{-iγ c σ^z⋯σ^z}` for one Ising term in one pass.
    ///
    /// Each amplitude picks up `e^{-iγ·c·parity}` where parity is the spin
    /// product of the term's qubits in that basis state; a constant term is
    /// a global phase.
    pub fn apply_diagonal_phase(&mut self, term: &IsingTerm, gamma: f64) -> Result<()> {
        if let Some(&q) = term
            .support
            .iter()
            .find(|&&q| q as usize >= self.n_qubits)
        {
            return Err(Error::IndexOutOfRange {
                index: q,
                n_qubits: self.n_qubits as u32,
                term: term.to_string(),
            });
        }
        let angle = gamma * term.coefficient;
        let plus = Complex64::from_polar(1.0, -angle);
        if term.is_constant() {
            for a in &mut self.amps {
                *a *= plus;
            }
            return Ok(());
        }
        let minus = Complex64::from_polar(1.0, angle);
        let mask = term.mask(self.n_qubits) as usize;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if (i & mask).count_ones() & 1 == 0 {
                plus
            } else {
                minus
            };
        }
        Ok(())
    }

    /// Exact `⟨ψ|H|ψ⟩` for a diagonal Hamiltonian; no sampling noise.
    pub fn expectation_diagonal(&self, hamiltonian: &IsingHamiltonian) -> Result<f64> {
        if hamiltonian.n_qubits() != self.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits,
                got: hamiltonian.n_qubits(),
            });
        }
        let masks = hamiltonian.masks();
        let mut total = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut e = 0.0;
            for &(mask, c) in &masks {
                e += if (i as u64 & mask).count_ones() & 1 == 0 {
                    c
                } else {
                    -c
                };
            }
            total += p * e;
        }
        Ok(total)
    }

    /// Draw `shots` basis states from `|a_i|²` with a seeded generator.
    ///
    /// Inverse-CDF over the probability prefix: the sorted uniforms are
    /// consumed in one cumulative pass, so no `2^n` prefix array is built.
    /// Identical (state, shots, seed) gives an identical histogram.
    pub fn sample(&self, shots: u64, seed: u64) -> SampleHistogram {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with_draws(shots, &mut rng)
    }

    /// Same as [`StateVector::sample`] with a caller-owned generator.
    pub fn sample_with_rng(&self, shots: u64, rng: &mut ChaCha8Rng) -> SampleHistogram {
        self.sample_with_draws(shots, rng)
    }

    fn sample_with_draws(&self, shots: u64, rng: &mut ChaCha8Rng) -> SampleHistogram {
        let mut draws: Vec<f64> = (0..shots).map(|_| rng.gen::<f64>()).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).expect("uniform draws are finite"));
        let norm = self.norm_sqr();
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut cumulative = 0.0;
        let mut next = 0usize;
        for (i, a) in self.amps.iter().enumerate() {
            cumulative += a.norm_sqr() / norm;
            let mut here = 0u64;
            while next < draws.len() && draws[next] < cumulative {
                here += 1;
                next += 1;
            }
            if here > 0 {
                let key = BitString::from_index(i as u64, self.n_qubits).to_string();
                *counts.entry(key).or_insert(0) += here;
            }
            if next == draws.len() {
                break;
            }
        }
        // rounding can leave draws beyond the final cumulative sum
        if next < draws.len() {
            let key = BitString::from_index((self.amps.len() - 1) as u64, self.n_qubits)
                .to_string();
            *counts.entry(key).or_insert(0) += (draws.len() - next) as u64;
        }
        SampleHistogram { counts, shots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::IsingTerm;

    fn max_amp_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn uniform_amplitudes() {
        let sv = StateVector::uniform(1).unwrap();
        for a in sv.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        let sv3 = StateVector::uniform(3).unwrap();
        assert_eq!(sv3.amplitudes().len(), 8);
        let expect = (2.0f64).powf(-1.5);
        for a in sv3.amplitudes() {
            assert!((a.re - expect).abs() < 1e-15 && a.im == 0.0);
        }
        assert!((StateVector::uniform(20).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_rejects_over_cap() {
        let err = StateVector::uniform_with_cap(12, 10).unwrap_err();
        match err {
            Error::QubitCapExceeded { n, max, bytes } => {
                assert_eq!((n, max), (12, 10));
                assert_eq!(bytes, 16 << 12);
            }
            other => panic!("unexpected error {other}"),
        }
        assert!(StateVector::uniform(0).is_err());
    }

    #[test]
    fn rz_matches_paper_phase() {
        // RZ(0, 2γ) on |0⟩ → e^{-iγ}|0⟩
        let gamma = 0.37;
        let mut sv = StateVector::basis(&"0".parse().unwrap()).unwrap();
        sv.apply_gate(GateOp::Rz {
            qubit: 0,
            theta: 2.0 * gamma,
        })
        .unwrap();
        let expect = Complex64::from_polar(1.0, -gamma);
        assert!((sv.amplitudes()[0] - expect).norm() < 1e-15);
        assert_eq!(sv.amplitudes()[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let mut sv = StateVector::basis(&"0".parse().unwrap()).unwrap();
        sv.apply_gate(GateOp::Rx {
            qubit: 0,
            theta: std::f64::consts::PI,
        })
        .unwrap();
        assert!(sv.amplitudes()[0].norm() < 1e-15);
        assert!((sv.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn cnot_flips_target() {
        let mut sv = StateVector::basis(&"10".parse().unwrap()).unwrap();
        sv.apply_gate(GateOp::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        let idx = "11".parse::<BitString>().unwrap().to_index() as usize;
        assert!((sv.amplitudes()[idx] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gate_validation() {
        let mut sv = StateVector::uniform(2).unwrap();
        assert!(sv.apply_gate(GateOp::H { qubit: 2 }).is_err());
        assert!(sv
            .apply_gate(GateOp::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
    }

    #[test]
    fn diagonal_phase_even_parity() {
        // term {c,[j,k]} on |11⟩: parity (+1) → phase e^{-icγ}
        let (c, gamma) = (1.3, 0.21);
        let mut sv = StateVector::basis(&"11".parse().unwrap()).unwrap();
        sv.apply_diagonal_phase(&IsingTerm::new(c, vec![0, 1]).unwrap(), gamma)
            .unwrap();
        let idx = 0b11;
        assert!((sv.amplitudes()[idx] - Complex64::from_polar(1.0, -c * gamma)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_phase_matches_rz() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..=5);
            let q = rng.gen_range(0..n);
            let (c, gamma) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let mut a = StateVector::uniform(n).unwrap();
            let mut b = a.clone();
            a.apply_diagonal_phase(&IsingTerm::new(c, vec![q as u32]).unwrap(), gamma)
                .unwrap();
            b.apply_gate(GateOp::Rz {
                qubit: q,
                theta: 2.0 * c * gamma,
            })
            .unwrap();
            assert!(max_amp_diff(&a, &b) < 1e-14);
        }
    }

    #[test]
    fn diagonal_terms_commute() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 6;
        let terms: Vec<IsingTerm> = (0..8)
            .map(|_| {
                let k = rng.gen_range(1..=4usize);
                let mut qs: Vec<u32> = (0..n as u32).collect();
                for i in (1..qs.len()).rev() {
                    qs.swap(i, rng.gen_range(0..=i));
                }
                qs.truncate(k);
                IsingTerm::new(rng.gen_range(-1.0..1.0), qs).unwrap()
            })
            .collect();
        let gamma = 0.7;
        let mut forward = StateVector::uniform(n).unwrap();
        let mut backward = forward.clone();
        for t in &terms {
            forward.apply_diagonal_phase(t, gamma).unwrap();
        }
        for t in terms.iter().rev() {
            backward.apply_diagonal_phase(t, gamma).unwrap();
        }
        assert!(max_amp_diff(&forward, &backward) < 1e-12);
    }

    #[test]
    fn expectation_uniform_two_qubit_zz() {
        let sv = StateVector::uniform(2).unwrap();
        let h = IsingHamiltonian::new(vec![IsingTerm::new(1.0, vec![0, 1]).unwrap()], 2).unwrap();
        assert!(sv.expectation_diagonal(&h).unwrap().abs() < 1e-14);
    }

    #[test]
    fn expectation_basis_state() {
        let sv = StateVector::basis(&"11".parse().unwrap()).unwrap();
        let h = IsingHamiltonian::new(
            vec![
                IsingTerm::constant(2.0),
                IsingTerm::new(2.0, vec![0, 1]).unwrap(),
            ],
            2,
        )
        .unwrap();
        assert!((sv.expectation_diagonal(&h).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn expectation_ignores_global_phase() {
        let h = IsingHamiltonian::new(
            vec![
                IsingTerm::new(0.8, vec![0]).unwrap(),
                IsingTerm::new(-1.1, vec![0, 2]).unwrap(),
            ],
            3,
        )
        .unwrap();
        let mut sv = StateVector::uniform(3).unwrap();
        sv.apply_gate(GateOp::Rx {
            qubit: 1,
            theta: 0.4,
        })
        .unwrap();
        let e1 = sv.expectation_diagonal(&h).unwrap();
        let mut phased = sv.clone();
        phased
            .apply_diagonal_phase(&IsingTerm::constant(3.3), 1.0)
            .unwrap();
        let e2 = phased.expectation_diagonal(&h).unwrap();
        assert!((e1 - e2).abs() < 1e-13);
        let s1 = sv.sample(500, 42);
        let s2 = phased.sample(500, 42);
        assert_eq!(s1, s2);
    }

    #[test]
    fn sample_deterministic_state() {
        let sv = StateVector::basis(&"101".parse().unwrap()).unwrap();
        let hist = sv.sample(77, 1);
        assert_eq!(hist.counts.len(), 1);
        assert_eq!(hist.counts["101"], 77);
        assert_eq!(hist.shots, 77);
    }

    #[test]
    fn sample_uniform_within_five_sigma() {
        let sv = StateVector::uniform(1).unwrap();
        let shots = 100_000u64;
        let hist = sv.sample(shots, 12345);
        let sigma = (shots as f64 * 0.25).sqrt();
        for key in ["0", "1"] {
            let count = hist.counts[key] as f64;
            assert!(
                (count - 50_000.0).abs() < 5.0 * sigma,
                "count {count} outside 5 sigma"
            );
        }
        assert_eq!(hist.counts.values().sum::<u64>(), shots);
    }

    #[test]
    fn sample_seed_reproducible() {
        let mut sv = StateVector::uniform(4).unwrap();
        sv.apply_gate(GateOp::Rx {
            qubit: 2,
            theta: 1.1,
        })
        .unwrap();
        assert_eq!(sv.sample(2048, 9), sv.sample(2048, 9));
    }

    #[test]
    fn norm_preserved_over_long_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 5;
        let mut sv = StateVector::uniform(n).unwrap();
        for _ in 0..10_000 {
            let g = match rng.gen_range(0..4) {
                0 => GateOp::H {
                    qubit: rng.gen_range(0..n),
                },
                1 => GateOp::Rx {
                    qubit: rng.gen_range(0..n),
                    theta: rng.gen_range(-3.0..3.0),
                },
                2 => GateOp::Rz {
                    qubit: rng.gen_range(0..n),
                    theta: rng.gen_range(-3.0..3.0),
                },
                _ => {
                    let c = rng.gen_range(0..n);
                    let mut t = rng.gen_range(0..n);
                    while t == c {
                        t = rng.gen_range(0..n);
                    }
                    GateOp::Cnot {
                        control: c,
                        target: t,
                    }
                }
            };
            sv.apply_gate(g).unwrap();
        }
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-9);
    }
}
