//! Ising cost functions as sums of weighted `σ^z` product terms.
//!
//! A Hamiltonian here is a multiset of terms `c · σ^z_{q1} ⋯ σ^z_{qk}` with
//! k ≤ 4, plus an optional constant (empty-support) term. Boolean bit
//! strings map to spins by `0 ↔ +1`, `1 ↔ -1`, and the leftmost character
//! of a textual bit string is qubit 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest interaction size representable (4-body).
pub const MAX_BODY: usize = 4;

/// Spin value of a bit: `0 → +1`, `1 → -1`.
#[inline]
pub fn bit_to_spin(bit: u8) -> i8 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// Bit value of a spin: `+1 → 0`, `-1 → 1`.
pub fn spin_to_bit(spin: i8) -> Result<u8> {
    match spin {
        1 => Ok(0),
        -1 => Ok(1),
        other => Err(Error::InvalidSpin(other)),
    }
}

/// An ordered string of bits; index 0 is qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitString(Vec<u8>);

impl BitString {
    /// Wrap a vector of 0/1 values.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "empty bit string".into(),
            });
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Parse {
                line: 0,
                message: format!("bit value {b} is not 0 or 1"),
            });
        }
        Ok(Self(bits))
    }

    /// The bits of basis-state index `index` over `n` qubits, qubit 0 first.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|q| ((index >> (n - 1 - q)) & 1) as u8).collect())
    }

    /// Basis-state index with qubit 0 as the most significant bit.
    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Spin vector `s_q = ±1` under the `0 ↔ +1` involution.
    pub fn to_spins(&self) -> Vec<i8> {
        self.0.iter().map(|&b| bit_to_spin(b)).collect()
    }

    /// Inverse of [`BitString::to_spins`]; rejects values other than ±1.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        let bits = spins
            .iter()
            .map(|&s| spin_to_bit(s))
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "empty bit string".into(),
            });
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("invalid bit character '{other}'"),
                }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// One weighted `σ^z` product; an empty support is the constant term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingTerm {
    pub coefficient: f64,
    /// Strictly increasing qubit indices, at most four.
    pub support: Vec<u32>,
}

impl IsingTerm {
    /// Build a term, sorting the support and rejecting duplicates and >4-body.
    pub fn new(coefficient: f64, mut support: Vec<u32>) -> Result<Self> {
        support.sort_unstable();
        if let Some(w) = support.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIndex { index: w[0] });
        }
        if support.len() > MAX_BODY {
            return Err(Error::SupportTooLarge {
                size: support.len(),
            });
        }
        Ok(Self {
            coefficient,
            support,
        })
    }

    /// Constant (identity) term.
    pub fn constant(coefficient: f64) -> Self {
        Self {
            coefficient,
            support: Vec::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.support.is_empty()
    }

    /// Interaction size (0 for the constant term).
    pub fn body(&self) -> usize {
        self.support.len()
    }

    /// Bitmask with the support qubits set, given the register size.
    pub(crate) fn mask(&self, n_qubits: usize) -> u64 {
        self.support
            .iter()
            .fold(0u64, |m, &q| m | (1u64 << (n_qubits - 1 - q as usize)))
    }
}

impl fmt::Display for IsingTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for q in &self.support {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// A canonical sum of `σ^z` product terms over a fixed qubit register.
///
/// Canonical form: at most one term per support, no exactly-zero
/// coefficients, non-constant terms ordered by (size, support) with the
/// constant term last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingHamiltonian {
    n_qubits: usize,
    terms: Vec<IsingTerm>,
}

impl IsingHamiltonian {
    /// Canonicalize a term list: merge duplicate supports, drop zeros,
    /// order deterministically. Rejects out-of-range indices.
    pub fn new(terms: Vec<IsingTerm>, n_qubits: usize) -> Result<Self> {
        for term in &terms {
            if let Some(&q) = term.support.iter().find(|&&q| q as usize >= n_qubits) {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    n_qubits: n_qubits as u32,
                    term: term.to_string(),
                });
            }
        }
        let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for term in terms {
            *merged.entry(term.support).or_insert(0.0) += term.coefficient;
        }
        let mut out: Vec<IsingTerm> = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(support, coefficient)| IsingTerm {
                coefficient,
                support,
            })
            .collect();
        out.sort_by(|a, b| {
            let ka = (a.is_constant(), a.body(), a.support.clone());
            let kb = (b.is_constant(), b.body(), b.support.clone());
            ka.cmp(&kb)
        });
        Ok(Self {
            n_qubits,
            terms: out,
        })
    }

    /// Empty Hamiltonian (identically zero) on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> &[IsingTerm] {
        &self.terms
    }

    /// Terms with non-empty support (the ones realized as gates).
    pub fn interaction_terms(&self) -> impl Iterator<Item = &IsingTerm> {
        self.terms.iter().filter(|t| !t.is_constant())
    }

    /// The constant offset (0 if absent).
    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.is_constant())
            .map_or(0.0, |t| t.coefficient)
    }

    /// Energy of a bit string: `Σ_t c_t · Π_{q ∈ support(t)} spin(s_q)`.
    pub fn evaluate(&self, bits: &BitString) -> Result<f64> {
        if bits.len() != self.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits,
                got: bits.len(),
            });
        }
        Ok(self.evaluate_index(bits.to_index()))
    }

    /// Energy of the basis state `index` (qubit 0 = most significant bit).
    #[inline]
    pub fn evaluate_index(&self, index: u64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let parity = (index & t.mask(self.n_qubits)).count_ones() & 1;
                if parity == 0 {
                    t.coefficient
                } else {
                    -t.coefficient
                }
            })
            .sum()
    }

    /// Precomputed (mask, coefficient) pairs for tight evaluation loops.
    pub(crate) fn masks(&self) -> Vec<(u64, f64)> {
        self.terms
            .iter()
            .map(|t| (t.mask(self.n_qubits), t.coefficient))
            .collect()
    }

    /// Multiply every coefficient by `factor > 0`; the argmin set is unchanged.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidScale(factor));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| IsingTerm {
                    coefficient: t.coefficient * factor,
                    support: t.support.clone(),
                })
                .collect(),
        })
    }

    /// Term-for-term comparison with a coefficient tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.support == b.support && (a.coefficient - b.coefficient).abs() <= tol)
    }

    /// Render in the Hamiltonian text format.
    ///
    /// One term per line, `<coefficient> <idx> <idx> ...`; a line with only
    /// a coefficient is the constant term; `#` starts a comment; header
    /// line `qubits <n>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("qubits {}\n", self.n_qubits));
        for term in &self.terms {
            out.push_str(&term.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse the Hamiltonian text format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n_qubits: Option<usize> = None;
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let mut fields = line.split_whitespace();
            if n_qubits.is_none() {
                if fields.next() != Some("qubits") {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected header line 'qubits <n>'".into(),
                    });
                }
                let n = fields
                    .next()
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: "invalid qubit count".into(),
                    })?;
                if fields.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "trailing tokens after qubit count".into(),
                    });
                }
                n_qubits = Some(n);
                continue;
            }
            let coeff_tok = fields.next().expect("split of non-empty line");
            let coefficient = coeff_tok.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("invalid coefficient '{coeff_tok}'"),
            })?;
            let support = fields
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("invalid qubit index '{tok}'"),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            terms.push(IsingTerm::new(coefficient, support).map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?);
        }
        let n_qubits = n_qubits.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing 'qubits <n>' header".into(),
        })?;
        Self::new(terms, n_qubits)
    }
}
