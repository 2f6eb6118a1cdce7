use std::fmt;

use num_traits::Signed;

use crate::party::{all_subsystems, PartySet, MAX_PARTIES};
use crate::{Error, Rational, Result, Subsystem};

/// The `2^n - 1` subsystem entropies of an `n`-party model, ordered by
/// cardinality and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyVector {
    n: usize,
    entries: Vec<Rational>,
}

impl EntropyVector {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 || n > MAX_PARTIES {
            return Err(Error::InvalidSubsystem(format!("unsupported party count {n}")));
        }
        let expected = (1usize << n) - 1;
        if entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: entries.len(),
            });
        }
        if let Some(e) = entries.iter().find(|e| e.is_negative()) {
            return Err(Error::InvalidModel(format!("negative entropy {e}")));
        }
        Ok(EntropyVector { n, entries })
    }

    pub fn from_integers(n: usize, entries: &[i64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&e| crate::rational::int(e)).collect())
    }

    /// Evaluates `entropy` on every subsystem in canonical order.
    pub fn try_from_fn(
        n: usize,
        mut entropy: impl FnMut(Subsystem) -> Result<Rational>,
    ) -> Result<Self> {
        let entries = all_subsystems(n)
            .into_iter()
            .map(&mut entropy)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, subsystem: Subsystem) -> &Rational {
        &self.entries[canonical_index(subsystem.set(), self.n)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subsystem, &Rational)> {
        all_subsystems(self.n).into_iter().zip(self.entries.iter())
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        EntropyVector {
            n: self.n,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }
}

/// Position of `set` in the canonical ordering of nonempty subsets of `[n]`.
fn canonical_index(set: PartySet, n: usize) -> usize {
    let k = set.len();
    let mut index: usize = (0..k).map(|j| binomial(n, j)).sum::<usize>() - 1;
    // Rank of the k-combination among all k-combinations of [n] in lex order.
    let mut prev = 0;
    for (pos, idx) in set.indices().enumerate() {
        for skipped in prev + 1..idx {
            index += binomial(n - skipped, k - pos - 1);
        }
        prev = idx;
    }
    index
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for EntropyVector {
    /// Groups entries by cardinality: `(1 1 1 ; 2 2 2 ; 1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut prev_len = 1;
        for (i, (s, e)) in self.iter().enumerate() {
            if s.len() != prev_len {
                write!(f, " ;")?;
                prev_len = s.len();
            }
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
