//! Linear entropy inequalities in canonical form
//! `Σ_l α_l S(I_l) >= Σ_r β_r S(J_r)` with strictly positive coefficients.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::bits::BitString;
use crate::party::{Party, PartySet, MAX_PARTIES};
use crate::rational::parse_rational;
use crate::{EntropyVector, Error, Rational, Result, Subsystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub subsystem: Subsystem,
    pub coefficient: Rational,
}

impl Term {
    pub fn new(subsystem: Subsystem, coefficient: Rational) -> Self {
        Term {
            subsystem,
            coefficient,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInequality {
    n: usize,
    lhs: Vec<Term>,
    rhs: Vec<Term>,
}

/// Result of substituting entropies into both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "holds {} >= {}", self.lhs, self.rhs)
        } else {
            write!(f, "violated {} < {}", self.lhs, self.rhs)
        }
    }
}

/// Occurrence bitstrings of one party: `x_l = δ(i ∈ I_l)`, `y_r = δ(i ∈ J_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub party: Party,
    pub x: BitString,
    pub y: BitString,
}

impl LinearInequality {
    /// Builds a canonical inequality, merging repeated subsystems on a side by
    /// summing their coefficients. Term order follows first appearance.
    pub fn new(n: usize, lhs: Vec<Term>, rhs: Vec<Term>) -> Result<Self> {
        if n == 0 || n > MAX_PARTIES {
            return Err(Error::InvalidSubsystem(format!("unsupported party count {n}")));
        }
        let lhs = merge_side(n, lhs)?;
        let rhs = merge_side(n, rhs)?;
        if lhs.len() > BitString::MAX_LEN || rhs.len() > BitString::MAX_LEN {
            return Err(Error::TooLarge("more than 64 terms on one side".into()));
        }
        Ok(LinearInequality { n, lhs, rhs })
    }

    /// Parses `"S(A) + S(B) >= S(AB)"`. Coefficients are positive integers or
    /// fractions `p/q` written before the term (`2 S(ACE)`, `3/2*S(A)`);
    /// `S_{AB}` and `S_AB` are accepted as alternative spellings.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let normalized = text.replace('≥', ">=");
        let mut sides = normalized.split(">=");
        let (lhs, rhs) = match (sides.next(), sides.next(), sides.next()) {
            (Some(l), Some(r), None) => (l, r),
            _ => {
                return Err(Error::Parse(format!(
                    "expected exactly one '>=' in '{}'",
                    text.trim()
                )))
            }
        };
        let lhs = parse_side(lhs, n)?;
        let rhs = parse_side(rhs, n)?;
        LinearInequality::new(n, lhs, rhs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lhs(&self) -> &[Term] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[Term] {
        &self.rhs
    }

    /// `L`, the number of LHS terms.
    pub fn lhs_len(&self) -> usize {
        self.lhs.len()
    }

    /// `R`, the number of RHS terms.
    pub fn rhs_len(&self) -> usize {
        self.rhs.len()
    }

    pub fn alphas(&self) -> Vec<Rational> {
        self.lhs.iter().map(|t| t.coefficient.clone()).collect()
    }

    pub fn betas(&self) -> Vec<Rational> {
        self.rhs.iter().map(|t| t.coefficient.clone()).collect()
    }

    /// One entry per party `1..=n+1`; the purifier's strings are all zero.
    pub fn occurrence_bitstrings(&self) -> Vec<Occurrence> {
        (1..=self.n + 1)
            .map(|i| {
                let party = Party::new(i, self.n).expect("index in range");
                Occurrence {
                    party,
                    x: occurrence(&self.lhs, party),
                    y: occurrence(&self.rhs, party),
                }
            })
            .collect()
    }

    pub fn evaluate(&self, v: &EntropyVector) -> Result<Evaluation> {
        if v.n() != self.n {
            return Err(Error::PartyCountMismatch {
                expected: self.n,
                found: v.n(),
            });
        }
        self.evaluate_with(|s| Ok(v.get(s).clone()))
    }

    /// Evaluates with entropies supplied on demand, one call per term.
    pub fn evaluate_with(
        &self,
        mut entropy: impl FnMut(Subsystem) -> Result<Rational>,
    ) -> Result<Evaluation> {
        let mut side = |terms: &[Term]| -> Result<Rational> {
            terms.iter().try_fold(Rational::zero(), |acc, t| {
                Ok(acc + &t.coefficient * entropy(t.subsystem)?)
            })
        };
        let lhs = side(&self.lhs)?;
        let rhs = side(&self.rhs)?;
        Ok(Evaluation {
            holds: lhs >= rhs,
            lhs,
            rhs,
        })
    }

    /// `S(A) + S(B) >= S(AB)` on two parties.
    pub fn subadditivity() -> Self {
        Self::parse("S(A) + S(B) >= S(AB)", 2).expect("well-formed")
    }

    /// `S(AB) + S(BC) >= S(B) + S(ABC)` on three parties.
    pub fn strong_subadditivity() -> Self {
        Self::parse("S(AB) + S(BC) >= S(B) + S(ABC)", 3).expect("well-formed")
    }

    /// Monogamy of mutual information on three parties.
    pub fn monogamy_of_mutual_information() -> Self {
        Self::parse("S(AB) + S(BC) + S(AC) >= S(A) + S(B) + S(C) + S(ABC)", 3)
            .expect("well-formed")
    }

    /// `S(X) + S(Y) >= S(XY)` for disjoint subsystems of an `n`-party system.
    pub fn subadditivity_instance(n: usize, x: Subsystem, y: Subsystem) -> Result<Self> {
        if !x.set().is_disjoint(y.set()) {
            return Err(Error::InvalidSubsystem(format!("{x} and {y} overlap")));
        }
        let xy = Subsystem::new(x.set().union(y.set()), n)?;
        Self::new(
            n,
            vec![Term::new(x, Rational::one()), Term::new(y, Rational::one())],
            vec![Term::new(xy, Rational::one())],
        )
    }

    /// `S(XY) + S(YZ) >= S(Y) + S(XYZ)` for pairwise disjoint subsystems.
    pub fn strong_subadditivity_instance(
        n: usize,
        x: Subsystem,
        y: Subsystem,
        z: Subsystem,
    ) -> Result<Self> {
        let (xs, ys, zs) = (x.set(), y.set(), z.set());
        if !xs.is_disjoint(ys) || !ys.is_disjoint(zs) || !xs.is_disjoint(zs) {
            return Err(Error::InvalidSubsystem(format!("{x}, {y}, {z} overlap")));
        }
        let one = Rational::one;
        Self::new(
            n,
            vec![
                Term::new(Subsystem::new(xs.union(ys), n)?, one()),
                Term::new(Subsystem::new(ys.union(zs), n)?, one()),
            ],
            vec![
                Term::new(y, one()),
                Term::new(Subsystem::new(xs.union(ys).union(zs), n)?, one()),
            ],
        )
    }
}

fn occurrence(terms: &[Term], party: Party) -> BitString {
    let bits = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.subsystem.contains(party))
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    BitString::new(terms.len(), bits).expect("at most 64 terms")
}

fn merge_side(n: usize, terms: Vec<Term>) -> Result<Vec<Term>> {
    if terms.is_empty() {
        return Err(Error::EmptySide);
    }
    let mut merged: Vec<Term> = Vec::new();
    for t in terms {
        if !t.coefficient.is_positive() {
            return Err(Error::NonPositiveCoefficient(t.coefficient.to_string()));
        }
        if !t.subsystem.set().is_subset(PartySet::first(n)) {
            return Err(Error::InvalidSubsystem(format!(
                "{} is not a subset of the {n} parties",
                t.subsystem
            )));
        }
        match merged.iter_mut().find(|m| m.subsystem == t.subsystem) {
            Some(m) => m.coefficient += t.coefficient,
            None => merged.push(t),
        }
    }
    Ok(merged)
}

fn parse_side(text: &str, n: usize) -> Result<Vec<Term>> {
    if text.trim().is_empty() {
        return Err(Error::EmptySide);
    }
    text.split('+').map(|t| parse_term(t, n)).collect()
}

fn parse_term(text: &str, n: usize) -> Result<Term> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed term '{text}'"));
    let s_pos = text.find('S').ok_or_else(bad)?;
    let (coefficient, body) = text.split_at(s_pos);
    let coefficient = coefficient.trim().trim_end_matches('*').trim();
    let coefficient = if coefficient.is_empty() {
        Rational::one()
    } else {
        let c = parse_rational(coefficient)?;
        if !c.is_positive() {
            return Err(Error::NonPositiveCoefficient(c.to_string()));
        }
        c
    };
    let body = &body[1..];
    let letters = if let Some(inner) = body.strip_prefix('(') {
        inner.strip_suffix(')').ok_or_else(bad)?
    } else if let Some(inner) = body.strip_prefix("_{") {
        inner.strip_suffix('}').ok_or_else(bad)?
    } else if let Some(inner) = body.strip_prefix('_') {
        inner
    } else {
        return Err(bad());
    };
    let letters = letters.trim();
    if letters.is_empty() || !letters.chars().all(|c| c.is_ascii_alphabetic()) {
        return Err(bad());
    }
    Ok(Term::new(Subsystem::parse(letters, n)?, coefficient))
}

fn fmt_side(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        if t.coefficient.is_one() {
            write!(f, "S({})", t.subsystem)?;
        } else {
            write!(f, "{} S({})", t.coefficient, t.subsystem)?;
        }
    }
    Ok(())
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_side(f, &self.lhs)?;
        write!(f, " >= ")?;
        fmt_side(f, &self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    pub(crate) const EQ4: &str = "S(AB)+S(DE)+S(ACD)+2 S(ACE)+S(BCD)+S(ABDE) >= S(AC)+S(AE)+S(BD)+2 S(ABCD)+S(ACDE)";

    fn sub(s: &str, n: usize) -> Subsystem {
        Subsystem::parse(s, n).unwrap()
    }

    #[test]
    fn parses_subadditivity() {
        let ineq = LinearInequality::parse("S(A) + S(B) >= S(AB)", 2).unwrap();
        assert_eq!(
            ineq.lhs(),
            &[Term::new(sub("A", 2), int(1)), Term::new(sub("B", 2), int(1))]
        );
        assert_eq!(ineq.rhs(), &[Term::new(sub("AB", 2), int(1))]);
    }

    #[test]
    fn parses_ray15_separating_inequality() {
        let ineq = LinearInequality::parse(EQ4, 5).unwrap();
        assert_eq!((ineq.lhs_len(), ineq.rhs_len()), (6, 5));
        let alphas: Vec<_> = ineq.alphas();
        assert_eq!(alphas, [1, 1, 1, 2, 1, 1].map(int));
        assert_eq!(ineq.betas(), [1, 1, 1, 2, 1].map(int));
        assert_eq!(ineq.lhs()[3].subsystem, sub("ACE", 5));
    }

    #[test]
    fn rejects_out_of_range_and_malformed() {
        assert!(matches!(
            LinearInequality::parse("S(F) >= S(A)", 5),
            Err(Error::PartyOutOfRange { letter: 'F', .. })
        ));
        assert!(matches!(
            LinearInequality::parse("0 S(A) >= S(B)", 2),
            Err(Error::NonPositiveCoefficient(_))
        ));
        assert!(matches!(
            LinearInequality::parse("-1 S(A) >= S(B)", 2),
            Err(Error::Parse(_)) | Err(Error::NonPositiveCoefficient(_))
        ));
        assert!(matches!(LinearInequality::parse(" >= S(B)", 2), Err(Error::EmptySide)));
        assert!(LinearInequality::parse("S(A) S(B) >= S(AB)", 2).is_err());
        assert!(LinearInequality::parse("S(A) >= S(B) >= S(C)", 3).is_err());
        assert!(LinearInequality::parse("S(A >= S(B)", 2).is_err());
    }

    #[test]
    fn merges_repeated_terms() {
        let ineq = LinearInequality::parse("S(A) + 1/2 S(A) + S(B) >= S(AB)", 2).unwrap();
        assert_eq!(ineq.lhs_len(), 2);
        assert_eq!(ineq.lhs()[0].coefficient, Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn alternative_spellings() {
        let a = LinearInequality::parse("S_{AB} + 2*S_C >= S_{ABC}", 3).unwrap();
        let b = LinearInequality::parse("S(AB) + 2 S(C) >= S(ABC)", 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn occurrence_strings() {
        let sa = LinearInequality::subadditivity();
        let occ = sa.occurrence_bitstrings();
        let pairs: Vec<(String, String)> = occ.iter().map(|o| (o.x.to_string(), o.y.to_string())).collect();
        assert_eq!(
            pairs,
            [("10", "1"), ("01", "1"), ("00", "0")].map(|(a, b)| (a.to_string(), b.to_string()))
        );
        // Party A in the ray-15 inequality: AB, ACD, ACE, ABDE on the left;
        // AC, AE, ABCD, ACDE on the right.
        let eq4 = LinearInequality::parse(EQ4, 5).unwrap();
        let occ = eq4.occurrence_bitstrings();
        assert_eq!(occ[0].x.to_string(), "101101");
        assert_eq!(occ[0].y.to_string(), "11011");
        assert_eq!(occ[5].x.to_string(), "000000");
        assert_eq!(occ[5].y.to_string(), "00000");
    }

    #[test]
    fn evaluation_examples() {
        let sa = LinearInequality::subadditivity();
        let v = EntropyVector::from_integers(2, &[1, 1, 1]).unwrap();
        let e = sa.evaluate(&v).unwrap();
        assert!(e.holds);
        assert_eq!((e.lhs, e.rhs), (int(2), int(1)));

        let ssa = LinearInequality::strong_subadditivity();
        let ones = EntropyVector::from_integers(3, &[1; 7]).unwrap();
        let e = ssa.evaluate(&ones).unwrap();
        assert!(e.holds);
        assert_eq!((e.lhs, e.rhs), (int(2), int(2)));

        assert!(matches!(
            ssa.evaluate(&v),
            Err(Error::PartyCountMismatch { expected: 3, found: 2 })
        ));
    }

    fn arb_inequality() -> impl Strategy<Value = (usize, Vec<(u32, (u32, u32))>, Vec<(u32, (u32, u32))>)> {
        (1usize..=5).prop_flat_map(|n| {
            let term = (1u32..(1u32 << n), (1u32..7, 1u32..4));
            (
                Just(n),
                prop::collection::vec(term.clone(), 1..6),
                prop::collection::vec(term, 1..6),
            )
        })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip((n, lhs, rhs) in arb_inequality()) {
            let side = |terms: &[(u32, (u32, u32))]| -> Vec<Term> {
                terms.iter().map(|&(mask, (p, q))| {
                    Term::new(
                        Subsystem::new(PartySet::from_bits(mask), n).unwrap(),
                        Rational::new(p.into(), q.into()),
                    )
                }).collect()
            };
            let ineq = LinearInequality::new(n, side(&lhs), side(&rhs)).unwrap();
            let text = ineq.to_string();
            let reparsed = LinearInequality::parse(&text, n).unwrap();
            prop_assert_eq!(&reparsed, &ineq);
            prop_assert_eq!(reparsed.to_string(), text);

            let occ = ineq.occurrence_bitstrings();
            prop_assert_eq!(occ.len(), n + 1);
            for o in &occ {
                prop_assert_eq!(o.x.len(), ineq.lhs_len());
                prop_assert_eq!(o.y.len(), ineq.rhs_len());
            }
            prop_assert_eq!(occ[n].x.bits(), 0);
            prop_assert_eq!(occ[n].y.bits(), 0);
        }
    }
}
