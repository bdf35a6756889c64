use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial `var^power` in a ring with `nvars` variables.
    pub fn var(nvars: usize, var: usize, power: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[var] = power;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn try_div(&self, divisor: &Monomial) -> Option<Monomial> {
        divisor.divides(self).then(|| divisor.quotient_of(self))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn set(&mut self, var: usize, e: u32) {
        self.0[var] = e;
    }
}

impl FromIterator<u32> for Monomial {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Monomial(iter.into_iter().collect())
    }
}

/// A monomial order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Variables `[0, split)` are compared first with `first`; ties are
    /// broken on the remaining variables with `second`.
    Block {
        split: usize,
        first: Box<MonomialOrder>,
        second: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    pub fn block(split: usize, first: MonomialOrder, second: MonomialOrder) -> Self {
        MonomialOrder::Block {
            split,
            first: Box::new(first),
            second: Box::new(second),
        }
    }

    /// Checked comparison; fails when the exponent vectors differ in length.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(Error::Structural(format!(
                "cannot compare monomials in {} and {} variables",
                a.nvars(),
                b.nvars()
            )));
        }
        Ok(self.cmp(a.exponents(), b.exponents()))
    }

    /// Comparison on raw exponent slices of equal length.
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
            MonomialOrder::Block { split, first, second } => {
                let s = (*split).min(a.len());
                first
                    .cmp(&a[..s], &b[..s])
                    .then_with(|| second.cmp(&a[s..], &b[s..]))
            }
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::DegRevLex => write!(f, "degrevlex"),
            MonomialOrder::Block { split, first, second } => write!(f, "block({split}, {first}, {second})"),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "lex" => return Ok(MonomialOrder::Lex),
            "degrevlex" => return Ok(MonomialOrder::DegRevLex),
            _ => {}
        }
        let unknown = || Error::parse(1, format!("unknown monomial order `{s}`"));
        let inner = s
            .strip_prefix("block(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(unknown)?;
        // split at the two top-level commas
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0usize, 0usize);
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.checked_sub(1).ok_or_else(unknown)?,
                ',' if depth == 0 && parts.len() < 2 => {
                    parts.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&inner[start..]);
        if parts.len() != 3 {
            return Err(unknown());
        }
        let split = parts[0].trim().parse::<usize>().map_err(|_| unknown())?;
        Ok(MonomialOrder::block(split, parts[1].parse()?, parts[2].parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_text_round_trip() {
        let o = MonomialOrder::block(2, MonomialOrder::Lex, MonomialOrder::block(1, MonomialOrder::DegRevLex, MonomialOrder::Lex));
        assert_eq!(o.to_string().parse::<MonomialOrder>().unwrap(), o);
        assert!("block(1, lex)".parse::<MonomialOrder>().is_err());
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn lex_prefers_first_variable() {
        assert_eq!(MonomialOrder::Lex.compare(&m(&[1, 0]), &m(&[0, 2])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn degrevlex_tie_break() {
        // x z < y^2
        let o = MonomialOrder::DegRevLex;
        assert_eq!(o.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&m(&[0, 0, 3]), &m(&[1, 0, 0])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn one_is_minimal() {
        for o in [MonomialOrder::Lex, MonomialOrder::DegRevLex, MonomialOrder::block(1, MonomialOrder::Lex, MonomialOrder::DegRevLex)] {
            assert_eq!(o.compare(&m(&[0, 0]), &m(&[1, 0])).unwrap(), Ordering::Less);
            assert_eq!(o.compare(&m(&[0, 0]), &m(&[0, 1])).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = MonomialOrder::block(1, MonomialOrder::DegRevLex, MonomialOrder::DegRevLex);
        assert_eq!(o.compare(&m(&[1, 0, 0]), &m(&[0, 5, 5])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn length_mismatch_is_structural() {
        assert!(matches!(MonomialOrder::Lex.compare(&m(&[1]), &m(&[1, 0])), Err(Error::Structural(_))));
    }
}
