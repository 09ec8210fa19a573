use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Integer partition: positive parts in weakly decreasing order.
///
/// Ordered graded-lexicographically: smaller sums first, and within a sum the
/// lexicographically larger partition first, so `(6) < (5,1) < ... < (1^6)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Rejects anything that is not already weakly decreasing and positive.
    pub fn from_sorted(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not a weakly decreasing positive sequence")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(value, count)` pairs, largest value first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `∏_j (#parts equal to j)!`
    pub fn repetition_factor(&self) -> BigInt {
        self.multiplicities().iter().fold(BigInt::one(), |acc, &(_, c)| acc * factorial(c))
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Zero-padded to `n` entries.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0);
        v
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sum().cmp(&other.sum()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Ok(Partition::new(v))
    }
}

/// All partitions of `d` with at most `max_parts` parts, in graded-lex order.
pub fn partitions(d: u32, max_parts: usize) -> Vec<Partition> {
    fn rec(rem: u32, max_part: u32, slots: usize, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(acc.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            acc.push(p);
            rec(rem - p, p, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_graded_lex() {
        let ps = partitions(4, 4);
        let shown: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        let mut sorted = ps.clone();
        sorted.sort();
        assert_eq!(sorted, ps);
        assert!(Partition::new(vec![3]) < Partition::new(vec![1, 1, 1, 1]));
    }

    #[test]
    fn counts_and_conjugates() {
        assert_eq!(partitions(6, 12).len(), 11);
        assert_eq!(partitions(6, 2).len(), 4);
        assert_eq!(Partition::new(vec![1, 3, 1]).conjugate(), Partition::new(vec![3, 1, 1]));
        assert_eq!(Partition::new(vec![2, 2, 3, 2]).repetition_factor(), BigInt::from(6));
        assert!(Partition::from_sorted(vec![1, 2]).is_err());
    }
}
