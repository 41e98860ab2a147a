//! Multi-indices for the divided-power PBW basis and for jet coordinates.

use std::cmp::Ordering;
use std::fmt;

/// Exponent tuple `I = (i_1, ..., i_n)` with `|I| = i_1 + ... + i_n`.
///
/// Ordered graded-lexicographically: first by `|I|`, then lexicographically.
/// This is the canonical term order used for serialization and pivoting.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(pub Vec<u16>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise subtraction; `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    pub fn bump(&self, k: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiIndex(v)
    }

    pub fn drop(&self, k: usize) -> Option<MultiIndex> {
        if self.0[k] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[k] -= 1;
        Some(MultiIndex(v))
    }

    /// Largest variable index with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x > 0)
    }

    /// Smallest variable index with a nonzero exponent.
    pub fn min_var(&self) -> Option<usize> {
        self.0.iter().position(|&x| x > 0)
    }

    /// All `J` with `J + K = self`, i.e. the divided-power coproduct support.
    pub fn splittings(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let mut out = vec![(MultiIndex::zero(self.len()), MultiIndex::zero(self.len()))];
        for (pos, &e) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for (j, k) in &out {
                for a in 0..=e {
                    let mut jj = j.clone();
                    let mut kk = k.clone();
                    jj.0[pos] = a;
                    kk.0[pos] = e - a;
                    next.push((jj, kk));
                }
            }
            out = next;
        }
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of length `n` with `|I| = d`, in lexicographic order.
pub fn indices_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u16;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for a in (0..=left).rev() {
            cur[pos] = a as u16;
            rec(pos + 1, left - a, cur, out);
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(MultiIndex(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    // lexicographic ascending
    out.sort();
    out
}

/// All multi-indices with `|I| <= cap`, in graded-lex order.
pub fn indices_up_to(n: usize, cap: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=cap {
        out.extend(indices_of_degree(n, d));
    }
    out
}

/// `dim fil^cap = #{I : |I| <= cap}` for `n` variables.
pub fn count_up_to(n: usize, cap: u32) -> usize {
    indices_up_to(n, cap).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex(vec![0, 2]);
        let b = MultiIndex(vec![1, 0]);
        assert!(b < a); // degree first
        let c = MultiIndex(vec![1, 1]);
        let d = MultiIndex(vec![2, 0]);
        assert!(c < d); // lex second
    }

    #[test]
    fn splittings_count() {
        let i = MultiIndex(vec![2, 1]);
        assert_eq!(i.splittings().len(), 6);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(indices_of_degree(2, 3).len(), 4);
        assert_eq!(indices_up_to(4, 2).len(), 15);
        assert_eq!(count_up_to(4, 3), 35);
    }
}
