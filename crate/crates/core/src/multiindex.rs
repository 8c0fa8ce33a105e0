use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

/// Multi-index `k = (k_1, ..., k_M)` of non-negative integers.
///
/// Components are addressed 1-based through [`MultiIndex::get`] and
/// [`MultiIndex::unit`] to match the usual `e_1, ..., e_M` notation.
#[derive(
    Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }

    pub fn zeros(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// Unit vector `e_i`, `1 <= i <= m`.
    pub fn unit(m: usize, i: usize) -> Self {
        assert!((1..=m).contains(&i), "unit index {i} out of range 1..={m}");
        let mut v = vec![0; m];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Component `k_i`, 1-based.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// `|k| = Σ k_i`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `Σ i·k_i`.
    pub fn weighted(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &k)| (i as u32 + 1) * k)
            .sum()
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `k - e_i`, if non-negative.
    pub fn minus_unit(&self, i: usize) -> Option<MultiIndex> {
        let mut v = self.0.clone();
        v[i - 1] = v[i - 1].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    /// `k - e_{i+1} + e_i`, if non-negative.
    pub fn shift_down(&self, i: usize) -> Option<MultiIndex> {
        let mut v = self.minus_unit(i + 1)?.0;
        v[i - 1] += 1;
        Some(MultiIndex(v))
    }

    /// `k! = Π k_i!`.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &k| acc * factorial(k))
    }

    /// All `l` with `0 <= l <= k`, in lexicographic order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        box_indices(&self.0)
    }

    /// All indices componentwise below `bound`, sorted so that every
    /// dependency of the moment recursions comes first: by `|k|`, then by
    /// `Σ i·k_i`, then lexicographically.
    pub fn graded_up_to(bound: &MultiIndex) -> Vec<MultiIndex> {
        let mut all = box_indices(&bound.0);
        all.sort_by_key(|k| (k.total(), k.weighted(), k.clone()));
        all
    }

    /// All indices in dimension `m` with `|k| <= order`, in graded order.
    pub fn graded_total(m: usize, order: u32) -> Vec<MultiIndex> {
        let mut all: Vec<_> = box_indices(&vec![order; m])
            .into_iter()
            .filter(|k| k.total() <= order)
            .collect();
        all.sort_by_key(|k| (k.total(), k.weighted(), k.clone()));
        all
    }
}

pub(crate) fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn box_indices(bound: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex(Vec::with_capacity(bound.len()))];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|k| {
                (0..=b).map(move |j| {
                    let mut v = k.0.clone();
                    v.push(j);
                    MultiIndex(v)
                })
            })
            .collect();
    }
    out
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = std::num::ParseIntError;

    /// Accepts `2`, `0,2` or `(0,2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        s.split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(MultiIndex)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let k = MultiIndex::new(vec![2, 1]);
        assert_eq!(k.total(), 3);
        assert_eq!(k.weighted(), 4);
        assert_eq!(k.minus_unit(2), Some(MultiIndex::new(vec![2, 0])));
        assert_eq!(k.shift_down(1), Some(MultiIndex::new(vec![3, 0])));
        assert_eq!(MultiIndex::new(vec![1, 0]).shift_down(1), None);
        assert_eq!(k.factorial(), BigUint::from(2u32));
        assert_eq!(k.sub_indices().len(), 6);
        assert_eq!(
            "0,2".parse::<MultiIndex>().unwrap(),
            MultiIndex::new(vec![0, 2])
        );
        assert_eq!("(3)".parse::<MultiIndex>().unwrap().to_string(), "(3)");
    }

    #[test]
    fn graded_order_puts_dependencies_first() {
        let all = MultiIndex::graded_total(3, 5);
        let pos = |k: &MultiIndex| all.iter().position(|x| x == k).unwrap();
        for k in &all {
            for i in 1..=3 {
                if let Some(d) = k.minus_unit(1) {
                    assert!(pos(&d) < pos(k));
                }
                if i < 3 {
                    if let Some(d) = k.shift_down(i) {
                        assert!(pos(&d) < pos(k));
                    }
                }
            }
            for l in k.sub_indices() {
                if l != *k {
                    assert!(pos(&l) < pos(k));
                }
            }
        }
    }
}
