//! Integer utilities and the divisor-chain index sets.

use std::collections::HashMap;
use std::sync::Mutex;

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// The Möbius function, by trial division.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Interleaved chain `1 = a_0 <= b_1 < a_1 <= b_2 < ... <= b_r < a_r`
/// with `a_{j-1} | b_j` and `b_j | a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainTuple {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl ChainTuple {
    /// Validates the chain invariants.
    pub fn new(a: Vec<u64>, b: Vec<u64>) -> Option<ChainTuple> {
        if a.first() != Some(&1) || b.len() + 1 != a.len() {
            return None;
        }
        for j in 1..a.len() {
            let (prev, bj, aj) = (a[j - 1], b[j - 1], a[j]);
            if !(prev <= bj && bj < aj && bj % prev == 0 && aj % bj == 0) {
                return None;
            }
        }
        Some(ChainTuple { a, b })
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }

    /// Number of steps `r`.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn target(&self) -> u64 {
        *self.a.last().expect("a_0 always present")
    }

    /// Steps `(a_{j-1}, b_j, a_j)` for `j = 1..=r`.
    pub fn steps(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        (1..self.a.len()).map(move |j| (self.a[j - 1], self.b[j - 1], self.a[j]))
    }
}

/// Strictly increasing divisibility chain `1 = a_0 < a_1 < ... < a_r = k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorChain(Vec<u64>);

impl DivisorChain {
    pub fn new(seq: Vec<u64>) -> Option<DivisorChain> {
        if seq.first() != Some(&1) {
            return None;
        }
        if seq.windows(2).all(|w| w[0] < w[1] && w[1] % w[0] == 0) {
            Some(DivisorChain(seq))
        } else {
            None
        }
    }

    pub fn seq(&self) -> &[u64] {
        &self.0
    }

    pub fn steps(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Every chain tuple ending at `a`, in lexicographic order of `(a, b)`.
pub fn enumerate_chain_tuples(a: u64) -> Vec<ChainTuple> {
    assert!(a >= 1, "chain target must be positive");
    static MEMO: Mutex<Option<HashMap<u64, Vec<ChainTuple>>>> = Mutex::new(None);
    if let Some(hit) = MEMO.lock().unwrap().as_ref().and_then(|m| m.get(&a)) {
        return hit.clone();
    }
    // Extend from the front: chains from `start` up to `a`.
    fn from(start: u64, a: u64, acc_a: &mut Vec<u64>, acc_b: &mut Vec<u64>, out: &mut Vec<ChainTuple>) {
        if start == a {
            out.push(ChainTuple {
                a: acc_a.clone(),
                b: acc_b.clone(),
            });
            return;
        }
        for next in divisors(a).into_iter().filter(|&d| d > start && d % start == 0) {
            for b in divisors(next).into_iter().filter(|&d| d >= start && d < next && d % start == 0) {
                acc_a.push(next);
                acc_b.push(b);
                from(next, a, acc_a, acc_b, out);
                acc_a.pop();
                acc_b.pop();
            }
        }
    }
    let mut out = Vec::new();
    from(1, a, &mut vec![1], &mut Vec::new(), &mut out);
    out.sort();
    MEMO.lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(a, out.clone());
    out
}

/// Every strictly increasing divisibility chain from 1 to `k`.
pub fn enumerate_divisor_chains(k: u64) -> Vec<DivisorChain> {
    assert!(k >= 1, "chain target must be positive");
    fn from(k: u64, acc: &mut Vec<u64>, out: &mut Vec<DivisorChain>) {
        let last = *acc.last().unwrap();
        if last == k {
            out.push(DivisorChain(acc.clone()));
            return;
        }
        for d in divisors(k).into_iter().filter(|&d| d > last && d % last == 0) {
            acc.push(d);
            from(k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    from(k, &mut vec![1], &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(7), -1);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(7), vec![1, 7]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn mobius_sums_over_divisors() {
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).into_iter().map(mobius).sum();
            assert_eq!(s, if n == 1 { 1 } else { 0 }, "n = {n}");
        }
    }

    #[test]
    fn chain_tuples_small_targets() {
        let t1 = enumerate_chain_tuples(1);
        assert_eq!(t1.len(), 1);
        assert!(t1[0].is_empty());
        let t4: Vec<(Vec<u64>, Vec<u64>)> = enumerate_chain_tuples(4)
            .into_iter()
            .map(|c| (c.a, c.b))
            .collect();
        assert_eq!(
            t4,
            vec![
                (vec![1, 2, 4], vec![1, 2]),
                (vec![1, 4], vec![1]),
                (vec![1, 4], vec![2]),
            ]
        );
        assert_eq!(enumerate_chain_tuples(6).len(), 5);
    }

    #[test]
    fn prime_targets_have_one_tuple() {
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            let t = enumerate_chain_tuples(p);
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].a(), &[1, p]);
            assert_eq!(t[0].b(), &[1]);
        }
    }

    #[test]
    fn divisor_chain_examples() {
        assert_eq!(enumerate_divisor_chains(1), vec![DivisorChain(vec![1])]);
        assert_eq!(
            enumerate_divisor_chains(4),
            vec![DivisorChain(vec![1, 2, 4]), DivisorChain(vec![1, 4])]
        );
        assert_eq!(enumerate_divisor_chains(12).len(), 8);
    }

    #[test]
    fn constructors_validate() {
        assert!(ChainTuple::new(vec![1, 4], vec![2]).is_some());
        assert!(ChainTuple::new(vec![1, 4], vec![3]).is_none());
        assert!(ChainTuple::new(vec![1, 4], vec![4]).is_none());
        assert!(ChainTuple::new(vec![2, 4], vec![2]).is_none());
        assert!(DivisorChain::new(vec![1, 3, 6]).is_some());
        assert!(DivisorChain::new(vec![1, 4, 6]).is_none());
    }
}
