//! Precomputed permutation tables with cached sign and fixed-point data.

use crate::{Error, Result};

/// Largest `n` for which a full table of `S_n` is built.
pub const MAX_TABLE_SIZE: usize = 8;

/// All permutations of `0..n` in lexicographic order. The identity is
/// always entry 0.
#[derive(Debug, Clone)]
pub struct PermutationTable {
    n: usize,
    images: Vec<u8>,
    signs: Vec<i8>,
    moved: Vec<u8>,
}

impl PermutationTable {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_TABLE_SIZE {
            return Err(Error::Resource(format!(
                "permutation table for n={n} exceeds limit {MAX_TABLE_SIZE}"
            )));
        }
        let mut current: Vec<u8> = (0..n as u8).collect();
        let mut table = Self {
            n,
            images: Vec::new(),
            signs: Vec::new(),
            moved: Vec::new(),
        };
        loop {
            table.push(&current);
            if !next_lexicographic(&mut current) {
                break;
            }
        }
        Ok(table)
    }

    fn push(&mut self, perm: &[u8]) {
        self.images.extend_from_slice(perm);
        self.signs.push(sign_by_cycles(perm));
        self.moved
            .push(perm.iter().enumerate().filter(|&(i, &p)| i != p as usize).count() as u8);
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Images `[p(0), …, p(n-1)]` of permutation `idx`.
    #[inline]
    pub fn get(&self, idx: usize) -> &[u8] {
        &self.images[idx * self.n..(idx + 1) * self.n]
    }

    /// +1 for even, −1 for odd permutations.
    #[inline]
    pub fn sign(&self, idx: usize) -> i8 {
        self.signs[idx]
    }

    /// Number of points not fixed by permutation `idx`.
    #[inline]
    pub fn moved_points(&self, idx: usize) -> usize {
        self.moved[idx] as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

fn next_lexicographic(p: &mut [u8]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn sign_by_cycles(p: &[u8]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inversions(p: &[u8]) -> usize {
        let mut count = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn sizes_and_identity_first() {
        let factorials = [1, 1, 2, 6, 24, 120, 720, 5040];
        for (n, &f) in factorials.iter().enumerate() {
            let t = PermutationTable::new(n).unwrap();
            assert_eq!(t.len(), f);
            assert!(t.get(0).iter().enumerate().all(|(i, &p)| p as usize == i));
            assert_eq!(t.moved_points(0), 0);
        }
    }

    #[test]
    fn signs_match_inversion_parity() {
        let t = PermutationTable::new(5).unwrap();
        for idx in 0..t.len() {
            let expected = if inversions(t.get(idx)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.sign(idx), expected);
        }
    }

    #[test]
    fn no_permutation_moves_exactly_one_point() {
        let t = PermutationTable::new(6).unwrap();
        assert!((0..t.len()).all(|i| t.moved_points(i) != 1));
    }

    #[test]
    fn oversized_table_is_refused() {
        assert!(matches!(
            PermutationTable::new(MAX_TABLE_SIZE + 1),
            Err(Error::Resource(_))
        ));
    }
}
