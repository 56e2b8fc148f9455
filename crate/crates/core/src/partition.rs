//! Finite partitions and permutations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint blocks covering a ground set. Elements inside a block are kept
/// sorted; block order is meaningful to callers (e.g. "true" block first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition<E: Ord> {
    blocks: Vec<Vec<E>>,
}

impl<E: Ord + Clone + Debug> Partition<E> {
    pub fn new(blocks: Vec<Vec<E>>, ground: &[E]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort();
            for e in &block {
                if !seen.insert(e.clone()) {
                    return Err(Error::InvalidPartition(format!("{e:?} appears twice")));
                }
            }
            sorted.push(block);
        }
        let ground: BTreeSet<_> = ground.iter().cloned().collect();
        if let Some(extra) = seen.difference(&ground).next() {
            return Err(Error::InvalidPartition(format!("{extra:?} not in ground set")));
        }
        if let Some(missing) = ground.difference(&seen).next() {
            return Err(Error::InvalidPartition(format!("{missing:?} not covered")));
        }
        Ok(Self { blocks: sorted })
    }

    /// Groups `ground` by `key`; blocks ordered by key.
    pub fn by_key<K: Ord>(ground: &[E], key: impl Fn(&E) -> K) -> Self {
        let mut groups: BTreeMap<K, Vec<E>> = BTreeMap::new();
        for e in ground {
            groups.entry(key(e)).or_default().push(e.clone());
        }
        let blocks = groups
            .into_values()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<E>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, e: &E) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(e).is_ok())
    }

    pub fn is_equipartition(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Common refinement: all nonempty pairwise intersections.
    pub fn meet(&self, other: &Self) -> Self {
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let both: Vec<E> = a.iter().filter(|e| b.binary_search(e).is_ok()).cloned().collect();
                if !both.is_empty() {
                    blocks.push(both);
                }
            }
        }
        Self { blocks }
    }

    /// Equality as a set of sets, ignoring block order.
    pub fn same_blocks(&self, other: &Self) -> bool {
        let a: BTreeSet<_> = self.blocks.iter().collect();
        let b: BTreeSet<_> = other.blocks.iter().collect();
        a == b
    }

    pub fn map<F: Ord + Clone + Debug>(&self, f: impl Fn(&E) -> F) -> Partition<F> {
        Partition {
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let mut m: Vec<F> = b.iter().map(&f).collect();
                    m.sort();
                    m
                })
                .collect(),
        }
    }
}

/// Bijection on `{0..d-1}` in one-line form. Acting on a sequence it
/// rearranges entries so that position `j` of the result holds the entry
/// previously at position `map[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn from_one_line(map: Vec<usize>) -> Result<Self> {
        let d = map.len();
        let mut seen = vec![false; d];
        for &m in &map {
            if m >= d {
                return Err(Error::InvalidPermutation(format!("image {m} outside 0..{d}")));
            }
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!("image {m} repeated")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(d: usize) -> Self {
        Self { map: (0..d).collect() }
    }

    /// Position `j` takes the entry from `j + s mod d`.
    pub fn cyclic_shift(d: usize, s: usize) -> Self {
        Self { map: (0..d).map(|j| (j + s) % d).collect() }
    }

    pub fn transposition(d: usize, a: usize, b: usize) -> Result<Self> {
        if a >= d || b >= d {
            return Err(Error::InvalidPermutation(format!("transposition ({a} {b}) outside 0..{d}")));
        }
        let mut map: Vec<usize> = (0..d).collect();
        map.swap(a, b);
        Ok(Self { map })
    }

    /// Builds a permutation from disjoint 0-based cycles; `(a b c)` maps
    /// `a → b → c → a`.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..d).collect();
        let mut touched = vec![false; d];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                if a >= d {
                    return Err(Error::InvalidPermutation(format!("cycle entry {a} outside 0..{d}")));
                }
                if std::mem::replace(&mut touched[a], true) {
                    return Err(Error::InvalidPermutation(format!("{a} appears in two cycles")));
                }
                map[a] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Self { map })
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..d).collect();
        map.shuffle(rng);
        Self { map }
    }

    /// Parses 1-based text: one-line notation (`2,3,4,1` or `2 3 4 1`) or
    /// cycle notation (`(1 2)(3 4)`).
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let text = text.trim();
        let parse_num = |s: &str| -> Result<usize> {
            let n: usize = s.parse().map_err(|_| Error::InvalidPermutation(format!("not a number: {s:?}")))?;
            n.checked_sub(1).ok_or_else(|| Error::InvalidPermutation("entries are 1-based".into()))
        };
        let split = |s: &str| -> Vec<String> {
            s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::to_owned).collect()
        };
        if text.starts_with('(') {
            let mut cycles = Vec::new();
            let mut rest = text;
            while !rest.is_empty() {
                let inner = rest
                    .strip_prefix('(')
                    .and_then(|r| r.split_once(')'))
                    .ok_or_else(|| Error::InvalidPermutation(format!("bad cycle syntax near {rest:?}")))?;
                let cycle = split(inner.0).iter().map(|s| parse_num(s)).collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
                rest = inner.1.trim_start();
            }
            Self::from_cycles(d, &cycles)
        } else {
            let map = split(text).iter().map(|s| parse_num(s)).collect::<Result<Vec<_>>>()?;
            if map.len() != d {
                return Err(Error::InvalidPermutation(format!("expected {d} entries, found {}", map.len())));
            }
            Self::from_one_line(map)
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// Rearranges a sequence: `out[j] = items[map[j]]`.
    pub fn rearrange<X: Clone>(&self, items: &[X]) -> Vec<X> {
        self.map.iter().map(|&m| items[m].clone()).collect()
    }

    /// Lexicographic enumeration of all permutations of `d` elements.
    pub fn all(d: usize) -> Vec<Self> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation { map: prefix.clone() });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(d), &mut vec![false; d], &mut out);
        out
    }
}
