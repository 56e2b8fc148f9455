//! Boolean functions as truth tables, their predicates, and the partitions
//! of function sets that the decision problems induce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Largest arity for which whole function sets (`2^(2^k)` members) are enumerated.
pub const MAX_ENUMERATION_ARITY: usize = 4;

/// Largest arity accepted for a single truth table.
pub const MAX_ARITY: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_odd(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Truth table of `f: {0,1}^k → {0,1}`; `table[index(bits)] = f(bits)` with
/// big-endian indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanFunction {
    arity: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::KOutOfRange { k: arity, min: 0, max: MAX_ARITY });
        }
        if table.len() != 1 << arity {
            return Err(Error::MalformedTable(format!(
                "{} entries for arity {arity}, expected {}",
                table.len(),
                1usize << arity
            )));
        }
        Ok(Self { arity, table })
    }

    /// Function whose truth table, read as a big-endian binary number, is `id`.
    pub fn from_id(arity: usize, id: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::KOutOfRange { k: arity, min: 0, max: 6 });
        }
        let len = 1usize << arity;
        if len < 64 && id >> len != 0 {
            return Err(Error::MalformedTable(format!("id {id} too large for arity {arity}")));
        }
        let table = (0..len).map(|i| (id >> (len - 1 - i)) & 1 == 1).collect();
        Ok(Self { arity, table })
    }

    /// One of the four one-bit functions `f0 = 00, f1 = 01, f2 = 10, f3 = 11`.
    pub fn one_bit(i: usize) -> Result<Self> {
        if i > 3 {
            return Err(Error::FunctionIndex(i));
        }
        Self::from_id(1, i as u64)
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::new(arity, vec![value; 1 << arity])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, index: usize) -> bool {
        self.table[index]
    }

    pub fn id(&self) -> Option<u64> {
        (self.arity <= 6).then(|| self.table.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    pub fn weight(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn table_string(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// One-bit restriction `b ↦ f(prefix, b)` for a prefix of the first `k−1` arguments.
    pub fn restriction(&self, prefix: usize) -> Self {
        assert!(self.arity >= 1 && prefix < 1 << (self.arity - 1), "prefix out of range");
        Self { arity: 1, table: vec![self.table[2 * prefix], self.table[2 * prefix + 1]] }
    }

    /// Enumerates all functions of arity `k` in id order.
    pub fn all(k: usize) -> Result<Vec<Self>> {
        check_enumerable(k)?;
        (0..1u64 << (1 << k)).map(|id| Self::from_id(k, id)).collect()
    }

    /// Position in the graded ordering of all functions of this arity: by
    /// number of ones, then lexicographically by the set of one-positions of
    /// the id, counting bit positions from the least significant end. This is
    /// the numbering used by the printed two-argument parity tables.
    pub fn graded_index(&self) -> Result<usize> {
        check_enumerable(self.arity)?;
        Ok(graded_order(self.arity).iter().position(|&id| Some(id) == self.id()).expect("every id appears"))
    }

    pub fn from_graded_index(k: usize, index: usize) -> Result<Self> {
        check_enumerable(k)?;
        let order = graded_order(k);
        let id =
            *order.get(index).ok_or_else(|| Error::MalformedTable(format!("graded index {index} out of range")))?;
        Self::from_id(k, id)
    }
}

fn check_enumerable(k: usize) -> Result<()> {
    if k > MAX_ENUMERATION_ARITY {
        return Err(Error::KOutOfRange { k, min: 0, max: MAX_ENUMERATION_ARITY });
    }
    Ok(())
}

/// Ids of all arity-`k` functions in graded order.
pub fn graded_order(k: usize) -> Vec<u64> {
    let len = 1usize << k;
    let mut ids: Vec<u64> = (0..1u64 << len).collect();
    let positions = |id: u64| -> Vec<usize> { (0..len).filter(|&p| (id >> p) & 1 == 1).collect() };
    ids.sort_by_key(|&id| (id.count_ones(), positions(id)));
    ids
}

impl FromStr for BooleanFunction {
    type Err = Error;

    /// Binary truth table (`"0001"`), or hex with a `0x` prefix (`"0x1"` is
    /// the same 4-entry table). The length must be a power of two.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bits: String = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            let mut bits = String::new();
            for c in hex.chars() {
                let v = c.to_digit(16).ok_or_else(|| Error::MalformedTable(text.to_owned()))?;
                bits.push_str(&format!("{v:04b}"));
            }
            // Single hex digits may encode 1- or 2-bit tables written with leading zeros.
            bits
        } else {
            text.to_owned()
        };
        if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::MalformedTable(text.to_owned()));
        }
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::MalformedTable(text.to_owned()));
        }
        let arity = len.trailing_zeros() as usize;
        Self::new(arity, bits.chars().map(|c| c == '1').collect())
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_string())
    }
}

/// `+` when the number of ones in the table is even, `−` when odd.
pub fn parity(f: &BooleanFunction) -> Sign {
    Sign::from_odd(f.table().iter().fold(false, |acc, &b| acc ^ b))
}

pub fn is_constant(f: &BooleanFunction) -> bool {
    f.table().windows(2).all(|w| w[0] == w[1])
}

/// Index pair `(i, j)` naming the sum function `f_ij(x, y) = f_i(x) + f_j(y)` mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SumId {
    pub i: usize,
    pub j: usize,
}

impl SumId {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i > 3 {
            return Err(Error::FunctionIndex(i));
        }
        if j > 3 {
            return Err(Error::FunctionIndex(j));
        }
        Ok(Self { i, j })
    }

    pub fn all() -> Vec<Self> {
        (0..4).flat_map(|i| (0..4).map(move |j| Self { i, j })).collect()
    }

    pub fn function(self) -> BooleanFunction {
        sum_function(&[self.i, self.j]).expect("indices checked")
    }
}

impl fmt::Display for SumId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}{}", self.i, self.j)
    }
}

/// `f(x_1, …, x_m) = Σ f_{parts[t]}(x_t) mod 2` over one-bit functions.
pub fn sum_function(parts: &[usize]) -> Result<BooleanFunction> {
    let ones = parts.iter().map(|&p| BooleanFunction::one_bit(p)).collect::<Result<Vec<_>>>()?;
    let m = parts.len();
    let table = (0..1usize << m)
        .map(|idx| ones.iter().enumerate().fold(false, |acc, (t, g)| acc ^ g.eval((idx >> (m - 1 - t)) & 1)))
        .collect();
    BooleanFunction::new(m, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Argument {
    First,
    Second,
}

/// Constancy of `f_ij` in one argument: in the first iff `f_i` is constant,
/// in the second iff `f_j` is.
pub fn constant_in_argument(i: usize, j: usize, which: Argument) -> Result<bool> {
    let id = SumId::new(i, j)?;
    let g = match which {
        Argument::First => id.i,
        Argument::Second => id.j,
    };
    Ok(is_constant(&BooleanFunction::one_bit(g)?))
}

/// `{{f0, f3}, {f1, f2}}`, constant block first.
pub fn deutsch_partition() -> Partition<u64> {
    Partition::new(vec![vec![0, 3], vec![1, 2]], &[0, 1, 2, 3]).expect("valid partition")
}

/// Functions of arity `k` split by parity, `+` block first, labelled by id.
pub fn parity_partition(k: usize) -> Result<Partition<u64>> {
    let all = BooleanFunction::all(k)?;
    let mut blocks = vec![Vec::new(), Vec::new()];
    for f in &all {
        blocks[usize::from(parity(f).is_odd())].push(f.id().expect("small arity"));
    }
    let ground: Vec<u64> = all.iter().filter_map(BooleanFunction::id).collect();
    Partition::new(blocks, &ground)
}

/// Same as [`parity_partition`] but labelled by graded index.
pub fn parity_partition_graded(k: usize) -> Result<Partition<usize>> {
    let order = graded_order(k);
    let by_id = parity_partition(k)?;
    Ok(by_id.map(|id| order.iter().position(|o| o == id).expect("present")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Problem {
    D1,
    D2,
    D3,
    D4,
}

impl Problem {
    pub const ALL: [Problem; 4] = [Problem::D1, Problem::D2, Problem::D3, Problem::D4];

    /// Classical predicate on `f_ij`.
    pub fn holds(self, id: SumId) -> bool {
        let first = constant_in_argument(id.i, id.j, Argument::First).expect("valid id");
        let second = constant_in_argument(id.i, id.j, Argument::Second).expect("valid id");
        match self {
            Problem::D1 => first,
            Problem::D2 => second,
            Problem::D3 => first != second,
            Problem::D4 => first == second,
        }
    }

    pub fn number(self) -> usize {
        match self {
            Problem::D1 => 1,
            Problem::D2 => 2,
            Problem::D3 => 3,
            Problem::D4 => 4,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Problem::D1 => "constant in the first argument",
            Problem::D2 => "constant in the second argument",
            Problem::D3 => "constant in exactly one argument",
            Problem::D4 => "constant in both arguments or in neither",
        }
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D1" | "1" => Ok(Problem::D1),
            "D2" | "2" => Ok(Problem::D2),
            "D3" | "3" => Ok(Problem::D3),
            "D4" | "4" => Ok(Problem::D4),
            _ => Err(Error::UnknownProblem(s.to_owned())),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.number())
    }
}

/// Partition of the sixteen sum functions by the problem's predicate;
/// block 0 holds the functions for which it is true.
pub fn decision_partition(problem: Problem) -> Partition<SumId> {
    let ground = SumId::all();
    let (yes, no): (Vec<SumId>, Vec<SumId>) = ground.iter().partition(|&&id| problem.holds(id));
    Partition::new(vec![yes, no], &ground).expect("predicate split is a partition")
}

fn ids(pairs: &[(usize, usize)]) -> Vec<SumId> {
    pairs.iter().map(|&(i, j)| SumId { i, j }).collect()
}

/// The block lists exactly as printed for each problem, true block first.
/// These are raw transcriptions and need not form a partition.
pub fn printed_decision_blocks(problem: Problem) -> [Vec<SumId>; 2] {
    match problem {
        Problem::D1 => [
            ids(&[(0, 0), (0, 1), (0, 2), (0, 3), (3, 0), (3, 1), (3, 2), (3, 3)]),
            ids(&[(1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 2), (3, 3)]),
        ],
        Problem::D2 => [
            ids(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 3), (1, 3), (2, 3), (3, 3)]),
            ids(&[(0, 1), (1, 1), (2, 1), (3, 1), (0, 2), (1, 2), (2, 2), (3, 2)]),
        ],
        Problem::D3 => [
            ids(&[(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]),
            ids(&[(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)]),
        ],
        Problem::D4 => [
            ids(&[(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)]),
            ids(&[(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]),
        ],
    }
}

/// Differences between a derived partition and its printed transcription.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionDiff {
    pub problem: Problem,
    /// Listed in both printed blocks.
    pub duplicated: Vec<SumId>,
    /// Listed in neither printed block.
    pub missing: Vec<SumId>,
    /// Listed once, but in the block the predicate does not select.
    pub misplaced: Vec<SumId>,
}

impl PartitionDiff {
    pub fn is_empty(&self) -> bool {
        self.duplicated.is_empty() && self.missing.is_empty() && self.misplaced.is_empty()
    }

    /// The one known transcription defect: the second D1 block repeats
    /// `f32, f33` where `f22, f23` belong.
    pub fn is_documented_typo(&self) -> bool {
        self.problem == Problem::D1
            && self.duplicated == ids(&[(3, 2), (3, 3)])
            && self.missing == ids(&[(2, 2), (2, 3)])
            && self.misplaced.is_empty()
    }
}

pub fn diff_against_printed(problem: Problem) -> PartitionDiff {
    let derived = decision_partition(problem);
    let printed = printed_decision_blocks(problem);
    let mut diff = PartitionDiff { problem, duplicated: vec![], missing: vec![], misplaced: vec![] };
    for id in SumId::all() {
        let in_blocks: Vec<usize> = (0..2).filter(|&b| printed[b].contains(&id)).collect();
        match in_blocks.as_slice() {
            [] => diff.missing.push(id),
            [b] if Some(*b) != derived.block_of(&id) => diff.misplaced.push(id),
            [_] => {}
            _ => diff.duplicated.push(id),
        }
    }
    diff
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2(id: u64) -> BooleanFunction {
        BooleanFunction::from_id(2, id).unwrap()
    }

    #[test]
    fn id_convention() {
        assert_eq!(f2(1).table_string(), "0001");
        assert_eq!(f2(2).table_string(), "0010");
        assert_eq!(BooleanFunction::one_bit(2).unwrap().table_string(), "10");
        assert_eq!("0001".parse::<BooleanFunction>().unwrap(), f2(1));
        assert_eq!("0x1".parse::<BooleanFunction>().unwrap(), f2(1));
        assert_eq!("0xe8".parse::<BooleanFunction>().unwrap().arity(), 3);
        assert!("0".parse::<BooleanFunction>().is_err());
        assert!("012".parse::<BooleanFunction>().is_err());
        assert!("000".parse::<BooleanFunction>().is_err());
        assert!("0xg".parse::<BooleanFunction>().is_err());
        assert!(BooleanFunction::from_id(2, 16).is_err());
        assert_eq!(BooleanFunction::one_bit(4).unwrap_err(), Error::FunctionIndex(4));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&f2(0)), Sign::Plus);
        assert_eq!(parity(&f2(1)), Sign::Minus);
        assert_eq!(parity(&f2(15)), Sign::Plus);
    }

    #[test]
    fn constancy_examples() {
        let g = |i| BooleanFunction::one_bit(i).unwrap();
        assert!(is_constant(&g(0)));
        assert!(!is_constant(&g(2)));
        assert!(is_constant(&g(3)));
        assert!(constant_in_argument(0, 1, Argument::First).unwrap());
        assert!(!constant_in_argument(1, 0, Argument::First).unwrap());
        assert!(!constant_in_argument(3, 2, Argument::Second).unwrap());
        assert_eq!(constant_in_argument(4, 0, Argument::First).unwrap_err(), Error::FunctionIndex(4));
    }

    #[test]
    fn deutsch_blocks() {
        let p = deutsch_partition();
        assert_eq!(p.blocks(), &[vec![0, 3], vec![1, 2]]);
        assert_eq!(parity_partition(1).unwrap(), p);
    }

    #[test]
    fn graded_numbering() {
        let order = graded_order(2);
        let tables: Vec<String> = order.iter().map(|&id| f2(id).table_string()).collect();
        assert_eq!(
            tables,
            [
                "0000", "0001", "0010", "0100", "1000", "0011", "0101", "1001", "0110", "1010", "1100", "0111", "1011",
                "1101", "1110", "1111"
            ]
        );
        assert_eq!(graded_order(1), [0, 1, 2, 3]);
        let f = BooleanFunction::from_graded_index(2, 4).unwrap();
        assert_eq!(f.table_string(), "1000");
        assert_eq!(f.graded_index().unwrap(), 4);
    }

    #[test]
    fn parity_blocks_two_bits() {
        let graded = parity_partition_graded(2).unwrap();
        assert_eq!(graded.blocks()[0], [0, 5, 6, 7, 8, 9, 10, 15]);
        assert_eq!(graded.blocks()[1], [1, 2, 3, 4, 11, 12, 13, 14]);
        let by_id = parity_partition(2).unwrap();
        assert_eq!(by_id.blocks()[0], [0, 3, 5, 6, 9, 10, 12, 15]);
        assert!(parity_partition(5).is_err());
    }

    #[test]
    fn sum_functions() {
        let f = SumId::new(1, 1).unwrap().function();
        assert_eq!(f.table_string(), "0110");
        assert_eq!(SumId::new(2, 3).unwrap().function().table_string(), "0011");
        assert_eq!(sum_function(&[1, 1, 1]).unwrap().table_string(), "01101001");
    }

    #[test]
    fn decision_blocks() {
        let d2 = decision_partition(Problem::D2);
        let mut expected = ids(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 3), (1, 3), (2, 3), (3, 3)]);
        expected.sort();
        assert_eq!(d2.blocks()[0], expected);
        let d4 = decision_partition(Problem::D4);
        assert_eq!(d4.blocks()[0], ids(&[(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)]));
        let d3 = decision_partition(Problem::D3);
        assert_eq!(d3.blocks()[0], d4.blocks()[1]);
        assert_eq!(d3.blocks()[1], d4.blocks()[0]);
    }

    #[test]
    fn printed_diffs() {
        let d1 = diff_against_printed(Problem::D1);
        assert_eq!(d1.duplicated, ids(&[(3, 2), (3, 3)]));
        assert_eq!(d1.missing, ids(&[(2, 2), (2, 3)]));
        assert!(d1.misplaced.is_empty());
        assert!(d1.is_documented_typo());
        for p in [Problem::D2, Problem::D3, Problem::D4] {
            assert!(diff_against_printed(p).is_empty(), "{p}");
        }
    }

    #[test]
    fn common_refinement_of_d1_d2() {
        let meet = decision_partition(Problem::D1).meet(&decision_partition(Problem::D2));
        assert_eq!(meet.len(), 4);
        assert!(meet.blocks().iter().all(|b| b.len() == 4));
    }

    #[test]
    fn parity_matches_d4() {
        for id in SumId::all() {
            let fi = BooleanFunction::one_bit(id.i).unwrap();
            let fj = BooleanFunction::one_bit(id.j).unwrap();
            let product_even = parity(&fi) == parity(&fj);
            assert_eq!(product_even, Problem::D4.holds(id), "{id}");
            // Every entry of f_i(x) xor f_j(y) is paired with another, so the
            // two-bit table itself always has even weight.
            assert_eq!(parity(&id.function()), Sign::Plus, "{id}");
        }
    }

    #[test]
    fn equal_parity_classes() {
        for k in 0..=3 {
            let p = parity_partition(k).unwrap();
            let half = 1usize << ((1 << k) - 1);
            assert!(p.blocks().iter().all(|b| b.len() == half), "k={k}");
        }
    }

    proptest! {
        #[test]
        fn parity_is_popcount(k in 0usize..=3, seed in any::<u64>()) {
            let id = seed % (1u64 << (1 << k));
            let f = BooleanFunction::from_id(k, id).unwrap();
            prop_assert_eq!(parity(&f).is_odd(), id.count_ones() % 2 == 1);
            prop_assert_eq!(f.id(), Some(id));
        }

        #[test]
        fn text_round_trip(k in 1usize..=6, seed in any::<u64>()) {
            let len = 1u32 << k;
            let id = if len == 64 { seed } else { seed % (1u64 << len) };
            let f = BooleanFunction::from_id(k, id).unwrap();
            prop_assert_eq!(f.table_string().parse::<BooleanFunction>().unwrap(), f);
        }
    }
}
