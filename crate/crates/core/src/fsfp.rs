//! Finite-sum and finite-product sets over sequences of positive integers.
//!
//! All values are [`BigUint`]; products of a handful of block sums leave the
//! 64-bit range quickly. Sets collapse duplicate values.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest list length accepted by the direct subset enumerations.
pub const MAX_ENUMERATION_LEN: usize = 24;

/// A finite sequence `x_1, ..., x_N` of positive integers, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequence(Vec<BigUint>);

impl Sequence {
    pub fn new(terms: Vec<BigUint>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::input("sequence must have at least one term"));
        }
        if let Some(pos) = terms.iter().position(Zero::is_zero) {
            return Err(Error::input(format!("sequence term x_{} is 0", pos + 1)));
        }
        Ok(Sequence(terms))
    }

    pub fn from_u64s(terms: &[u64]) -> Result<Self> {
        Self::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    /// `1, 2, ..., n`.
    pub fn naturals(n: usize) -> Result<Self> {
        Self::new((1..=n as u64).map(BigUint::from).collect())
    }

    /// `b, b^2, ..., b^n`.
    pub fn powers(base: u64, n: usize) -> Result<Self> {
        if base == 0 {
            return Err(Error::input("power base must be positive"));
        }
        let base = BigUint::from(base);
        let mut acc = BigUint::one();
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            acc *= &base;
            terms.push(acc.clone());
        }
        Self::new(terms)
    }

    /// `1, 2, 3, 5, 8, ...` (Fibonacci without the repeated 1).
    pub fn fibonacci(n: usize) -> Result<Self> {
        let (mut a, mut b) = (BigUint::one(), BigUint::from(2u32));
        let mut terms = Vec::with_capacity(n);
        for _ in 0..n {
            terms.push(a.clone());
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        Self::new(terms)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based access.
    pub fn get(&self, index: usize) -> Result<&BigUint> {
        if index == 0 || index > self.0.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.0.len(),
            });
        }
        Ok(&self.0[index - 1])
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.0
    }

    /// The first `len` terms.
    pub fn prefix(&self, len: usize) -> Result<Sequence> {
        if len == 0 || len > self.0.len() {
            return Err(Error::IndexOutOfRange {
                index: len,
                len: self.0.len(),
            });
        }
        Ok(Sequence(self.0[..len].to_vec()))
    }
}

/// A non-empty set of 1-based indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block(Vec<usize>);

impl Block {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::input("block must be non-empty"));
        }
        indices.sort_unstable();
        indices.dedup();
        if indices[0] == 0 {
            return Err(Error::input("block indices start at 1"));
        }
        Ok(Block(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn first_index(&self) -> usize {
        self.0[0]
    }

    pub fn last_index(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self, x: &Sequence) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for &i in &self.0 {
            total += x.get(i)?;
        }
        Ok(total)
    }
}

/// Blocks `H_1 < H_2 < ...` with `max H_i < min H_{i+1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem(Vec<Block>);

impl BlockSystem {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        for (i, pair) in blocks.windows(2).enumerate() {
            if pair[0].last_index() >= pair[1].first_index() {
                return Err(Error::BlockOrder {
                    first: i + 1,
                    second: i + 2,
                    max_prev: pair[0].last_index(),
                    min_next: pair[1].first_index(),
                });
            }
        }
        Ok(BlockSystem(blocks))
    }

    pub fn from_indices(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(blocks.into_iter().map(Block::new).collect::<Result<_>>()?)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index referenced, 0 for the empty system.
    pub fn max_index(&self) -> usize {
        self.0.last().map_or(0, Block::last_index)
    }

    pub fn to_indices(&self) -> Vec<Vec<usize>> {
        self.0.iter().map(|b| b.0.clone()).collect()
    }
}

fn check_terms(ys: &[BigUint]) -> Result<()> {
    if ys.is_empty() {
        return Err(Error::input("list must be non-empty"));
    }
    if let Some(pos) = ys.iter().position(Zero::is_zero) {
        return Err(Error::input(format!("term {} is 0", pos + 1)));
    }
    if ys.len() > MAX_ENUMERATION_LEN {
        return Err(Error::input(format!(
            "{} terms exceeds the enumeration limit of {MAX_ENUMERATION_LEN}",
            ys.len()
        )));
    }
    Ok(())
}

fn subset_fold(
    ys: &[BigUint],
    identity: BigUint,
    op: impl Fn(&BigUint, &BigUint) -> BigUint,
) -> Result<BTreeSet<BigUint>> {
    check_terms(ys)?;
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << ys.len()) {
        let mut acc = identity.clone();
        for (i, y) in ys.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = op(&acc, y);
            }
        }
        out.insert(acc);
    }
    Ok(out)
}

/// `{ sum of ys_i over i in F : F non-empty }`, by direct subset enumeration.
pub fn finite_sums(ys: &[BigUint]) -> Result<BTreeSet<BigUint>> {
    subset_fold(ys, BigUint::zero(), |a, b| a + b)
}

/// `{ product of ys_i over i in F : F non-empty }`, by direct subset enumeration.
pub fn finite_products(ys: &[BigUint]) -> Result<BTreeSet<BigUint>> {
    subset_fold(ys, BigUint::one(), |a, b| a * b)
}

/// `y_n = sum of x_t over t in H_n` for each block.
pub fn subsystem_sums(x: &Sequence, blocks: &BlockSystem) -> Result<Vec<BigUint>> {
    blocks.blocks().iter().map(|b| b.sum(x)).collect()
}

/// The finite-sum and finite-product sets of the values chosen so far,
/// maintained incrementally.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FsFpState {
    ys: Vec<BigUint>,
    fs: BTreeSet<BigUint>,
    fp: BTreeSet<BigUint>,
}

impl FsFpState {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Rebuild a state from stored parts, rejecting any that are not the
    /// FS / FP sets of `ys`.
    pub fn from_parts(
        ys: Vec<BigUint>,
        fs: BTreeSet<BigUint>,
        fp: BTreeSet<BigUint>,
    ) -> Result<Self> {
        if ys.is_empty() {
            if fs.is_empty() && fp.is_empty() {
                return Ok(Self::empty());
            }
            return Err(Error::Validation("empty ys with non-empty fs/fp".into()));
        }
        if finite_sums(&ys)? != fs {
            return Err(Error::Validation(
                "fs is not the finite-sum set of ys".into(),
            ));
        }
        if finite_products(&ys)? != fp {
            return Err(Error::Validation(
                "fp is not the finite-product set of ys".into(),
            ));
        }
        Ok(FsFpState { ys, fs, fp })
    }

    /// Fold [`FsFpState::extend`] over `ys` from the empty state.
    pub fn of(ys: &[BigUint]) -> Result<Self> {
        if ys.is_empty() {
            return Err(Error::input("list must be non-empty"));
        }
        let mut st = Self::empty();
        for y in ys {
            st.push(y.clone())?;
        }
        Ok(st)
    }

    /// `fs' = fs + {y} + (fs + y)`, `fp' = fp + {y} + (fp * y)`.
    pub fn extend(&self, y: BigUint) -> Result<Self> {
        let mut next = self.clone();
        next.push(y)?;
        Ok(next)
    }

    pub fn push(&mut self, y: BigUint) -> Result<()> {
        if y.is_zero() {
            return Err(Error::input("appended value must be positive"));
        }
        let sums: Vec<BigUint> = self.fs.iter().map(|t| t + &y).collect();
        let prods: Vec<BigUint> = self.fp.iter().map(|s| s * &y).collect();
        self.fs.extend(sums);
        self.fp.extend(prods);
        self.fs.insert(y.clone());
        self.fp.insert(y.clone());
        self.ys.push(y);
        Ok(())
    }

    pub fn ys(&self) -> &[BigUint] {
        &self.ys
    }

    pub fn fs(&self) -> &BTreeSet<BigUint> {
        &self.fs
    }

    pub fn fp(&self) -> &BTreeSet<BigUint> {
        &self.fp
    }

    pub fn depth(&self) -> usize {
        self.ys.len()
    }
}

/// Same as [`FsFpState::of`].
pub fn state_of(ys: &[BigUint]) -> Result<FsFpState> {
    FsFpState::of(ys)
}

#[cfg(test)]
pub(crate) fn big(v: u64) -> BigUint {
    BigUint::from(v)
}
