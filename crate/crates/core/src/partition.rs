//! Finite-depth IP / IP* experiments.
//!
//! IP*-ness can only ever be refuted at finite depth: a strictly increasing
//! `x_1 < ... < x_k` whose finite sums all avoid `A` shows that `A` misses a
//! depth-`k` FS set. Absence of such a witness within `(k, N)` proves
//! nothing about `A` beyond that bound.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fsfp::finite_sums;
use crate::setspec::SetSpec;

/// Strictly increasing terms together with their finite-sum set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsWitness {
    terms: Vec<BigUint>,
    fs: BTreeSet<BigUint>,
}

impl FsWitness {
    pub fn new(terms: Vec<BigUint>) -> Result<Self> {
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("witness terms must be strictly increasing"));
        }
        let fs = finite_sums(&terms)?;
        Ok(FsWitness { terms, fs })
    }

    pub fn from_u64s(terms: &[u64]) -> Result<Self> {
        Self::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn depth(&self) -> usize {
        self.terms.len()
    }

    pub fn fs(&self) -> &BTreeSet<BigUint> {
        &self.fs
    }

    /// Whether every finite sum lies in `target`.
    pub fn inside(&self, target: &SetSpec) -> Result<bool> {
        for v in &self.fs {
            if !target.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_window(k: usize, bound: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    if bound < k as u64 {
        return Err(Error::input(format!(
            "bound {bound} is smaller than depth {k}"
        )));
    }
    Ok(())
}

/// Lexicographically first `x_1 < ... < x_k <= bound` with
/// `FS(x) ⊆ target`, or `None` after a complete enumeration. Sums may exceed
/// `bound`; only the terms are windowed.
pub fn find_fs_witness(target: &SetSpec, k: usize, bound: u64) -> Result<Option<FsWitness>> {
    check_window(k, bound)?;
    let mut terms = Vec::with_capacity(k);
    if extend_witness(target, k, bound, 1, &BTreeSet::new(), &mut terms)? {
        return Ok(Some(FsWitness::new(
            terms.into_iter().map(BigUint::from).collect(),
        )?));
    }
    Ok(None)
}

fn extend_witness(
    target: &SetSpec,
    k: usize,
    bound: u64,
    from: u64,
    fs: &BTreeSet<BigUint>,
    terms: &mut Vec<u64>,
) -> Result<bool> {
    if terms.len() == k {
        return Ok(true);
    }
    // leave room for the remaining strictly larger terms
    let last = bound - (k - terms.len() - 1) as u64;
    for x in from..=last {
        let xb = BigUint::from(x);
        if !target.contains(&xb)? {
            continue;
        }
        let mut ok = true;
        for t in fs {
            if !target.contains(&(t + &xb))? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let mut next = fs.clone();
        next.extend(fs.iter().map(|t| t + &xb));
        next.insert(xb);
        terms.push(x);
        if extend_witness(target, k, bound, x + 1, &next, terms)? {
            return Ok(true);
        }
        terms.pop();
    }
    Ok(false)
}

/// A depth-`k` FS set inside the complement of `a`, i.e. a finite refutation
/// of `a` being IP*.
pub fn ip_star_refute(a: &SetSpec, k: usize, bound: u64) -> Result<Option<FsWitness>> {
    find_fs_witness(&a.clone().complement(), k, bound)
}

/// `(n x_1, ..., n x_k)`. If the witness avoids `n^{-1}A` then the scaled
/// witness avoids `A`, since `FS(n x) = n FS(x)`.
pub fn scale_witness(w: &FsWitness, n: &BigUint) -> Result<FsWitness> {
    if n.is_zero() {
        return Err(Error::input("scale factor must be positive"));
    }
    FsWitness::new(w.terms.iter().map(|t| t * n).collect())
}

/// A colouring of `1..=N` with colours `0..palette`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    palette: u32,
}

impl Coloring {
    /// `colors[v - 1]` is the colour of `v`.
    pub fn new(colors: Vec<u32>, palette: u32) -> Result<Self> {
        if palette == 0 {
            return Err(Error::input("palette must have at least one colour"));
        }
        if colors.is_empty() {
            return Err(Error::input("colouring must cover at least 1..=1"));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= palette) {
            return Err(Error::input(format!(
                "colour {c} outside palette of {palette}"
            )));
        }
        Ok(Coloring { colors, palette })
    }

    /// Palette size is one more than the largest colour used.
    pub fn from_colors(colors: Vec<u32>) -> Result<Self> {
        let palette = colors.iter().max().map_or(1, |m| m + 1);
        Self::new(colors, palette)
    }

    pub fn parity(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|v| (v % 2) as u32).collect(), 2)
    }

    pub fn constant(n: usize) -> Result<Self> {
        Self::new(vec![0; n], 1)
    }

    /// One `v color` pair per line covering each of `1..=N` exactly once.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<u64> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::input(format!("line {}: expected 'value colour'", ln + 1))
                })
            };
            let v = parse(it.next())?;
            let c = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::input(format!("line {}: trailing fields", ln + 1)));
            }
            pairs.push((v, c));
        }
        pairs.sort_unstable();
        let n = pairs.len();
        for (i, (v, _)) in pairs.iter().enumerate() {
            if *v != i as u64 + 1 {
                return Err(Error::input(format!(
                    "colouring must cover 1..={n} exactly once; problem at value {v}"
                )));
            }
        }
        let colors = pairs
            .into_iter()
            .map(|(_, c)| u32::try_from(c).map_err(|_| Error::input("colour index too large")))
            .collect::<Result<Vec<_>>>()?;
        Self::from_colors(colors)
    }

    pub fn bound(&self) -> usize {
        self.colors.len()
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn color(&self, v: usize) -> Option<u32> {
        v.checked_sub(1).and_then(|i| self.colors.get(i)).copied()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }
}

/// The lexicographically first strictly increasing `x_1 < ... < x_k` whose
/// terms and finite sums all lie in `1..=N` and share one colour.
pub fn hindman_finite(c: &Coloring, k: usize) -> Result<Option<(u32, FsWitness)>> {
    if k == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    let n = c.bound();
    let mut terms = Vec::with_capacity(k);
    for x1 in 1..=n {
        let color = c.colors[x1 - 1];
        terms.push(x1);
        if mono_extend(c, color, k, &[x1], x1, &mut terms) {
            let w = FsWitness::new(terms.iter().map(|&t| BigUint::from(t)).collect())?;
            return Ok(Some((color, w)));
        }
        terms.pop();
    }
    Ok(None)
}

fn mono_extend(
    c: &Coloring,
    color: u32,
    k: usize,
    fs: &[usize],
    sum: usize,
    terms: &mut Vec<usize>,
) -> bool {
    if terms.len() == k {
        return true;
    }
    let n = c.bound();
    let last = *terms.last().expect("seeded");
    // x + (sum of all previous terms) is the largest new sum
    for x in last + 1..=n.saturating_sub(sum) {
        if c.colors[x - 1] != color {
            continue;
        }
        if fs.iter().any(|&t| c.colors[t + x - 1] != color) {
            continue;
        }
        let mut next: Vec<usize> = fs.to_vec();
        next.extend(fs.iter().map(|&t| t + x));
        next.push(x);
        next.sort_unstable();
        next.dedup();
        terms.push(x);
        if mono_extend(c, color, k, &next, sum + x, terms) {
            return true;
        }
        terms.pop();
    }
    false
}

/// Every colouring of `1..=n` with `palette` colours, in lexicographic order.
pub fn all_colorings(n: usize, palette: u32) -> impl Iterator<Item = Coloring> {
    let total = (palette as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut colors = vec![0u32; n];
        for slot in colors.iter_mut().rev() {
            *slot = (code % palette as u64) as u32;
            code /= palette as u64;
        }
        Coloring { colors, palette }
    })
}

/// Smallest `N <= max_n` such that every `palette`-colouring of `1..=N` has a
/// monochromatic depth-`k` witness.
pub fn hindman_threshold(palette: u32, k: usize, max_n: usize) -> Result<Option<usize>> {
    if palette == 0 || k == 0 {
        return Err(Error::input("palette and depth must be positive"));
    }
    if (palette as f64).powi(max_n as i32) > 1e8 {
        return Err(Error::input(format!(
            "{palette}^{max_n} colourings is too many to enumerate"
        )));
    }
    for n in 1..=max_n {
        let mut all = true;
        for c in all_colorings(n, palette) {
            if hindman_finite(&c, k)?.is_none() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
