//! Idempotents, minimal one-sided ideals, the smallest ideal `K(S)` and the
//! idempotent order of a finite semigroup given by its Cayley table.
//!
//! On a finite set every ultrafilter is principal, so `βS = S` and the
//! ultrafilter product formula is only checkable in that instance; see
//! [`product_formula_check`].

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default largest order accepted by [`ideal_structure`]; ideals are found by
/// enumerating subsets.
pub const DEFAULT_ORDER_CAP: usize = 12;
/// Hard ceiling for the cap, from the 64-bit subset masks.
pub const MAX_ORDER_CAP: usize = 24;

type Mask = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemigroup {
    n: usize,
    table: Vec<usize>,
}

impl FiniteSemigroup {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// Unchecked; callers validate.
    fn from_flat(n: usize, table: Vec<usize>) -> Self {
        FiniteSemigroup { n, table }
    }
}

/// Check shape and range, then associativity in row-major `(a, b, c)` order,
/// reporting the first violating triple.
pub fn validate_table(rows: Vec<Vec<usize>>) -> Result<FiniteSemigroup> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Table("table is empty".into()));
    }
    let mut table = Vec::with_capacity(n * n);
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != n {
            return Err(Error::Table(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|&&v| v >= n) {
            return Err(Error::Table(format!(
                "row {i} has entry {v} outside 0..{n}"
            )));
        }
        table.extend(row);
    }
    let s = FiniteSemigroup::from_flat(n, table);
    if let Some((a, b, c)) = first_non_associative(&s) {
        return Err(Error::Associativity { a, b, c });
    }
    Ok(s)
}

fn first_non_associative(s: &FiniteSemigroup) -> Option<(usize, usize, usize)> {
    for a in 0..s.n {
        for b in 0..s.n {
            let ab = s.mul(a, b);
            for c in 0..s.n {
                if s.mul(ab, c) != s.mul(a, s.mul(b, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Text form: the order `n` on the first line, then `n` rows of `n`
/// whitespace-separated entries in `0..n`.
pub fn parse_table(text: &str) -> Result<FiniteSemigroup> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Table("missing order line".into()))?
        .parse()
        .map_err(|_| Error::Table("first line must be the order n".into()))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| {
                    Error::Table(format!("row {i}: '{t}' is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Table(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    validate_table(rows)
}

pub fn render_table(s: &FiniteSemigroup) -> String {
    let mut out = format!("{}\n", s.n);
    for row in s.rows() {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// `{ e : e e = e }`.
pub fn idempotents(s: &FiniteSemigroup) -> BTreeSet<usize> {
    (0..s.n).filter(|&e| s.mul(e, e) == e).collect()
}

fn to_set(m: Mask) -> BTreeSet<usize> {
    (0..64).filter(|i| m & (1 << i) != 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealStructure {
    pub minimal_left: Vec<BTreeSet<usize>>,
    pub minimal_right: Vec<BTreeSet<usize>>,
    /// The smallest two-sided ideal.
    pub kernel: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// All non-empty `I` with `S I ⊆ I` (left) or `I S ⊆ I` (right), as masks.
fn one_sided_ideals(s: &FiniteSemigroup, side: Side) -> Vec<Mask> {
    // image[a] = S a (left) or a S (right)
    let image: Vec<Mask> = (0..s.n)
        .map(|a| {
            (0..s.n).fold(0, |m, x| {
                let p = match side {
                    Side::Left => s.mul(x, a),
                    Side::Right => s.mul(a, x),
                };
                m | (1 << p)
            })
        })
        .collect();
    let mut out = Vec::new();
    for mask in 1..(1 as Mask) << s.n {
        let closed = (0..s.n)
            .filter(|&a| mask & (1 << a) != 0)
            .all(|a| image[a] & !mask == 0);
        if closed {
            out.push(mask);
        }
    }
    out
}

fn minimal_of(ideals: &[Mask]) -> Vec<Mask> {
    ideals
        .iter()
        .copied()
        .filter(|&i| !ideals.iter().any(|&j| j != i && j & !i == 0))
        .collect()
}

pub fn ideal_structure(s: &FiniteSemigroup) -> Result<IdealStructure> {
    ideal_structure_capped(s, DEFAULT_ORDER_CAP)
}

/// [`ideal_structure`] with an explicit order cap (at most [`MAX_ORDER_CAP`]).
pub fn ideal_structure_capped(s: &FiniteSemigroup, cap: usize) -> Result<IdealStructure> {
    let cap = cap.min(MAX_ORDER_CAP);
    if s.n > cap {
        return Err(Error::OrderCap { order: s.n, cap });
    }
    let left = minimal_of(&one_sided_ideals(s, Side::Left));
    let right = minimal_of(&one_sided_ideals(s, Side::Right));
    let k_left = left.iter().fold(0, |m, &l| m | l);
    let k_right = right.iter().fold(0, |m, &r| m | r);
    if k_left != k_right {
        return Err(Error::Invariant(format!(
            "union of minimal left ideals {:?} differs from union of minimal right ideals {:?}",
            to_set(k_left),
            to_set(k_right)
        )));
    }
    Ok(IdealStructure {
        minimal_left: left.into_iter().map(to_set).collect(),
        minimal_right: right.into_iter().map(to_set).collect(),
        kernel: to_set(k_left),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentOrder {
    pub idempotents: BTreeSet<usize>,
    /// Pairs `(p, q)` with `p <= q`, i.e. `p q = q p = p`.
    pub leq: BTreeSet<(usize, usize)>,
    pub minimal: BTreeSet<usize>,
}

impl IdempotentOrder {
    pub fn le(&self, p: usize, q: usize) -> bool {
        self.leq.contains(&(p, q))
    }
}

pub fn idempotent_order(s: &FiniteSemigroup) -> Result<IdempotentOrder> {
    idempotent_order_capped(s, DEFAULT_ORDER_CAP)
}

/// Also checks that the minimal idempotents are exactly those in `K(S)`.
pub fn idempotent_order_capped(s: &FiniteSemigroup, cap: usize) -> Result<IdempotentOrder> {
    let ideals = ideal_structure_capped(s, cap)?;
    let idem = idempotents(s);
    let mut leq = BTreeSet::new();
    for &p in &idem {
        for &q in &idem {
            if s.mul(p, q) == p && s.mul(q, p) == p {
                leq.insert((p, q));
            }
        }
    }
    let minimal: BTreeSet<usize> = idem
        .iter()
        .copied()
        .filter(|&e| !idem.iter().any(|&f| f != e && leq.contains(&(f, e))))
        .collect();
    let in_kernel: BTreeSet<usize> = idem.intersection(&ideals.kernel).copied().collect();
    if minimal != in_kernel {
        return Err(Error::Invariant(format!(
            "minimal idempotents {minimal:?} differ from idempotents in K(S) {in_kernel:?}"
        )));
    }
    Ok(IdempotentOrder {
        idempotents: idem,
        leq,
        minimal,
    })
}

/// Whether `L ∩ R` is a group under the restricted product. `L` and `R` must
/// be a minimal left and a minimal right ideal of `s`.
pub fn group_check(s: &FiniteSemigroup, l: &BTreeSet<usize>, r: &BTreeSet<usize>) -> Result<bool> {
    group_check_capped(s, l, r, DEFAULT_ORDER_CAP)
}

pub fn group_check_capped(
    s: &FiniteSemigroup,
    l: &BTreeSet<usize>,
    r: &BTreeSet<usize>,
    cap: usize,
) -> Result<bool> {
    let ideals = ideal_structure_capped(s, cap)?;
    if !ideals.minimal_left.contains(l) {
        return Err(Error::input(format!("{l:?} is not a minimal left ideal")));
    }
    if !ideals.minimal_right.contains(r) {
        return Err(Error::input(format!("{r:?} is not a minimal right ideal")));
    }
    Ok(is_group(s, &l.intersection(r).copied().collect()))
}

/// Non-empty, closed, with a two-sided identity and inverses inside `g`.
pub fn is_group(s: &FiniteSemigroup, g: &BTreeSet<usize>) -> bool {
    if g.is_empty() {
        return false;
    }
    let closed = g
        .iter()
        .all(|&a| g.iter().all(|&b| g.contains(&s.mul(a, b))));
    if !closed {
        return false;
    }
    let identity = g
        .iter()
        .copied()
        .find(|&e| g.iter().all(|&a| s.mul(e, a) == a && s.mul(a, e) == a));
    let Some(e) = identity else {
        return false;
    };
    g.iter()
        .all(|&a| g.iter().any(|&b| s.mul(a, b) == e && s.mul(b, a) == e))
}

/// Both sides of the ultrafilter product formula for principal ultrafilters
/// `p`, `q` and `A ⊆ S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProductFormula {
    /// `A ∈ p·q`, i.e. `p q ∈ A`.
    pub lhs: bool,
    /// `{ x : x⁻¹A ∈ q } ∈ p`, with `x⁻¹A = { y : x y ∈ A }`.
    pub rhs: bool,
}

impl ProductFormula {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn product_formula(
    s: &FiniteSemigroup,
    p: usize,
    q: usize,
    a: &BTreeSet<usize>,
) -> Result<ProductFormula> {
    if p >= s.n || q >= s.n || a.iter().any(|&x| x >= s.n) {
        return Err(Error::input("element outside the semigroup"));
    }
    let lhs = a.contains(&s.mul(p, q));
    // principal ultrafilter at q contains a set iff the set contains q
    let ultra_q = |set: &BTreeSet<usize>| set.contains(&q);
    let preimage =
        |x: usize| -> BTreeSet<usize> { (0..s.n).filter(|&y| a.contains(&s.mul(x, y))).collect() };
    let outer: BTreeSet<usize> = (0..s.n).filter(|&x| ultra_q(&preimage(x))).collect();
    let rhs = outer.contains(&p);
    Ok(ProductFormula { lhs, rhs })
}

/// Whether the two sides of [`product_formula`] agree.
pub fn product_formula_check(
    s: &FiniteSemigroup,
    p: usize,
    q: usize,
    a: &BTreeSet<usize>,
) -> Result<bool> {
    Ok(product_formula(s, p, q, a)?.agrees())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPair {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
    pub intersection: BTreeSet<usize>,
    pub is_group: bool,
}

/// Everything computable about one semigroup, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupReport {
    pub order: usize,
    pub idempotents: BTreeSet<usize>,
    pub ideals: IdealStructure,
    pub order_relation: IdempotentOrder,
    pub groups: Vec<GroupPair>,
    /// `(p, q, A)` triples checked and how many disagreed; only run when
    /// `2^n * n^2` stays small.
    pub product_formula_checked: u64,
    pub product_formula_failures: u64,
}

pub fn report(s: &FiniteSemigroup, cap: usize) -> Result<SemigroupReport> {
    let ideals = ideal_structure_capped(s, cap)?;
    let order_relation = idempotent_order_capped(s, cap)?;
    let mut groups = Vec::new();
    for l in &ideals.minimal_left {
        for r in &ideals.minimal_right {
            let intersection: BTreeSet<usize> = l.intersection(r).copied().collect();
            groups.push(GroupPair {
                is_group: is_group(s, &intersection),
                left: l.clone(),
                right: r.clone(),
                intersection,
            });
        }
    }
    let (mut checked, mut failures) = (0, 0);
    if s.n <= 8 {
        for mask in 0..(1 as Mask) << s.n {
            let a = to_set(mask);
            for p in 0..s.n {
                for q in 0..s.n {
                    checked += 1;
                    if !product_formula_check(s, p, q, &a)? {
                        failures += 1;
                    }
                }
            }
        }
    }
    Ok(SemigroupReport {
        order: s.n,
        idempotents: idempotents(s),
        ideals,
        order_relation,
        groups,
        product_formula_checked: checked,
        product_formula_failures: failures,
    })
}
