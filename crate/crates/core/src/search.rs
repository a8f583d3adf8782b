//! Bounded search for sum subsystems whose FS and FP sets stay inside a
//! target set.
//!
//! Stage `m + 1` accepts a block sum `y` exactly when `y`, every `t + y`
//! (`t` in FS of the chosen values) and every `s * y` (`s` in FP) lie in the
//! target. Candidates are tried in [canonical block order](CanonicalBlocks)
//! and the search backtracks chronologically when a stage has no admissible
//! block, so the first certificate found is the canonically first one.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsfp::{finite_products, finite_sums, Block, BlockSystem, FsFpState, Sequence};
use crate::setspec::SetSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Number of blocks sought.
    pub depth: usize,
    /// Largest sequence index a block may use.
    pub window: usize,
    pub max_block_size: usize,
    /// Candidate blocks tested before giving up.
    pub node_limit: u64,
}

impl SearchBudget {
    pub fn new(depth: usize, window: usize, max_block_size: usize, node_limit: u64) -> Self {
        SearchBudget {
            depth,
            window,
            max_block_size,
            node_limit,
        }
    }

    pub fn validate(&self, x: &Sequence) -> Result<()> {
        if self.depth == 0 || self.window == 0 || self.max_block_size == 0 || self.node_limit == 0 {
            return Err(Error::input("budget fields must all be positive"));
        }
        if self.window > x.len() {
            return Err(Error::input(format!(
                "window {} exceeds the sequence length {}",
                self.window,
                x.len()
            )));
        }
        Ok(())
    }
}

/// Blocks inside `(after, window]` in canonical order: by increasing max
/// index, then increasing size, then lexicographically.
#[derive(Debug, Clone)]
pub struct CanonicalBlocks {
    lo: usize,
    last_max: usize,
    max_size: usize,
    max: usize,
    size: usize,
    // the size - 1 indices below `max`
    rest: Vec<usize>,
    started: bool,
}

impl CanonicalBlocks {
    /// Blocks whose indices lie in `after + 1 ..= last_max`.
    pub fn new(after: usize, last_max: usize, max_size: usize) -> Self {
        CanonicalBlocks {
            lo: after + 1,
            last_max,
            max_size,
            max: after + 1,
            size: 1,
            rest: Vec::new(),
            started: false,
        }
    }

    fn next_rest(&mut self) -> bool {
        let k = self.rest.len();
        let top = self.max - 1;
        for i in (0..k).rev() {
            if self.rest[i] < top - (k - 1 - i) {
                self.rest[i] += 1;
                for j in i + 1..k {
                    self.rest[j] = self.rest[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Block {
        let mut idx = self.rest.clone();
        idx.push(self.max);
        Block::new(idx).expect("non-empty, positive")
    }
}

impl Iterator for CanonicalBlocks {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        if self.max_size == 0 || self.lo > self.last_max {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        if self.next_rest() {
            return Some(self.current());
        }
        let span = self.max - self.lo + 1;
        if self.size < self.max_size.min(span) {
            self.size += 1;
            self.rest = (self.lo..self.lo + self.size - 1).collect();
            return Some(self.current());
        }
        if self.max == self.last_max {
            self.max_size = 0;
            return None;
        }
        self.max += 1;
        self.size = 1;
        self.rest.clear();
        Some(self.current())
    }
}

/// `A` intersected with `t^{-1}A` for each `t` in `st.fs` and `s^{-1}A` for
/// each `s` in `st.fp`, built from scratch as a spec.
pub fn stage_constraint(st: &FsFpState, target: &SetSpec) -> Result<SetSpec> {
    if st.depth() == 0 {
        return Ok(target.clone());
    }
    let mut parts = vec![target.clone()];
    for t in st.fs() {
        parts.push(target.shift_preimage(t)?);
    }
    for s in st.fp() {
        parts.push(target.dilation_preimage(s)?);
    }
    Ok(SetSpec::and(parts))
}

/// Incremental form of [`stage_constraint`]: evaluates the same conditions
/// directly against the target and is refreshed with each accepted value.
#[derive(Debug, Clone)]
pub struct StageConstraint<'a> {
    target: &'a SetSpec,
    state: FsFpState,
}

impl<'a> StageConstraint<'a> {
    pub fn new(target: &'a SetSpec) -> Self {
        StageConstraint {
            target,
            state: FsFpState::empty(),
        }
    }

    pub fn admits(&self, y: &BigUint) -> Result<bool> {
        if !self.target.contains(y)? {
            return Ok(false);
        }
        for t in self.state.fs() {
            if !self.target.contains(&(t + y))? {
                return Ok(false);
            }
        }
        for s in self.state.fp() {
            if !self.target.contains(&(s * y))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn accept(&self, y: BigUint) -> Result<Self> {
        Ok(StageConstraint {
            target: self.target,
            state: self.state.extend(y)?,
        })
    }

    pub fn state(&self) -> &FsFpState {
        &self.state
    }

    pub fn to_spec(&self) -> Result<SetSpec> {
        stage_constraint(&self.state, self.target)
    }
}

/// A self-contained record of a successful search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// The prefix of the input sequence the blocks refer to.
    pub x: Sequence,
    pub blocks: BlockSystem,
    pub ys: Vec<BigUint>,
    pub fs: BTreeSet<BigUint>,
    pub fp: BTreeSet<BigUint>,
    pub spec_text: String,
    pub budget: Option<SearchBudget>,
    pub verified: bool,
}

impl Certificate {
    /// Assemble a certificate for `blocks` and run the verifier on it.
    pub fn build(
        x: &Sequence,
        blocks: BlockSystem,
        target: &SetSpec,
        budget: Option<SearchBudget>,
    ) -> Result<Self> {
        let x = x.prefix(blocks.max_index().max(1))?;
        let ys = crate::fsfp::subsystem_sums(&x, &blocks)?;
        let mut cert = Certificate {
            fs: finite_sums(&ys)?,
            fp: finite_products(&ys)?,
            x,
            blocks,
            ys,
            spec_text: target.to_string(),
            budget,
            verified: false,
        };
        cert.verified = verify_certificate(&cert)?;
        Ok(cert)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Box<Certificate>),
    /// Every block system inside the budget was ruled out.
    ExhaustedWithinBudget,
    /// The node limit stopped the search; nothing is claimed.
    NodeLimitReached,
}

impl SearchOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::ExhaustedWithinBudget => "exhausted",
            SearchOutcome::NodeLimitReached => "node_limit",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRun {
    pub outcome: SearchOutcome,
    /// Candidate blocks tested.
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    /// Explore the subtrees below each first-stage block in parallel. The
    /// result, node count included, is identical to the sequential run.
    #[cfg(feature = "parallel")]
    Parallel,
}

enum Step {
    Found,
    Exhausted,
    Limit,
}

struct Dfs<'a> {
    x: &'a Sequence,
    budget: SearchBudget,
    nodes: u64,
    chosen: Vec<Block>,
}

impl Dfs<'_> {
    /// Blocks for `stage` (0-based) must leave one index per later stage.
    fn last_max(&self, stage: usize) -> usize {
        self.budget
            .window
            .saturating_sub(self.budget.depth - stage - 1)
    }

    fn run(
        &mut self,
        stage: usize,
        after: usize,
        constraint: &StageConstraint<'_>,
    ) -> Result<Step> {
        for block in CanonicalBlocks::new(after, self.last_max(stage), self.budget.max_block_size) {
            if self.nodes == self.budget.node_limit {
                return Ok(Step::Limit);
            }
            self.nodes += 1;
            let y = block.sum(self.x)?;
            if !constraint.admits(&y)? {
                continue;
            }
            let max = block.last_index();
            self.chosen.push(block);
            if stage + 1 == self.budget.depth {
                return Ok(Step::Found);
            }
            let next = constraint.accept(y)?;
            match self.run(stage + 1, max, &next)? {
                Step::Exhausted => {
                    self.chosen.pop();
                }
                done => return Ok(done),
            }
        }
        Ok(Step::Exhausted)
    }
}

/// Depth-first search in canonical order, sequentially.
pub fn search_subsystem(
    x: &Sequence,
    target: &SetSpec,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    Ok(run_search(x, target, budget, Execution::Sequential)?.outcome)
}

pub fn run_search(
    x: &Sequence,
    target: &SetSpec,
    budget: SearchBudget,
    execution: Execution,
) -> Result<SearchRun> {
    budget.validate(x)?;
    let (step, nodes, chosen) = match execution {
        Execution::Sequential => {
            let mut dfs = Dfs {
                x,
                budget,
                nodes: 0,
                chosen: Vec::new(),
            };
            let step = dfs.run(0, 0, &StageConstraint::new(target))?;
            (step, dfs.nodes, dfs.chosen)
        }
        #[cfg(feature = "parallel")]
        Execution::Parallel => parallel::run(x, target, budget)?,
    };
    let outcome = match step {
        Step::Found => {
            let blocks = BlockSystem::new(chosen)?;
            let cert = Certificate::build(x, blocks, target, Some(budget))?;
            if !cert.verified {
                return Err(Error::Invariant(
                    "search produced a certificate that fails verification".into(),
                ));
            }
            SearchOutcome::Found(Box::new(cert))
        }
        Step::Exhausted => SearchOutcome::ExhaustedWithinBudget,
        Step::Limit => SearchOutcome::NodeLimitReached,
    };
    Ok(SearchRun { outcome, nodes })
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    use super::*;

    struct Sub {
        step: Result<Step>,
        nodes: u64,
        chosen: Vec<Block>,
    }

    /// Pulls first-stage blocks in chunks, explores each chunk's subtrees
    /// independently, then replays the sequential node accounting over the
    /// results in canonical order.
    pub(super) fn run(
        x: &Sequence,
        target: &SetSpec,
        budget: SearchBudget,
    ) -> Result<(Step, u64, Vec<Block>)> {
        let root = StageConstraint::new(target);
        let probe = Dfs {
            x,
            budget,
            nodes: 0,
            chosen: Vec::new(),
        };
        let mut firsts = CanonicalBlocks::new(0, probe.last_max(0), budget.max_block_size);
        let chunk = rayon::current_num_threads().max(1) * 4;

        let mut nodes = 0u64;
        loop {
            let group: Vec<Block> = firsts.by_ref().take(chunk).collect();
            if group.is_empty() {
                break;
            }
            // no subtree in this chunk may use more than what is left now
            let capped = SearchBudget {
                node_limit: budget.node_limit - nodes,
                ..budget
            };
            let subs: Vec<Sub> = group
                .par_iter()
                .map(|block| explore(x, &root, capped, block))
                .collect();
            for (block, sub) in group.iter().zip(subs) {
                if nodes == budget.node_limit {
                    return Ok((Step::Limit, nodes, Vec::new()));
                }
                nodes += 1;
                let remaining = budget.node_limit - nodes;
                match sub.step {
                    // first-stage test itself failed
                    Err(e) if sub.nodes == 0 => return Err(e),
                    Err(e) => {
                        if sub.nodes <= remaining {
                            return Err(e);
                        }
                        return Ok((Step::Limit, budget.node_limit, Vec::new()));
                    }
                    Ok(Step::Limit) => return Ok((Step::Limit, budget.node_limit, Vec::new())),
                    Ok(_) if sub.nodes > remaining => {
                        return Ok((Step::Limit, budget.node_limit, Vec::new()))
                    }
                    Ok(Step::Found) => {
                        let mut chosen = vec![block.clone()];
                        chosen.extend(sub.chosen);
                        return Ok((Step::Found, nodes + sub.nodes, chosen));
                    }
                    Ok(Step::Exhausted) => nodes += sub.nodes,
                }
            }
        }
        Ok((Step::Exhausted, nodes, Vec::new()))
    }

    /// `nodes` counts only nodes below the first-stage block. A first-stage
    /// block that is not admitted reports `Exhausted` with zero nodes.
    fn explore(
        x: &Sequence,
        root: &StageConstraint<'_>,
        budget: SearchBudget,
        block: &Block,
    ) -> Sub {
        let mut dfs = Dfs {
            x,
            budget,
            nodes: 0,
            chosen: Vec::new(),
        };
        let step = (|| {
            let y = block.sum(x)?;
            if !root.admits(&y)? {
                return Ok(Step::Exhausted);
            }
            if budget.depth == 1 {
                return Ok(Step::Found);
            }
            let next = root.accept(y)?;
            dfs.run(1, block.last_index(), &next)
        })();
        Sub {
            step,
            nodes: dfs.nodes,
            chosen: dfs.chosen,
        }
    }
}

/// Why a certificate failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    NoBlocks,
    YMismatch {
        index: usize,
        recorded: BigUint,
        recomputed: BigUint,
    },
    LengthMismatch {
        recorded: usize,
        recomputed: usize,
    },
    FsMismatch,
    FpMismatch,
    NotInTarget {
        value: BigUint,
    },
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyFailure::NoBlocks => write!(f, "certificate has no blocks"),
            VerifyFailure::YMismatch {
                index,
                recorded,
                recomputed,
            } => {
                write!(
                    f,
                    "y_{index} recorded as {recorded} but the block sums to {recomputed}"
                )
            }
            VerifyFailure::LengthMismatch {
                recorded,
                recomputed,
            } => {
                write!(f, "{recorded} y-values recorded for {recomputed} blocks")
            }
            VerifyFailure::FsMismatch => {
                write!(f, "recorded fs differs from the recomputed finite sums")
            }
            VerifyFailure::FpMismatch => {
                write!(f, "recorded fp differs from the recomputed finite products")
            }
            VerifyFailure::NotInTarget { value } => write!(f, "{value} is not in the target set"),
        }
    }
}

/// Recompute everything from `x`, the blocks and the spec text, and list
/// every discrepancy. Shares no state with the search.
pub fn verify_report(cert: &Certificate) -> Result<Vec<VerifyFailure>> {
    let target = crate::dsl::parse_spec(&cert.spec_text)?;
    let mut failures = Vec::new();
    if cert.blocks.is_empty() {
        failures.push(VerifyFailure::NoBlocks);
    }
    let xs = cert.x.terms();
    let mut ys = Vec::with_capacity(cert.blocks.len());
    for block in cert.blocks.blocks() {
        let mut y = BigUint::default();
        for &i in block.indices() {
            if i > xs.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: xs.len(),
                });
            }
            y += &xs[i - 1];
        }
        ys.push(y);
    }
    if ys.len() != cert.ys.len() {
        failures.push(VerifyFailure::LengthMismatch {
            recorded: cert.ys.len(),
            recomputed: ys.len(),
        });
    }
    for (i, (rec, re)) in cert.ys.iter().zip(&ys).enumerate() {
        if rec != re {
            failures.push(VerifyFailure::YMismatch {
                index: i + 1,
                recorded: rec.clone(),
                recomputed: re.clone(),
            });
        }
    }
    let (fs, fp) = if ys.is_empty() {
        (BTreeSet::new(), BTreeSet::new())
    } else {
        (finite_sums(&ys)?, finite_products(&ys)?)
    };
    if fs != cert.fs {
        failures.push(VerifyFailure::FsMismatch);
    }
    if fp != cert.fp {
        failures.push(VerifyFailure::FpMismatch);
    }
    let every: BTreeSet<&BigUint> = cert
        .ys
        .iter()
        .chain(&cert.fs)
        .chain(&cert.fp)
        .chain(&fs)
        .chain(&fp)
        .collect();
    for v in every {
        if !target.contains(v)? {
            failures.push(VerifyFailure::NotInTarget { value: v.clone() });
        }
    }
    Ok(failures)
}

pub fn verify_certificate(cert: &Certificate) -> Result<bool> {
    Ok(verify_report(cert)?.is_empty())
}

/// Refusal threshold for [`brute_force_subsystem`].
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of block systems of exactly `budget.depth` blocks inside the window.
pub fn count_block_systems(budget: &SearchBudget) -> u128 {
    let n = budget.window;
    // ways[p] = systems of the remaining depth using indices > p
    let mut ways = vec![1u128; n + 1];
    for _ in 0..budget.depth {
        let mut next = vec![0u128; n + 1];
        for (p, slot) in next.iter_mut().enumerate() {
            let mut total = 0u128;
            for (j, &rest) in ways.iter().enumerate().skip(p + 1) {
                let blocks: u128 = (1..=budget.max_block_size.min(j - p))
                    .map(|s| binom(j - p - 1, s - 1))
                    .sum();
                total = total.saturating_add(blocks.saturating_mul(rest));
            }
            *slot = total;
        }
        ways = next;
    }
    ways[0]
}

/// Exhaustive oracle: enumerates every block system within the budget in
/// canonical order and checks `FS ∪ FP ⊆ A` on each one from scratch.
/// Ignores the node limit.
pub fn brute_force_subsystem(
    x: &Sequence,
    target: &SetSpec,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    budget.validate(x)?;
    let count = count_block_systems(&budget);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::BudgetTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    // every admissible block, sorted into canonical order by key
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 1)];
    while let Some((prefix, from)) = stack.pop() {
        for i in from..=budget.window {
            let mut b = prefix.clone();
            b.push(i);
            if b.len() < budget.max_block_size {
                stack.push((b.clone(), i + 1));
            }
            all.push(b);
        }
    }
    all.sort_by(|a, b| (a.last(), a.len(), a.as_slice()).cmp(&(b.last(), b.len(), b.as_slice())));

    let mut chosen: Vec<usize> = Vec::new();
    if let Some(found) = enumerate(x, target, &budget, &all, &mut chosen)? {
        let blocks = BlockSystem::from_indices(found)?;
        return Ok(SearchOutcome::Found(Box::new(Certificate::build(
            x,
            blocks,
            target,
            Some(budget),
        )?)));
    }
    Ok(SearchOutcome::ExhaustedWithinBudget)
}

fn enumerate(
    x: &Sequence,
    target: &SetSpec,
    budget: &SearchBudget,
    all: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> Result<Option<Vec<Vec<usize>>>> {
    if chosen.len() == budget.depth {
        let systems: Vec<Vec<usize>> = chosen.iter().map(|&i| all[i].clone()).collect();
        let ys: Vec<BigUint> = systems
            .iter()
            .map(|b| b.iter().map(|&i| x.terms()[i - 1].clone()).sum())
            .collect();
        for v in finite_sums(&ys)?.iter().chain(finite_products(&ys)?.iter()) {
            if !target.contains(v)? {
                return Ok(None);
            }
        }
        return Ok(Some(systems));
    }
    let after = chosen.last().map_or(0, |&i| *all[i].last().unwrap());
    for (i, b) in all.iter().enumerate() {
        if b[0] <= after {
            continue;
        }
        chosen.push(i);
        if let Some(found) = enumerate(x, target, budget, all, chosen)? {
            return Ok(Some(found));
        }
        chosen.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;
    use crate::fsfp::big;

    fn budget(depth: usize, window: usize) -> SearchBudget {
        SearchBudget::new(depth, window, window, 1_000_000)
    }

    #[test]
    fn canonical_order_small() {
        let got: Vec<Vec<usize>> = CanonicalBlocks::new(0, 3, 3)
            .map(|b| b.indices().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1],
                vec![2],
                vec![1, 2],
                vec![3],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
        let capped: Vec<Vec<usize>> = CanonicalBlocks::new(2, 5, 2)
            .map(|b| b.indices().to_vec())
            .collect();
        assert_eq!(
            capped,
            vec![
                vec![3],
                vec![4],
                vec![3, 4],
                vec![5],
                vec![3, 5],
                vec![4, 5]
            ]
        );
        assert_eq!(CanonicalBlocks::new(5, 5, 3).count(), 0);
    }

    #[test]
    fn canonical_count_matches_binomials() {
        for after in 0..4 {
            for last in after + 1..10 {
                for cap in 1..6 {
                    let expect: u128 = (after + 1..=last)
                        .map(|j| {
                            (1..=cap.min(j - after))
                                .map(|s| binom(j - after - 1, s - 1))
                                .sum::<u128>()
                        })
                        .sum();
                    assert_eq!(
                        CanonicalBlocks::new(after, last, cap).count() as u128,
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn stage_constraint_examples() {
        let a = parse_spec("mod(6,0)").unwrap();
        assert_eq!(stage_constraint(&FsFpState::empty(), &a).unwrap(), a);

        let st = FsFpState::of(&[big(6)]).unwrap();
        let c = stage_constraint(&st, &a).unwrap();
        for v in 1..=1000 {
            assert_eq!(c.contains_u64(v).unwrap(), v % 6 == 0);
        }

        let st = FsFpState::of(&[big(1)]).unwrap();
        let c = stage_constraint(&st, &parse_spec("mod(2,0)").unwrap()).unwrap();
        assert!(c.members_up_to(1000).unwrap().is_empty());
    }

    #[test]
    fn worked_example_depth_two() {
        let x = Sequence::naturals(32).unwrap();
        let a = parse_spec("mod(6,0)").unwrap();
        let out = search_subsystem(&x, &a, budget(2, 32)).unwrap();
        let cert = out.certificate().expect("found");
        assert_eq!(cert.blocks.to_indices(), vec![vec![1, 2, 3], vec![6]]);
        assert_eq!(cert.ys, vec![big(6), big(6)]);
        let all: BTreeSet<BigUint> = cert.fs.union(&cert.fp).cloned().collect();
        assert_eq!(all, [6u64, 12, 36].iter().map(|&v| big(v)).collect());
        assert!(cert.verified);
    }

    #[test]
    fn trivial_targets() {
        let x = Sequence::naturals(32).unwrap();
        let none = search_subsystem(&x, &SetSpec::Empty, budget(3, 10)).unwrap();
        assert_eq!(none, SearchOutcome::ExhaustedWithinBudget);
        let all = search_subsystem(&x, &SetSpec::Full, budget(1, 32)).unwrap();
        assert_eq!(
            all.certificate().unwrap().blocks.to_indices(),
            vec![vec![1]]
        );
        assert_eq!(all.certificate().unwrap().ys, vec![big(1)]);
    }

    #[test]
    fn node_limit_is_distinct_outcome() {
        let x = Sequence::naturals(20).unwrap();
        let b = SearchBudget::new(2, 20, 20, 3);
        let run = run_search(&x, &SetSpec::Empty, b, Execution::Sequential).unwrap();
        assert_eq!(run.outcome, SearchOutcome::NodeLimitReached);
        assert_eq!(run.nodes, 3);
    }

    #[test]
    fn budget_validation() {
        let x = Sequence::naturals(5).unwrap();
        assert!(search_subsystem(&x, &SetSpec::Full, SearchBudget::new(1, 6, 1, 10)).is_err());
        assert!(search_subsystem(&x, &SetSpec::Full, SearchBudget::new(0, 5, 1, 10)).is_err());
        assert!(search_subsystem(&x, &SetSpec::Full, SearchBudget::new(1, 5, 0, 10)).is_err());
    }

    #[test]
    fn bitmap_domain_error_surfaces() {
        let x = Sequence::naturals(10).unwrap();
        let a = parse_spec("bits(1; 3)").unwrap();
        let err = search_subsystem(&x, &a, SearchBudget::new(2, 10, 10, 1000)).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }), "{err}");
    }

    #[test]
    fn verify_examples() {
        let x = Sequence::naturals(32).unwrap();
        let a = parse_spec("mod(6,0)").unwrap();
        let out = search_subsystem(&x, &a, budget(2, 32)).unwrap();
        let cert = out.certificate().unwrap().clone();
        assert!(verify_certificate(&cert).unwrap());

        let mut bad = cert.clone();
        bad.ys[1] = big(7);
        assert!(!verify_certificate(&bad).unwrap());
        let fails = verify_report(&bad).unwrap();
        assert!(fails.contains(&VerifyFailure::NotInTarget { value: big(7) }));

        let mut bad = cert.clone();
        bad.fp.insert(big(35));
        assert!(!verify_certificate(&bad).unwrap());

        let mut bad = cert;
        bad.x = Sequence::naturals(4).unwrap();
        assert!(matches!(
            verify_certificate(&bad),
            Err(Error::IndexOutOfRange { index: 6, len: 4 })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let x = Sequence::naturals(8).unwrap();
        let b = SearchBudget::new(2, 8, 8, 1_000_000);
        let a = parse_spec("mod(3,0)").unwrap();
        assert_eq!(
            brute_force_subsystem(&x, &a, b).unwrap(),
            search_subsystem(&x, &a, b).unwrap()
        );
        assert_eq!(
            brute_force_subsystem(&x, &SetSpec::Empty, b).unwrap(),
            SearchOutcome::ExhaustedWithinBudget
        );
        let one = brute_force_subsystem(&x, &SetSpec::Full, SearchBudget::new(1, 8, 8, 1)).unwrap();
        assert_eq!(
            one.certificate().unwrap().blocks.to_indices(),
            vec![vec![1]]
        );
    }

    #[test]
    fn brute_force_refuses_large_budgets() {
        let x = Sequence::naturals(64).unwrap();
        let err =
            brute_force_subsystem(&x, &SetSpec::Full, SearchBudget::new(4, 64, 8, 1)).unwrap_err();
        assert!(matches!(err, Error::BudgetTooLarge { .. }));
    }

    #[test]
    fn count_matches_enumeration() {
        // depth 2 over window 5, no cap: place 2 blocks, count by hand-enumeration
        let b = SearchBudget::new(2, 5, 5, 1);
        let mut n = 0u128;
        for m1 in 1u32..32 {
            for m2 in 1u32..32 {
                let max1 = 31 - m1.leading_zeros();
                let min2 = m2.trailing_zeros();
                if max1 < min2 {
                    n += 1;
                }
            }
        }
        assert_eq!(count_block_systems(&b), n);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let x = Sequence::naturals(24).unwrap();
        for (spec, depth, cap, limit) in [
            ("mod(6,0)", 4, 4, 100_000u64),
            ("mod(5,0)", 3, 3, 50),
            ("and(mod(2,0), not(range(1,20)))", 3, 3, 100_000),
            ("mod(7,3)", 3, 4, 100_000),
            ("none", 2, 3, 100_000),
            ("none", 2, 3, 40),
        ] {
            let a = parse_spec(spec).unwrap();
            let b = SearchBudget::new(depth, 24, cap, limit);
            let s = run_search(&x, &a, b, Execution::Sequential).unwrap();
            let p = run_search(&x, &a, b, Execution::Parallel).unwrap();
            assert_eq!(s, p, "{spec}");
        }
    }
}
