//! The sparse tree `S = ⋃ S_n` whose branch set is meager, and a witness
//! `(x, Π)` for that meagerness.
//!
//! Stages alternate. At an even stage every maximal node splits into two
//! extensions placed on one fresh level. At an odd stage no node branches:
//! each maximal node grows a zero-padded chain, and every nonempty set `F`
//! of maximal nodes is given its own level populated by exactly the chain
//! nodes of `F`. Nodes are stored as chains (origin word, padding rule,
//! occupied levels) and only turned into words when asked for.

use crate::error::{Error, Result};
use crate::pi::PiBound;
use crate::word::BitWord;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

/// Stages beyond this would need `2^16` subset levels.
pub const STAGE_CAP: usize = 7;
pub const DEFAULT_STAGES: usize = 6;

/// Where the level widths come from.
#[derive(Clone, Debug)]
pub enum TreeMode {
    /// Consecutive levels; the widths actually used become `π`.
    Induced,
    /// Search forward (below `horizon`) for levels whose `π` fits.
    Given { pi: PiBound, horizon: usize },
}

/// How a chain turns its origin into a node at level `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    /// `origin ⌢ 0^(k - |origin|)`.
    Zeros,
    /// `origin ⌢ 0^(k - |origin| - 1) ⌢ bit`.
    ZerosThen(bool),
}

impl fmt::Display for Padding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Padding::Zeros => f.write_str("zeros"),
            Padding::ZerosThen(b) => write!(f, "zeros-then-{}", u8::from(*b)),
        }
    }
}

/// Nodes added at one stage above one origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    /// First stage `S_stage` that contains these nodes.
    pub stage: usize,
    pub origin: BitWord,
    pub padding: Padding,
    /// Occupied levels, increasing.
    pub levels: Vec<usize>,
}

impl Chain {
    pub fn node(&self, level: usize) -> BitWord {
        match self.padding {
            Padding::Zeros => self.origin.padded_with_zeros(level),
            Padding::ZerosThen(bit) => {
                let mut w = self.origin.padded_with_zeros(level - 1);
                w.push(bit);
                w
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SparseTree {
    stages: usize,
    mode: TreeMode,
    /// `m_0, .., m_stages`; every node of `S_n` lies below level `m_n`.
    m: Vec<usize>,
    chains: Vec<Chain>,
    /// `π(k)` for `k < m_stages`: widths in induced mode, the given bound otherwise.
    pi_table: Vec<u64>,
}

impl SparseTree {
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn mode(&self) -> &TreeMode {
        &self.mode
    }

    /// Stage boundaries `m_0, .., m_stages`.
    pub fn stage_bounds(&self) -> &[usize] {
        &self.m
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn pi_table(&self) -> &[u64] {
        &self.pi_table
    }

    /// Adds a chain without any checking (for building modified trees).
    pub fn push_chain(&mut self, chain: Chain) {
        self.chains.push(chain);
    }

    /// Overrides `m_stage` without any checking.
    pub fn set_stage_bound(&mut self, stage: usize, value: usize) {
        self.m[stage] = value;
    }

    /// Distinct nodes of `S_stage`, sorted.
    pub fn nodes(&self, stage: usize) -> Vec<BitWord> {
        let mut nodes: Vec<BitWord> = self
            .chains
            .iter()
            .filter(|c| c.stage <= stage)
            .flat_map(|c| c.levels.iter().map(move |&k| c.node(k)))
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    /// Nodes of `S_stage` with no proper extension in `S_stage`, sorted.
    pub fn maximal_nodes(&self, stage: usize) -> Vec<BitWord> {
        maximal_of(&self.nodes(stage))
    }

    /// Number of nodes of `S_stages` at each level `0..m_stages`.
    pub fn widths(&self) -> Vec<u64> {
        let top = self.m[self.stages];
        let mut w = vec![0u64; top.max(1)];
        for v in self.nodes(self.stages) {
            if v.len() >= w.len() {
                w.resize(v.len() + 1, 0);
            }
            w[v.len()] += 1;
        }
        w
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct ChainView {
            stage: usize,
            origin: String,
            padding: String,
            levels: Vec<usize>,
        }
        let chains: Vec<ChainView> = self
            .chains
            .iter()
            .map(|c| ChainView {
                stage: c.stage,
                origin: c.origin.to_string(),
                padding: c.padding.to_string(),
                levels: c.levels.clone(),
            })
            .collect();
        let mode = match &self.mode {
            TreeMode::Induced => "induced".to_string(),
            TreeMode::Given { pi, .. } => format!("given:{pi}"),
        };
        serde_json::json!({
            "stages": self.stages,
            "mode": mode,
            "m": self.m,
            "chains": chains,
            "pi": self.pi_table,
        })
    }
}

fn maximal_of(nodes: &[BitWord]) -> Vec<BitWord> {
    nodes
        .iter()
        .filter(|x| !nodes.iter().any(|y| y.len() > x.len() && x.is_prefix_of(y)))
        .cloned()
        .collect()
}

/// Nonempty subsets of `0..d` as bitmasks, by size and then by mask value.
fn subsets_in_order(d: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (1..1u64 << d).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

struct LevelPicker<'a> {
    mode: &'a TreeMode,
}

impl LevelPicker<'_> {
    /// Least level `>= from` whose budget satisfies `accept`.
    fn pick(&self, from: usize, width: usize, accept: impl Fn(u64) -> bool) -> Result<usize> {
        match self.mode {
            TreeMode::Induced => Ok(from),
            TreeMode::Given { pi, horizon } => (from..*horizon)
                .find(|&k| accept(pi_u64(pi, k)))
                .ok_or(Error::PiSearchExhausted {
                    width,
                    from,
                    horizon: *horizon,
                }),
        }
    }
}

fn pi_u64(pi: &PiBound, k: usize) -> u64 {
    pi.eval_or_zero(k).to_u64().unwrap_or(u64::MAX)
}

/// Builds `S_0, .., S_stages` starting from `S_0 = {∅}` with `m_0 = 1`.
pub fn build_tree(stages: usize, mode: TreeMode) -> Result<SparseTree> {
    if stages > STAGE_CAP {
        return Err(Error::StageCap { stages, cap: STAGE_CAP });
    }
    let picker = LevelPicker { mode: &mode };
    let mut m = vec![1usize];
    let mut chains = vec![Chain {
        stage: 0,
        origin: BitWord::new(),
        padding: Padding::Zeros,
        levels: vec![0],
    }];
    let mut maximal = vec![BitWord::new()];

    for n in 0..stages {
        let d = maximal.len();
        let start = m[n];
        if n % 2 == 0 {
            let level = picker.pick(start, 2 * d, |p| p >= 2 * d as u64)?;
            let mut next = Vec::with_capacity(2 * d);
            for x in &maximal {
                for bit in [false, true] {
                    let chain = Chain {
                        stage: n + 1,
                        origin: x.clone(),
                        padding: Padding::ZerosThen(bit),
                        levels: vec![level],
                    };
                    next.push(chain.node(level));
                    chains.push(chain);
                }
            }
            next.sort_unstable();
            maximal = next;
            m.push(level + 1);
        } else {
            let mut levels: Vec<Vec<usize>> = vec![Vec::new(); d];
            let mut cursor = start;
            for mask in subsets_in_order(d) {
                let size = mask.count_ones() as usize;
                let k = picker.pick(cursor, size, |p| p == size as u64)?;
                for (i, lv) in levels.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        lv.push(k);
                    }
                }
                cursor = k + 1;
            }
            let mut next = Vec::with_capacity(d);
            for (x, lv) in maximal.iter().zip(levels) {
                let chain = Chain {
                    stage: n + 1,
                    origin: x.clone(),
                    padding: Padding::Zeros,
                    levels: lv,
                };
                next.push(chain.node(*chain.levels.last().expect("full subset is last")));
                chains.push(chain);
            }
            maximal = next;
            m.push(cursor);
        }
    }

    let mut tree = SparseTree {
        stages,
        mode,
        m,
        chains,
        pi_table: Vec::new(),
    };
    tree.pi_table = match &tree.mode {
        TreeMode::Induced => tree.widths(),
        TreeMode::Given { pi, .. } => (0..tree.m[stages]).map(|k| pi_u64(pi, k)).collect(),
    };
    Ok(tree)
}

/// `Br(S)`-relevant prefixes at a stage: the maximal nodes of `S_stage`.
pub fn enumerate_branch_prefixes(tree: &SparseTree, stage: usize) -> Result<Vec<BitWord>> {
    if stage > tree.stages {
        return Err(Error::MissingStage(stage));
    }
    Ok(tree.maximal_nodes(stage))
}

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub property: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub checks: Vec<CheckOutcome>,
}

impl TreeReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, property: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.property == property)
    }

    pub fn passed(&self, property: &str) -> bool {
        self.get(property).is_some_and(|c| c.passed)
    }
}

pub mod property {
    /// `S_n ⊆ 2^{< m_n}` (hence `2^{<= m_n}`) and `m` strictly increasing.
    pub const BOUNDED_HEIGHT: &str = "bounded-height";
    /// `S_n = S_k ∩ 2^{< m_n}` for `n <= k` (level `m_n` is the first level of stage `n+1`).
    pub const COHERENT_STAGES: &str = "coherent-stages";
    /// At most `π(k)` nodes at level `k`.
    pub const LEVEL_WIDTH: &str = "level-width";
    /// New nodes of `S_{n+1}` extend a maximal node of `S_n`.
    pub const EXTENDS_MAXIMAL: &str = "extends-maximal";
    /// Even stages: each maximal node has exactly two incomparable extensions.
    pub const EVEN_STAGE_SPLITS: &str = "even-stage-splits";
    /// Odd stages: extensions of a maximal node form a chain.
    pub const ODD_STAGE_CHAINS: &str = "odd-stage-chains";
    /// Odd stages: each nonempty set `F` of maximal nodes owns a level holding exactly `F`'s extensions.
    pub const ODD_STAGE_SUBSET_LEVELS: &str = "odd-stage-subset-levels";
    /// Odd stages: each maximal node gets `2^(d-1)` chain nodes.
    pub const ODD_STAGE_CHAIN_LENGTH: &str = "odd-stage-chain-length";
    /// `d_n = 2^⌈n/2⌉`.
    pub const MAXIMAL_COUNT: &str = "maximal-count";
    /// Odd stages: `m_{n+1} - m_n >= 2^{d_n} - 1`.
    pub const ODD_STAGE_GAP: &str = "odd-stage-gap";
    /// Maximal nodes are pairwise incomparable.
    pub const MAXIMAL_INCOMPARABLE: &str = "maximal-incomparable";
}

struct Checker {
    checks: Vec<CheckOutcome>,
}

impl Checker {
    fn record(&mut self, property: &'static str, failure: Option<String>) {
        self.checks.push(CheckOutcome {
            property,
            passed: failure.is_none(),
            counterexample: failure,
        });
    }
}

/// Checks every structural property of the tree from its raw chains.
pub fn verify_tree(tree: &SparseTree) -> TreeReport {
    use property::*;
    let stages = tree.stages;
    let m = &tree.m;
    let nodes: Vec<Vec<BitWord>> = (0..=stages).map(|s| tree.nodes(s)).collect();
    let maximal: Vec<Vec<BitWord>> = nodes.iter().map(|ns| maximal_of(ns)).collect();
    let mut c = Checker { checks: Vec::new() };

    c.record(BOUNDED_HEIGHT, {
        let mut fail = m.windows(2).position(|w| w[0] >= w[1]).map(|i| format!("m_{i} >= m_{}", i + 1));
        for s in 0..=stages {
            if fail.is_none() {
                fail = nodes[s]
                    .iter()
                    .find(|v| v.len() >= m[s])
                    .map(|v| format!("node {v} of S_{s} at or above m_{s} = {}", m[s]));
            }
        }
        fail
    });

    c.record(COHERENT_STAGES, {
        let mut fail = None;
        'outer: for s in 0..=stages {
            let lower: HashSet<&BitWord> = nodes[s].iter().collect();
            for (t, upper) in nodes.iter().enumerate().skip(s) {
                let cut: HashSet<&BitWord> = upper.iter().filter(|v| v.len() < m[s]).collect();
                if cut != lower {
                    fail = Some(format!("S_{s} differs from S_{t} cut at m_{s} = {}", m[s]));
                    break 'outer;
                }
            }
        }
        fail
    });

    c.record(LEVEL_WIDTH, {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for v in &nodes[stages] {
            *counts.entry(v.len()).or_default() += 1;
        }
        counts.iter().find_map(|(&k, &w)| {
            let bound = tree.pi_table.get(k).copied().unwrap_or(0);
            (w > bound).then(|| format!("level {k} has {w} nodes, pi = {bound}"))
        })
    });

    // owners[s][v] = index of the maximal node of S_s below new node v of S_{s+1}
    let mut extends_fail = None;
    let mut owned: Vec<Vec<(BitWord, usize)>> = Vec::new();
    for s in 0..stages {
        let old: HashSet<&BitWord> = nodes[s].iter().collect();
        let mut here = Vec::new();
        for v in nodes[s + 1].iter().filter(|v| !old.contains(v)) {
            match maximal[s].iter().position(|x| x.is_prefix_of(v) && x != v) {
                Some(i) => here.push((v.clone(), i)),
                None => {
                    extends_fail.get_or_insert_with(|| format!("node {v} of S_{} extends no maximal node of S_{s}", s + 1));
                }
            }
        }
        owned.push(here);
    }
    c.record(EXTENDS_MAXIMAL, extends_fail);

    let mut split_fail = None;
    let mut chain_fail = None;
    let mut subset_fail = None;
    let mut length_fail = None;
    let mut gap_fail = None;
    for s in 0..stages {
        let d = maximal[s].len();
        let mut by_owner: Vec<Vec<&BitWord>> = vec![Vec::new(); d];
        for (v, i) in &owned[s] {
            by_owner[*i].push(v);
        }
        if s % 2 == 0 {
            for (i, ext) in by_owner.iter().enumerate() {
                let ok = ext.len() == 2 && ext[0].is_incomparable_with(ext[1]);
                if !ok && split_fail.is_none() {
                    split_fail = Some(format!(
                        "maximal node {} of S_{s} has {} extensions in S_{}",
                        maximal[s][i],
                        ext.len(),
                        s + 1
                    ));
                }
            }
            continue;
        }
        for (i, ext) in by_owner.iter().enumerate() {
            let is_chain = ext.iter().all(|a| ext.iter().all(|b| a.is_prefix_of(b) || b.is_prefix_of(a)));
            if !is_chain && chain_fail.is_none() {
                chain_fail = Some(format!("extensions of {} in S_{} branch", maximal[s][i], s + 1));
            }
            if d < 64 && ext.len() != 1usize << (d - 1) && length_fail.is_none() {
                length_fail = Some(format!(
                    "{} has {} chain nodes in S_{}, expected {}",
                    maximal[s][i],
                    ext.len(),
                    s + 1,
                    1usize << (d - 1)
                ));
            }
        }
        // mask of owners per level, valid only if each owner appears once
        let mut per_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, i) in &owned[s] {
            per_level.entry(v.len()).or_default().push(*i);
        }
        let mut owned_masks: HashSet<u64> = HashSet::new();
        for (&k, owners) in &per_level {
            if k < m[s] || k >= m[s + 1] {
                continue;
            }
            let mask = owners.iter().fold(0u64, |acc, &i| acc | 1 << i);
            let distinct = mask.count_ones() as usize == owners.len();
            let pi_ok = match &tree.mode {
                TreeMode::Induced => true,
                TreeMode::Given { pi, .. } => pi_u64(pi, k) == owners.len() as u64,
            };
            if distinct && pi_ok {
                owned_masks.insert(mask);
            }
        }
        if d < 64 && subset_fail.is_none() {
            if let Some(missing) = (1..1u64 << d).find(|mask| !owned_masks.contains(mask)) {
                let members: Vec<String> = (0..d).filter(|i| missing >> i & 1 == 1).map(|i| maximal[s][i].to_string()).collect();
                subset_fail = Some(format!("no level of S_{} holds exactly {{{}}}", s + 1, members.join(", ")));
            }
        }
        let needed = if d < 64 { (1usize << d) - 1 } else { usize::MAX };
        if m[s + 1] - m[s] < needed && gap_fail.is_none() {
            gap_fail = Some(format!("m_{} - m_{s} = {} < 2^{d} - 1", s + 1, m[s + 1] - m[s]));
        }
    }
    c.record(EVEN_STAGE_SPLITS, split_fail);
    c.record(ODD_STAGE_CHAINS, chain_fail);
    c.record(ODD_STAGE_SUBSET_LEVELS, subset_fail);
    c.record(ODD_STAGE_CHAIN_LENGTH, length_fail);

    c.record(MAXIMAL_COUNT, {
        (0..=stages).find_map(|s| {
            let expected = 1usize << s.div_ceil(2);
            (maximal[s].len() != expected).then(|| format!("d_{s} = {}, expected {expected}", maximal[s].len()))
        })
    });
    c.record(ODD_STAGE_GAP, gap_fail);

    c.record(MAXIMAL_INCOMPARABLE, {
        (0..=stages).find_map(|s| {
            let mx = &maximal[s];
            (0..mx.len())
                .flat_map(|i| (i + 1..mx.len()).map(move |j| (i, j)))
                .find(|&(i, j)| !mx[i].is_incomparable_with(&mx[j]))
                .map(|(i, j)| format!("{} and {} in S_{s}", mx[i], mx[j]))
        })
    });

    TreeReport { checks: c.checks }
}

/// `x` restricted to one block, and the restrictions it must avoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBlock {
    /// `n`: this block sits at `k_n = m_{2n+1}`.
    pub index: usize,
    pub start: usize,
    pub len: usize,
    pub bits: BitWord,
    /// `y_i ↾ block` for the maximal chain tops `y_i` of `S_{2n+2}`.
    pub forbidden: Vec<BitWord>,
}

/// `(x, Π)` such that no branch of the tree agrees with `x` on a whole block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeagerWitness {
    /// `x`, materialized through the last block (zero outside blocks).
    pub x: BitWord,
    /// `k_n = m_{2n+1}` for every odd stage built.
    pub pi_levels: Vec<usize>,
    pub blocks: Vec<WitnessBlock>,
}

impl MeagerWitness {
    /// Replaces the bits of block `i` (and the matching part of `x`).
    pub fn overwrite_block(&mut self, i: usize, bits: &BitWord) {
        let block = &mut self.blocks[i];
        assert_eq!(bits.len(), block.len, "block length mismatch");
        for j in 0..block.len {
            self.x.set(block.start + j, bits.get(j));
        }
        block.bits = bits.clone();
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("witness serializes")
    }
}

/// Builds `x` block by block: on `[m_{2n+1}, m_{2n+1} + 2^{d-1})` it flips the
/// `i`-th chain top at the `i`-th position, so it differs from all of them.
/// When the block is not longer than `d` (only `d <= 2`) the least block
/// outside the forbidden set is used instead.
pub fn build_meager_witness(tree: &SparseTree) -> Result<MeagerWitness> {
    let pi_levels: Vec<usize> = (0..).map(|n| 2 * n + 1).take_while(|&s| s <= tree.stages).map(|s| tree.m[s]).collect();
    let mut blocks = Vec::new();
    let mut n = 0usize;
    while 2 * n + 2 <= tree.stages {
        let odd = 2 * n + 1;
        let xs = tree.maximal_nodes(odd);
        let ys = tree.maximal_nodes(odd + 1);
        let d = xs.len();
        let start = tree.m[odd];
        let len = 1usize
            .checked_shl(d as u32 - 1)
            .ok_or_else(|| Error::Witness(format!("block for d = {d} is too long")))?;
        let mut forbidden = Vec::with_capacity(d);
        for x in &xs {
            let above: Vec<&BitWord> = ys.iter().filter(|y| x.is_prefix_of(y)).collect();
            let [y] = above.as_slice() else {
                return Err(Error::Witness(format!("{x} has {} maximal extensions in S_{}", above.len(), odd + 1)));
            };
            if y.len() < start + len {
                return Err(Error::Witness(format!(
                    "chain above {x} stops at level {} before block end {}",
                    y.len(),
                    start + len
                )));
            }
            forbidden.push(y.slice(start, start + len));
        }
        let bits = if len > d {
            let mut b = BitWord::zeros(len);
            for (i, f) in forbidden.iter().enumerate() {
                b.set(i, !f.get(i));
            }
            b
        } else {
            least_avoiding(len, &forbidden)
                .ok_or_else(|| Error::Witness(format!("every block of length {len} is forbidden")))?
        };
        blocks.push(WitnessBlock {
            index: n,
            start,
            len,
            bits,
            forbidden,
        });
        n += 1;
    }
    let total = blocks.last().map_or(0, |b| b.start + b.len);
    let mut x = BitWord::zeros(total);
    for b in &blocks {
        for j in 0..b.len {
            x.set(b.start + j, b.bits.get(j));
        }
    }
    Ok(MeagerWitness { x, pi_levels, blocks })
}

fn least_avoiding(len: usize, forbidden: &[BitWord]) -> Option<BitWord> {
    if len >= 64 {
        return None;
    }
    (0..1u64 << len)
        .map(|r| BitWord::from_rank_u64(r, len))
        .find(|cand| !forbidden.contains(cand))
}

/// True iff on every block, `x` differs from the restriction of every
/// maximal node of the corresponding even stage, as recomputed from `tree`.
pub fn verify_witness(tree: &SparseTree, witness: &MeagerWitness) -> bool {
    witness.blocks.iter().all(|b| {
        let odd = 2 * b.index + 1;
        if odd + 1 > tree.stages || witness.pi_levels.get(b.index) != Some(&tree.m[odd]) {
            return false;
        }
        let d = tree.maximal_nodes(odd).len();
        let end = b.start + b.len;
        if b.start != tree.m[odd] || Some(b.len) != 1usize.checked_shl(d as u32 - 1) || witness.x.len() < end {
            return false;
        }
        let xb = witness.x.slice(b.start, end);
        tree.maximal_nodes(odd + 1)
            .iter()
            .all(|y| y.len() >= end && y.slice(b.start, end) != xb)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_zero_is_the_root() {
        let t = build_tree(0, TreeMode::Induced).unwrap();
        assert_eq!(t.maximal_nodes(0), vec![BitWord::new()]);
        assert!(verify_tree(&t).all_passed());
    }

    #[test]
    fn maximal_counts_through_stage_four() {
        let t = build_tree(4, TreeMode::Induced).unwrap();
        let d: Vec<usize> = (0..=4).map(|s| t.maximal_nodes(s).len()).collect();
        assert_eq!(d, vec![1, 2, 2, 4, 4]);
    }

    #[test]
    fn odd_stage_gap_for_two_nodes() {
        let t = build_tree(3, TreeMode::Induced).unwrap();
        let m = t.stage_bounds();
        assert!(m[2] - m[1] >= 3);
    }

    #[test]
    fn stage_cap() {
        assert!(matches!(build_tree(8, TreeMode::Induced), Err(Error::StageCap { .. })));
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets_in_order(3), vec![0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]);
    }

    #[test]
    fn given_pi_mode() {
        let pi = PiBound::custom("1+(k mod 16)", |k| Some((1 + k % 16).into()));
        let t = build_tree(5, TreeMode::Given { pi, horizon: 10_000 }).unwrap();
        let report = verify_tree(&t);
        assert!(report.all_passed(), "{report:?}");
        let w = build_meager_witness(&t).unwrap();
        assert!(verify_witness(&t, &w));
    }

    #[test]
    fn given_pi_mode_search_failure() {
        let pi = PiBound::constant(1);
        assert!(matches!(
            build_tree(3, TreeMode::Given { pi, horizon: 100 }),
            Err(Error::PiSearchExhausted { width: 2, .. })
        ));
    }

    #[test]
    fn witness_block_lengths() {
        let t = build_tree(5, TreeMode::Induced).unwrap();
        let w = build_meager_witness(&t).unwrap();
        assert_eq!(w.blocks.len(), 2);
        assert_eq!(w.blocks[0].len, 2);
        assert_eq!(w.blocks[1].len, 8);
        assert_eq!(w.blocks[1].forbidden.len(), 4);
        for b in &w.blocks {
            assert!(b.forbidden.iter().all(|f| f != &b.bits));
        }
        assert!(verify_witness(&t, &w));
    }

    #[test]
    fn witness_of_shallow_tree_is_vacuous() {
        let t = build_tree(1, TreeMode::Induced).unwrap();
        let w = build_meager_witness(&t).unwrap();
        assert!(w.blocks.is_empty());
        assert!(verify_witness(&t, &w));
    }
}
