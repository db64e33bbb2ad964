//! Exact best responses, Nash verification and brute-force equilibrium
//! enumeration.
//!
//! Best responses search an agent's entire strategy space (every subset of
//! the other agents in UC, every subset of at most `k_i` agents in UBBC). The
//! search is a branch and bound over subsets in tie-break order, so it stays
//! exact: a subtree is skipped only when a valid lower bound proves it cannot
//! contain a strictly better strategy. The bound comes from degrees: if agent
//! `i` ends up adjacent to `d` agents, everybody else is at least two hops
//! away, so its usage cost is at least `d + 2(n - 1 - d)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::games::{Cost, CostVector, GameInstance, UbbcInstance};
use crate::graph::{
    all_pairs_distances, component_labels, has_parallel_declaration, induce_graph, Agent, Edge,
    Hops, StrategyProfile,
};
use crate::metrics::inequality_ratio;
use crate::{Error, Extended, Rational, Result};

/// A best (or improving) response for one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub strategy: Vec<Agent>,
    pub cost: Cost,
}

/// Agent `i`'s view of the game: everything except its own declarations.
struct Deviation {
    n: usize,
    agent: Agent,
    /// Adjacency among the other agents, edges touching `agent` removed.
    others: Vec<Vec<Agent>>,
    incoming: Vec<bool>,
    incoming_count: usize,
    candidates: Vec<Agent>,
    max_links: usize,
    price: Rational,
}

impl Deviation {
    fn new(inst: &GameInstance, profile: &StrategyProfile, agent: Agent) -> Self {
        let n = profile.n();
        let mut others = vec![Vec::new(); n];
        let mut incoming = vec![false; n];
        for j in (0..n).filter(|&j| j != agent) {
            for &l in profile.strategy(j) {
                if l == agent {
                    incoming[j] = true;
                } else {
                    others[j].push(l);
                    others[l].push(j);
                }
            }
        }
        for adj in &mut others {
            adj.sort_unstable();
            adj.dedup();
        }
        let incoming_count = incoming.iter().filter(|&&b| b).count();
        Deviation {
            n,
            agent,
            others,
            incoming,
            incoming_count,
            candidates: (0..n).filter(|&j| j != agent).collect(),
            max_links: inst.max_links(agent),
            price: inst.edge_price(),
        }
    }

    fn usage(&self, strategy: &[Agent]) -> Extended<u64> {
        let n = self.n;
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        dist[self.agent] = 0;
        for (j, &incoming) in self.incoming.iter().enumerate() {
            if incoming {
                dist[j] = 1;
                queue.push(j);
            }
        }
        for &j in strategy {
            if dist[j] == u32::MAX {
                dist[j] = 1;
                queue.push(j);
            }
        }
        let mut head = 0;
        let mut total = 0u64;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            total += u64::from(dist[v]);
            for &w in &self.others[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push(w);
                }
            }
        }
        if queue.len() + 1 < n {
            Extended::Infinite
        } else {
            Extended::Finite(total)
        }
    }

    fn cost(&self, strategy: &[Agent]) -> Cost {
        let build = self.price * Rational::from_integer(strategy.len() as i64);
        Extended::Finite(build) + self.usage(strategy).map(|u| Rational::from_integer(u as i64))
    }

    /// Lower bound on the cost of any size-`size` strategy whose chosen part
    /// already reaches `covered` neighbours, with `remaining` picks left.
    fn bound(&self, size: usize, covered: usize, remaining: usize) -> Rational {
        let reach = (covered + remaining).min(self.n - 1);
        let usage = 2 * (self.n - 1) - reach;
        self.price * Rational::from_integer(size as i64) + Rational::from_integer(usage as i64)
    }

    /// Smallest bound over every strategy size `>= t`, indexed by `t`.
    fn floors(&self) -> Vec<Rational> {
        let mut floors: Vec<Rational> = (0..=self.max_links)
            .map(|t| self.bound(t, self.incoming_count, t))
            .collect();
        for t in (0..floors.len().saturating_sub(1)).rev() {
            floors[t] = floors[t].min(floors[t + 1]);
        }
        floors
    }
}

enum Goal {
    /// Minimum-cost strategy, ties to smaller size then lexicographic order.
    Best { current: Cost, best: Option<Response> },
    /// Any strategy strictly cheaper than `current`.
    Improve { current: Cost, found: Option<Response> },
}

impl Goal {
    fn prunes(&self, bound: Rational) -> bool {
        let bound = Extended::Finite(bound);
        match self {
            Goal::Best { best: Some(b), .. } => bound >= b.cost,
            Goal::Best { current, best: None } => bound > *current,
            Goal::Improve { current, .. } => bound >= *current,
        }
    }

    /// Returns true when the search can stop.
    fn offer(&mut self, cost: Cost, strategy: &[Agent]) -> bool {
        match self {
            Goal::Best { current, best } => {
                let accept = match best {
                    Some(b) => cost < b.cost,
                    None => cost <= *current,
                };
                if accept {
                    *best = Some(Response {
                        strategy: strategy.to_vec(),
                        cost,
                    });
                }
                false
            }
            Goal::Improve { current, found } => {
                if cost < *current {
                    *found = Some(Response {
                        strategy: strategy.to_vec(),
                        cost,
                    });
                    true
                } else {
                    false
                }
            }
        }
    }

    fn settled(&self, floor: Rational) -> bool {
        match self {
            Goal::Best { best: Some(b), .. } => b.cost <= Extended::Finite(floor),
            Goal::Best { best: None, .. } => false,
            Goal::Improve { current, found } => {
                found.is_some() || *current <= Extended::Finite(floor)
            }
        }
    }
}

fn search(dev: &Deviation, goal: &mut Goal) {
    let floors = dev.floors();
    let mut chosen = Vec::with_capacity(dev.max_links);
    for (size, &floor) in floors.iter().enumerate() {
        if goal.settled(floor) {
            return;
        }
        if goal.prunes(dev.bound(size, dev.incoming_count, size)) {
            continue;
        }
        if descend(dev, goal, size, 0, dev.incoming_count, &mut chosen) {
            return;
        }
    }
}

fn descend(
    dev: &Deviation,
    goal: &mut Goal,
    size: usize,
    start: usize,
    covered: usize,
    chosen: &mut Vec<Agent>,
) -> bool {
    if chosen.len() == size {
        let cost = dev.cost(chosen);
        return goal.offer(cost, chosen);
    }
    let remaining = size - chosen.len();
    for idx in start..=dev.candidates.len() - remaining {
        let j = dev.candidates[idx];
        let covered_j = covered + usize::from(!dev.incoming[j]);
        if goal.prunes(dev.bound(size, covered_j, remaining - 1)) {
            continue;
        }
        chosen.push(j);
        let stop = descend(dev, goal, size, idx + 1, covered_j, chosen);
        chosen.pop();
        if stop {
            return true;
        }
    }
    false
}

fn check_agent(profile: &StrategyProfile, i: Agent) -> Result<()> {
    if i >= profile.n() {
        return Err(Error::Structural(format!("agent {i} outside 0..{}", profile.n())));
    }
    Ok(())
}

/// A minimum-cost strategy for agent `i` given everybody else's strategies.
/// Ties go to the smallest strategy, then to the lexicographically smallest.
pub fn best_response(inst: &GameInstance, profile: &StrategyProfile, i: Agent) -> Result<Response> {
    inst.check_profile(profile)?;
    check_agent(profile, i)?;
    let dev = Deviation::new(inst, profile, i);
    let current = dev.cost(profile.strategy(i));
    let mut goal = Goal::Best {
        current,
        best: None,
    };
    search(&dev, &mut goal);
    match goal {
        Goal::Best { best: Some(b), .. } => Ok(b),
        _ => unreachable!("the current strategy is always in the search space"),
    }
}

/// A strategy strictly cheaper for agent `i` than its current one, if any.
pub fn improving_deviation(
    inst: &GameInstance,
    profile: &StrategyProfile,
    i: Agent,
) -> Result<Option<Response>> {
    inst.check_profile(profile)?;
    check_agent(profile, i)?;
    Ok(improving_unchecked(inst, profile, i))
}

fn improving_unchecked(inst: &GameInstance, profile: &StrategyProfile, i: Agent) -> Option<Response> {
    let dev = Deviation::new(inst, profile, i);
    let mut goal = Goal::Improve {
        current: dev.cost(profile.strategy(i)),
        found: None,
    };
    search(&dev, &mut goal);
    match goal {
        Goal::Improve { found, .. } => found,
        Goal::Best { .. } => unreachable!(),
    }
}

/// Weak Nash: no agent has a strictly cheaper unilateral deviation.
pub fn is_nash(inst: &GameInstance, profile: &StrategyProfile) -> Result<bool> {
    inst.check_profile(profile)?;
    Ok(is_nash_unchecked(inst, profile))
}

fn is_nash_unchecked(inst: &GameInstance, profile: &StrategyProfile) -> bool {
    (0..profile.n()).all(|i| improving_unchecked(inst, profile, i).is_none())
}

/// Parallel-free and diameter at most 2 (the structural part of the
/// diameter-2 criterion, without any budget condition).
pub fn parallel_free_diameter2(profile: &StrategyProfile) -> bool {
    !has_parallel_declaration(profile)
        && all_pairs_distances(&induce_graph(profile)).diameter() <= Extended::Finite(2)
}

/// Sufficient condition for a UBBC Nash equilibrium: no parallel
/// declarations, diameter at most 2, and every agent either spends its whole
/// budget or is already adjacent to everyone.
///
/// The budget condition is what makes the criterion sound when strategies
/// may use fewer than `k_i` links: an agent with spare budget and a
/// non-neighbour strictly gains by linking to it.
pub fn diameter2_sufficient(inst: &UbbcInstance, profile: &StrategyProfile) -> Result<bool> {
    GameInstance::Ubbc(inst.clone()).check_profile(profile)?;
    if has_parallel_declaration(profile) {
        return Ok(false);
    }
    let graph = induce_graph(profile);
    if all_pairs_distances(&graph).diameter() > Extended::Finite(2) {
        return Ok(false);
    }
    let n = profile.n();
    Ok((0..n).all(|i| profile.strategy(i).len() == inst.budget(i) || graph.degree(i) == n - 1))
}

/// A triple certifying that a UBBC profile is not an equilibrium: `z` links
/// to `x` through a bridge, and `y` sits on the far side of `z` without being
/// linked by it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub x: Agent,
    pub y: Agent,
    pub z: Agent,
    /// Component of `x` once `z` drops its link to `x`.
    pub component_x: Vec<Agent>,
    /// Everybody else except `z`.
    pub component_y: Vec<Agent>,
}

/// Searches for a cut witness, scanning `z` then `x` ascending and picking
/// the smallest admissible `y`. Only connected profiles can carry one.
pub fn cut_lemma_witness(inst: &UbbcInstance, profile: &StrategyProfile) -> Result<Option<CutWitness>> {
    GameInstance::Ubbc(inst.clone()).check_profile(profile)?;
    let graph = induce_graph(profile);
    if !graph.is_connected() {
        return Ok(None);
    }
    let bridges = graph.bridges();
    let n = profile.n();
    for z in 0..n {
        for &x in profile.strategy(z) {
            // Dropping the declaration only removes the edge if x did not declare it too.
            if profile.declares(x, z) {
                continue;
            }
            let edge = Edge::new(z, x)?;
            if bridges.binary_search(&edge).is_err() {
                continue;
            }
            let labels = component_labels(graph.adjacency(), Some(edge));
            let component_x: Vec<Agent> = (0..n).filter(|&v| labels[v] == labels[x]).collect();
            let component_y: Vec<Agent> = (0..n)
                .filter(|&v| v != z && labels[v] != labels[x])
                .collect();
            if let Some(&y) = component_y.iter().find(|&&y| !profile.declares(z, y)) {
                return Ok(Some(CutWitness {
                    x,
                    y,
                    z,
                    component_x,
                    component_y,
                }));
            }
        }
    }
    Ok(None)
}

/// Limits on brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCap {
    /// UC enumeration is refused above this many agents.
    pub max_uc_agents: usize,
    /// Any enumeration is refused above this many joint profiles.
    pub max_profiles: u64,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap {
            max_uc_agents: 5,
            max_profiles: 100_000_000,
        }
    }
}

/// Sound skips for UC enumeration. They are ignored for UBBC, where neither
/// argument holds (dropping a redundant declaration saves nothing, and one
/// agent cannot always reconnect the graph).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pruning {
    /// The owner of a doubly-declared edge strictly gains by dropping it.
    pub skip_parallel: bool,
    /// Any agent strictly gains by connecting a disconnected graph.
    pub skip_disconnected: bool,
}

impl Pruning {
    pub const NONE: Pruning = Pruning {
        skip_parallel: false,
        skip_disconnected: false,
    };

    pub const ALL: Pruning = Pruning {
        skip_parallel: true,
        skip_disconnected: true,
    };

    /// Whether `profile` survives pruning in `inst`.
    pub fn admits(&self, inst: &GameInstance, profile: &StrategyProfile) -> bool {
        if !matches!(inst, GameInstance::Uc(_)) {
            return true;
        }
        if self.skip_parallel && has_parallel_declaration(profile) {
            return false;
        }
        if self.skip_disconnected && !declarations_connect(profile) {
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub cap: EnumerationCap,
    pub pruning: Pruning,
}

impl EnumerationOptions {
    /// Default cap; both prunings on for UC, none for UBBC.
    pub fn for_game(inst: &GameInstance) -> Self {
        EnumerationOptions {
            cap: EnumerationCap::default(),
            pruning: match inst {
                GameInstance::Uc(_) => Pruning::ALL,
                GameInstance::Ubbc(_) => Pruning::NONE,
            },
        }
    }
}

fn declarations_connect(profile: &StrategyProfile) -> bool {
    let n = profile.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut components = n;
    for i in 0..n {
        for &j in profile.strategy(i) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    components == 1
}

/// Every strategy of agent `i`, as sorted lists in lexicographic order.
pub fn strategy_space(inst: &GameInstance, i: Agent) -> Vec<Vec<Agent>> {
    fn walk(
        candidates: &[Agent],
        start: usize,
        max: usize,
        prefix: &mut Vec<Agent>,
        out: &mut Vec<Vec<Agent>>,
    ) {
        out.push(prefix.clone());
        if prefix.len() == max {
            return;
        }
        for idx in start..candidates.len() {
            prefix.push(candidates[idx]);
            walk(candidates, idx + 1, max, prefix, out);
            prefix.pop();
        }
    }
    let candidates: Vec<Agent> = (0..inst.n()).filter(|&j| j != i).collect();
    let mut out = Vec::new();
    walk(&candidates, 0, inst.max_links(i), &mut Vec::new(), &mut out);
    out
}

/// Exact number of joint profiles, `Π_i |S_i|`.
pub fn profile_count(inst: &GameInstance) -> BigUint {
    let n = inst.n();
    (0..n)
        .map(|i| {
            let max = inst.max_links(i);
            (0..=max).fold(BigUint::zero(), |acc, t| acc + binomial(n - 1, t))
        })
        .product()
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn check_cap(inst: &GameInstance, cap: &EnumerationCap) -> Result<u64> {
    let count = profile_count(inst);
    if let GameInstance::Uc(g) = inst {
        if g.n() > cap.max_uc_agents {
            return Err(Error::Budget {
                count,
                reason: format!("UC enumeration is capped at n <= {}", cap.max_uc_agents),
            });
        }
    }
    match count.to_u64() {
        Some(c) if c <= cap.max_profiles => Ok(c),
        _ => Err(Error::Budget {
            count,
            reason: format!("cap is {} profiles", cap.max_profiles),
        }),
    }
}

/// Every joint profile exactly once, in canonical order: agent 0's strategy
/// is the most significant digit, each strategy space in lexicographic order.
#[derive(Debug, Clone)]
pub struct Profiles {
    spaces: Vec<Vec<Vec<Agent>>>,
    digits: Vec<usize>,
    /// Digits `< fixed` never advance (used to pin a partition).
    fixed: usize,
    exhausted: bool,
}

impl Profiles {
    fn new(spaces: Vec<Vec<Vec<Agent>>>, digits: Vec<usize>, fixed: usize) -> Self {
        Profiles {
            spaces,
            digits,
            fixed,
            exhausted: false,
        }
    }

    fn current(&self) -> StrategyProfile {
        let strategies = self
            .digits
            .iter()
            .zip(&self.spaces)
            .map(|(&d, space)| space[d].clone())
            .collect();
        StrategyProfile::from_normalised(self.spaces.len(), strategies)
    }

    fn advance(&mut self) {
        for pos in (self.fixed..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.spaces[pos].len() {
                return;
            }
            self.digits[pos] = 0;
        }
        self.exhausted = true;
    }
}

impl Iterator for Profiles {
    type Item = StrategyProfile;

    fn next(&mut self) -> Option<StrategyProfile> {
        if self.exhausted {
            return None;
        }
        let p = self.current();
        self.advance();
        Some(p)
    }
}

/// Streams all profiles of `inst`; filter with the usual iterator adapters.
pub fn enumerate_profiles(inst: &GameInstance, cap: &EnumerationCap) -> Result<Profiles> {
    check_cap(inst, cap)?;
    let n = inst.n();
    let spaces: Vec<_> = (0..n).map(|i| strategy_space(inst, i)).collect();
    Ok(Profiles::new(spaces, vec![0; n], 0))
}

/// One equilibrium with the data needed for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashEntry {
    pub profile: StrategyProfile,
    pub costs: CostVector,
    /// `None` when the ratio is undefined (some cost is infinite).
    pub ratio: Option<Rational>,
    pub diameter: Hops,
    pub parallel: bool,
    /// Review flags, e.g. `disconnected` or `isolated-agent`.
    pub notes: Vec<String>,
}

impl NashEntry {
    fn evaluate(inst: &GameInstance, profile: StrategyProfile) -> Self {
        let costs = inst.cost(&profile).expect("enumerated profiles are valid");
        let graph = induce_graph(&profile);
        let diameter = all_pairs_distances(&graph).diameter();
        let mut notes = Vec::new();
        if !graph.is_connected() {
            notes.push("disconnected".to_string());
        }
        if (0..profile.n()).any(|i| graph.degree(i) == 0) {
            notes.push("isolated-agent".to_string());
        }
        NashEntry {
            ratio: inequality_ratio(&costs).ok(),
            parallel: has_parallel_declaration(&profile),
            costs,
            diameter,
            profile,
            notes,
        }
    }
}

/// The enumerated equilibrium set and its Nash inequality ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub instance: GameInstance,
    /// Profiles in the full space.
    pub total_profiles: u64,
    /// Profiles that survived pruning and were checked.
    pub examined: u64,
    pub entries: Vec<NashEntry>,
    /// Maximum defined ratio; `None` when no equilibrium has a finite ratio.
    pub nir: Option<Rational>,
}

impl EquilibriumReport {
    pub fn nash_count(&self) -> usize {
        self.entries.len()
    }

    pub fn profiles(&self) -> impl Iterator<Item = &StrategyProfile> {
        self.entries.iter().map(|e| &e.profile)
    }
}

/// Brute-force equilibrium set. Partitions on agent 0's strategy run in
/// parallel; the merged list is sorted into canonical order.
pub fn enumerate_nash(inst: &GameInstance, options: &EnumerationOptions) -> Result<EquilibriumReport> {
    let total = check_cap(inst, &options.cap)?;
    let n = inst.n();
    let spaces: Vec<_> = (0..n).map(|i| strategy_space(inst, i)).collect();
    let partitions: Vec<(u64, Vec<NashEntry>)> = (0..spaces[0].len())
        .into_par_iter()
        .map(|first| {
            let mut digits = vec![0; n];
            digits[0] = first;
            let profiles = Profiles::new(spaces.clone(), digits, 1);
            let mut examined = 0;
            let mut found = Vec::new();
            for p in profiles {
                if !options.pruning.admits(inst, &p) {
                    continue;
                }
                examined += 1;
                if is_nash_unchecked(inst, &p) {
                    found.push(NashEntry::evaluate(inst, p));
                }
            }
            (examined, found)
        })
        .collect();
    let examined = partitions.iter().map(|(e, _)| e).sum();
    let mut entries: Vec<NashEntry> = partitions.into_iter().flat_map(|(_, f)| f).collect();
    entries.sort_by(|a, b| a.profile.cmp(&b.profile));
    let nir = entries.iter().filter_map(|e| e.ratio).max();
    Ok(EquilibriumReport {
        instance: inst.clone(),
        total_profiles: total,
        examined,
        entries,
        nir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::UcInstance;

    fn profile(n: usize, s: &[&[Agent]]) -> StrategyProfile {
        StrategyProfile::new(n, s.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn uc(n: usize, num: i64, den: i64) -> GameInstance {
        UcInstance::new(n, Rational::new(num, den)).unwrap().into()
    }

    fn ubbc(n: usize, k: usize) -> GameInstance {
        UbbcInstance::uniform(n, k).unwrap().into()
    }

    fn r(v: i64) -> Cost {
        Extended::Finite(Rational::from_integer(v))
    }

    /// Plain enumeration of every strategy with the documented tie-break.
    fn brute_best(inst: &GameInstance, p: &StrategyProfile, i: Agent) -> Response {
        let mut space = strategy_space(inst, i);
        space.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut best: Option<Response> = None;
        for s in space {
            let cost = inst.cost(&p.with_strategy(i, &s).unwrap()).unwrap().costs()[i];
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(Response { strategy: s, cost });
            }
        }
        best.unwrap()
    }

    #[test]
    fn best_response_connects_empty_graph() {
        let inst = uc(3, 1, 2);
        let br = best_response(&inst, &StrategyProfile::empty(3), 0).unwrap();
        assert_eq!(br.strategy, vec![1, 2]);
        assert_eq!(br.cost, r(3));
    }

    #[test]
    fn best_response_drops_expensive_edge() {
        let inst = uc(3, 3, 1);
        let br = best_response(&inst, &profile(3, &[&[1], &[2], &[0]]), 0).unwrap();
        assert_eq!(br.strategy, Vec::<Agent>::new());
        assert_eq!(br.cost, r(3));
    }

    #[test]
    fn star_center_prefers_empty_strategy() {
        let inst = ubbc(5, 1);
        let p = profile(5, &[&[], &[0], &[0], &[0], &[0]]);
        let br = best_response(&inst, &p, 0).unwrap();
        assert!(br.strategy.is_empty());
        assert_eq!(br.cost, r(4));
    }

    #[test]
    fn branch_and_bound_matches_plain_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let games = [uc(4, 1, 2), uc(5, 3, 2), uc(5, 3, 1), ubbc(5, 1), ubbc(6, 2), ubbc(5, 3)];
        for inst in &games {
            for _ in 0..60 {
                let p = inst.random_profile(&mut rng);
                for i in 0..inst.n() {
                    let fast = best_response(inst, &p, i).unwrap();
                    assert_eq!(fast, brute_best(inst, &p, i), "{inst} {p} agent {i}");
                    let improving = improving_deviation(inst, &p, i).unwrap();
                    let current = inst.cost(&p).unwrap().costs()[i];
                    assert_eq!(improving.is_some(), fast.cost < current);
                }
            }
        }
    }

    #[test]
    fn nash_examples() {
        // complete graph, single ownership, cheap edges
        let complete = profile(4, &[&[1, 2, 3], &[2, 3], &[3], &[]]);
        assert!(is_nash(&uc(4, 1, 2), &complete).unwrap());
        assert!(!is_nash(&uc(4, 3, 2), &complete).unwrap());
        assert!(!is_nash(&uc(4, 3, 1), &complete).unwrap());
    }

    #[test]
    fn doubled_star_is_not_an_equilibrium() {
        let inst = UbbcInstance::uniform(4, 1).unwrap();
        let p = profile(4, &[&[1], &[0], &[0], &[0]]);
        assert!(!diameter2_sufficient(&inst, &p).unwrap());
        // agent 1's declaration is redundant; relinking to a leaf saves one hop
        let dev = improving_deviation(&inst.into(), &p, 1).unwrap().unwrap();
        assert_eq!(dev.strategy, vec![2]);
        assert_eq!(dev.cost, r(4));
    }

    #[test]
    fn unspent_budget_defeats_structural_criterion() {
        let inst = UbbcInstance::uniform(4, 2).unwrap();
        let star = profile(4, &[&[], &[0], &[0], &[0]]);
        assert!(parallel_free_diameter2(&star));
        assert!(!diameter2_sufficient(&inst, &star).unwrap());
        assert!(!is_nash(&inst.into(), &star).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let cap = EnumerationCap::default();
        assert_eq!(enumerate_profiles(&uc(3, 1, 2), &cap).unwrap().count(), 64);
        assert_eq!(enumerate_profiles(&ubbc(4, 1), &cap).unwrap().count(), 256);
        let connected = enumerate_profiles(&ubbc(5, 1), &cap)
            .unwrap()
            .filter(|p| induce_graph(p).is_connected())
            .count();
        assert!(connected < 3125);
        assert_eq!(profile_count(&ubbc(5, 1)), BigUint::from(3125u32));
    }

    #[test]
    fn enumeration_order_is_canonical_and_unique() {
        let all: Vec<_> = enumerate_profiles(&ubbc(4, 1), &EnumerationCap::default())
            .unwrap()
            .collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], StrategyProfile::empty(4));
    }

    #[test]
    fn cap_errors_name_the_count() {
        let err = enumerate_nash(&uc(12, 1, 1), &EnumerationOptions::for_game(&uc(12, 1, 1)))
            .unwrap_err();
        match err {
            Error::Budget { count, .. } => assert_eq!(count, BigUint::from(2u32).pow(132)),
            other => panic!("unexpected {other:?}"),
        }
        let tight = EnumerationCap {
            max_uc_agents: 5,
            max_profiles: 100,
        };
        assert!(matches!(
            enumerate_profiles(&ubbc(4, 1), &tight),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn uc_two_agents() {
        let inst = uc(2, 1, 2);
        let report = enumerate_nash(&inst, &EnumerationOptions::for_game(&inst)).unwrap();
        assert_eq!(report.nash_count(), 2);
        assert_eq!(report.nir, Some(Rational::new(3, 2)));
    }

    #[test]
    fn uc_three_agents_cheap_edges() {
        let inst = uc(3, 1, 2);
        let report = enumerate_nash(&inst, &EnumerationOptions::for_game(&inst)).unwrap();
        assert_eq!(report.nash_count(), 8);
        assert_eq!(report.nir, Some(Rational::new(3, 2)));
        let unpruned = EnumerationOptions {
            pruning: Pruning::NONE,
            ..EnumerationOptions::for_game(&inst)
        };
        let full = enumerate_nash(&inst, &unpruned).unwrap();
        assert_eq!(full.entries, report.entries);
        assert_eq!(full.examined, 64);
    }

    #[test]
    fn cut_witness_on_bridged_cycle() {
        // z = 0 links x = 1; X = {1, 2, 3} is a triangle; Y = {4, 5}.
        let inst = UbbcInstance::uniform(6, 1).unwrap();
        let p = profile(6, &[&[1], &[2], &[3], &[1], &[0], &[4]]);
        let w = cut_lemma_witness(&inst, &p).unwrap().expect("witness");
        assert_eq!((w.z, w.x), (0, 1));
        assert_eq!(w.component_x, vec![1, 2, 3]);
        assert!(w.component_y.contains(&w.y));
        // every x -> y path passes z: removing z separates them
        let g = induce_graph(&p);
        let mut adj = g.adjacency().to_vec();
        for v in &mut adj {
            v.retain(|&u| u != w.z);
        }
        adj[w.z].clear();
        let reach = crate::graph::bfs(&adj, w.x, None);
        assert_eq!(reach[w.y], Extended::Infinite);
        assert!(!is_nash(&inst.into(), &p).unwrap());
    }

    #[test]
    fn no_witness_on_complete_graph() {
        let inst = UbbcInstance::uniform(4, 3).unwrap();
        let p = profile(4, &[&[1, 2, 3], &[2, 3], &[3], &[]]);
        assert_eq!(cut_lemma_witness(&inst, &p).unwrap(), None);
    }
}
