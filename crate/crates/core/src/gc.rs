//! Grassroots cryptocurrencies: per-minter coin bags, unary mint, binary
//! swap, and the conservation-of-money audit.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::agent::{AgentId, AgentSet};
use crate::dts::{Configuration, Transaction};
use crate::error::Error;
use crate::platform::{Bounds, Platform, Txn};
use crate::run::{replay_steps, Trace};
use crate::sim::Monitor;

/// A multiset of coins, as a count per minter. Zero counts are never
/// stored, so structural equality is multiset equality.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CoinBag {
    counts: BTreeMap<AgentId, u64>,
}

impl CoinBag {
    pub fn new() -> Self {
        CoinBag::default()
    }

    /// `k` coins minted by `minter`.
    pub fn of(minter: &AgentId, k: u64) -> Self {
        let mut bag = CoinBag::new();
        bag.add(minter, k);
        bag
    }

    pub fn from_counts<I: IntoIterator<Item = (AgentId, u64)>>(counts: I) -> Self {
        let mut bag = CoinBag::new();
        for (m, k) in counts {
            bag.add(&m, k);
        }
        bag
    }

    pub fn count(&self, minter: &AgentId) -> u64 {
        self.counts.get(minter).copied().unwrap_or(0)
    }

    /// Number of coins, `|x|`.
    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn minters(&self) -> impl Iterator<Item = &AgentId> + '_ {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AgentId, u64)> + '_ {
        self.counts.iter().map(|(m, k)| (m, *k))
    }

    /// Whether every coin of the bag was minted by `minter`.
    pub fn only_from(&self, minter: &AgentId) -> bool {
        self.counts.keys().all(|m| m == minter)
    }

    /// Count-wise inclusion.
    pub fn is_subbag_of(&self, other: &CoinBag) -> bool {
        self.counts.iter().all(|(m, k)| other.count(m) >= *k)
    }

    pub fn add(&mut self, minter: &AgentId, k: u64) {
        if k > 0 {
            *self.counts.entry(minter.clone()).or_insert(0) += k;
        }
    }

    pub fn union(&self, other: &CoinBag) -> CoinBag {
        let mut out = self.clone();
        for (m, k) in other.iter() {
            out.add(m, k);
        }
        out
    }

    /// `self \ other`, or `None` when `other` is not a sub-bag.
    pub fn difference(&self, other: &CoinBag) -> Option<CoinBag> {
        let mut out = self.clone();
        for (m, k) in other.iter() {
            let have = out.counts.get_mut(m)?;
            if *have < k {
                return None;
            }
            *have -= k;
            if *have == 0 {
                out.counts.remove(m);
            }
        }
        Some(out)
    }

    /// All sub-bags of at most `max_size` coins, ordered by size and then
    /// by bag order.
    pub fn subbags(&self, max_size: usize) -> Vec<CoinBag> {
        let entries: Vec<(&AgentId, u64)> = self.iter().collect();
        let mut out = Vec::new();
        let mut current = CoinBag::new();
        collect_subbags(&entries, max_size as u64, &mut current, &mut out);
        out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        out
    }

    fn write_counts(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, k)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}:{k}")?;
        }
        Ok(())
    }

    /// Parses `minter:count,...` without braces; the empty string is the
    /// empty bag.
    pub fn parse_counts(s: &str) -> Result<CoinBag, Error> {
        let mut bag = CoinBag::new();
        let s = s.trim();
        if s.is_empty() {
            return Ok(bag);
        }
        let mut seen = BTreeSet::new();
        for item in s.split(',') {
            let (m, k) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("coin entry must be minter:count, got {item:?}")))?;
            let m = AgentId::new(m.trim())?;
            let k: u64 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coin count in {item:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("zero coin count in {item:?}")));
            }
            if !seen.insert(m.clone()) {
                return Err(Error::Parse(format!("minter {m} listed twice")));
            }
            bag.add(&m, k);
        }
        Ok(bag)
    }
}

fn collect_subbags(entries: &[(&AgentId, u64)], budget: u64, current: &mut CoinBag, out: &mut Vec<CoinBag>) {
    match entries.split_first() {
        None => out.push(current.clone()),
        Some(((minter, have), rest)) => {
            for k in 0..=(*have).min(budget) {
                if k > 0 {
                    current.counts.insert((*minter).clone(), k);
                }
                collect_subbags(rest, budget - k, current, out);
            }
            current.counts.remove(*minter);
        }
    }
}

impl fmt::Display for CoinBag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        self.write_counts(f)?;
        f.write_str("}")
    }
}

/// Bag text: `{p:2,q:1}`, `{}`, or the same without braces.
impl FromStr for CoinBag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let inner = match s.strip_prefix('{') {
            Some(rest) => rest
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(format!("unbalanced braces in {s:?}")))?,
            None => s,
        };
        CoinBag::parse_counts(inner)
    }
}

struct Counts<'a>(&'a CoinBag);

impl fmt::Display for Counts<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_counts(f)
    }
}

/// The two sides of a swap: `give` moves from the first participant to the
/// second, `take` the other way.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SwapSpec {
    give: CoinBag,
    take: CoinBag,
}

impl SwapSpec {
    /// Rejects `give = take`, which would leave both bags unchanged.
    pub fn new(give: CoinBag, take: CoinBag) -> Result<Self, Error> {
        if give == take {
            return Err(Error::NoOp(format!("swap of {give} for an identical bag")));
        }
        Ok(SwapSpec { give, take })
    }

    pub fn give(&self) -> &CoinBag {
        &self.give
    }

    pub fn take(&self) -> &CoinBag {
        &self.take
    }

    pub fn reversed(&self) -> SwapSpec {
        SwapSpec { give: self.take.clone(), take: self.give.clone() }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GcLabel {
    Mint { minter: AgentId, amount: u64 },
    /// Participants are stored in agent order; `spec` is relative to
    /// that order.
    Swap { p: AgentId, q: AgentId, spec: SwapSpec },
}

impl GcLabel {
    pub fn mint(minter: AgentId, amount: u64) -> Self {
        GcLabel::Mint { minter, amount }
    }

    pub fn swap(p: AgentId, q: AgentId, spec: SwapSpec) -> Result<Self, Error> {
        match p.cmp(&q) {
            core::cmp::Ordering::Less => Ok(GcLabel::Swap { p, q, spec }),
            core::cmp::Ordering::Greater => Ok(GcLabel::Swap { p: q, q: p, spec: spec.reversed() }),
            core::cmp::Ordering::Equal => Err(Error::InvalidParticipants(format!("{p} cannot swap with itself"))),
        }
    }
}

impl fmt::Display for GcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GcLabel::Mint { minter, amount } => write!(f, "mint {minter} {amount}"),
            GcLabel::Swap { p, q, spec } => {
                write!(f, "swap {p} {q} x={} y={}", Counts(&spec.give), Counts(&spec.take))
            }
        }
    }
}

impl FromStr for GcLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["mint", p, k] => {
                let amount = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad mint amount {k:?}")))?;
                Ok(GcLabel::mint(p.parse()?, amount))
            }
            ["swap", p, q, x, y] => {
                let x = x
                    .strip_prefix("x=")
                    .ok_or_else(|| Error::Parse(format!("expected x=..., got {x:?}")))?;
                let y = y
                    .strip_prefix("y=")
                    .ok_or_else(|| Error::Parse(format!("expected y=..., got {y:?}")))?;
                let spec = SwapSpec::new(CoinBag::parse_counts(x)?, CoinBag::parse_counts(y)?)?;
                GcLabel::swap(p.parse()?, q.parse()?, spec)
            }
            _ => Err(Error::Parse(format!("not a cryptocurrency label: {s:?}"))),
        }
    }
}

/// The cryptocurrency platform.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gc;

pub fn mint(p: &AgentId, k: u64, c: &Configuration<CoinBag>) -> Result<Txn<Gc>, Error> {
    Gc.instantiate(&GcLabel::mint(p.clone(), k), c)
}

pub fn swap(p: &AgentId, q: &AgentId, spec: SwapSpec, c: &Configuration<CoinBag>) -> Result<Txn<Gc>, Error> {
    Gc.instantiate(&GcLabel::swap(p.clone(), q.clone(), spec)?, c)
}

impl Platform for Gc {
    type State = CoinBag;
    type Label = GcLabel;

    fn tag(&self) -> &'static str {
        "gc"
    }

    fn initial_state(&self, _agent: &AgentId) -> CoinBag {
        CoinBag::new()
    }

    fn instantiate(&self, label: &GcLabel, c: &Configuration<CoinBag>) -> Result<Txn<Gc>, Error> {
        match label {
            GcLabel::Mint { minter, amount } => {
                if *amount == 0 {
                    return Err(Error::Guard("mint amount must be positive".into()));
                }
                let bag = c.state(minter)?;
                let participants = AgentSet::single(minter.clone());
                let mut after = bag.clone();
                after.add(minter, *amount);
                Transaction::new(
                    label.clone(),
                    c.project(&participants)?,
                    Configuration::new([(minter.clone(), after)].into_iter().collect())?,
                )
            }
            GcLabel::Swap { p, q, spec } => {
                if p == q {
                    return Err(Error::InvalidParticipants(format!("{p} cannot swap with itself")));
                }
                if spec.give == spec.take {
                    return Err(Error::NoOp("swap of identical bags".into()));
                }
                let (cp, cq) = (c.state(p)?, c.state(q)?);
                let insufficient = |who: &AgentId, bag: &CoinBag| Error::Guard(format!("{who} does not hold {bag}"));
                let p_rest = cp.difference(&spec.give).ok_or_else(|| insufficient(p, &spec.give))?;
                let q_rest = cq.difference(&spec.take).ok_or_else(|| insufficient(q, &spec.take))?;
                let participants = AgentSet::pair(p.clone(), q.clone())?;
                let after = Configuration::new(
                    [(p.clone(), p_rest.union(&spec.take)), (q.clone(), q_rest.union(&spec.give))]
                        .into_iter()
                        .collect(),
                )?;
                Transaction::new(label.clone(), c.project(&participants)?, after)
            }
        }
    }

    fn enabled_labels(&self, c: &Configuration<CoinBag>, bounds: &Bounds) -> Vec<GcLabel> {
        let table = SwapTable::new(c, bounds);
        let mut out = Vec::with_capacity(table.total());
        for p in c.as_map().keys() {
            for k in 1..=bounds.max_mint {
                out.push(GcLabel::mint(p.clone(), k));
            }
        }
        for pair in &table.pairs {
            for x in &table.subbags[pair.p] {
                for y in table.compatible(pair.q, x) {
                    if x != y {
                        out.push(table.label(pair, x, y));
                    }
                }
            }
        }
        out
    }

    fn count_enabled(&self, c: &Configuration<CoinBag>, bounds: &Bounds) -> usize {
        SwapTable::new(c, bounds).total()
    }

    fn nth_enabled(&self, c: &Configuration<CoinBag>, bounds: &Bounds, n: usize) -> Option<GcLabel> {
        let table = SwapTable::new(c, bounds);
        let mints = c.len() * bounds.max_mint as usize;
        if n < mints {
            let per = bounds.max_mint as usize;
            let p = c.as_map().keys().nth(n / per)?;
            return Some(GcLabel::mint(p.clone(), (n % per) as u64 + 1));
        }
        let mut rest = n - mints;
        for pair in &table.pairs {
            if rest >= pair.count {
                rest -= pair.count;
                continue;
            }
            for x in &table.subbags[pair.p] {
                let ys = table.compatible(pair.q, x);
                let skip_self = ys.iter().position(|y| y == x);
                let here = ys.len() - usize::from(skip_self.is_some());
                if rest >= here {
                    rest -= here;
                    continue;
                }
                let idx = match skip_self {
                    Some(s) if rest >= s => rest + 1,
                    _ => rest,
                };
                return Some(table.label(pair, x, &ys[idx]));
            }
        }
        None
    }

    fn refs(&self, state: &CoinBag) -> BTreeSet<AgentId> {
        state.minters().cloned().collect()
    }

    /// Give a member of `inside` one coin it could not have minted itself:
    /// an outsider's foreign coin if one is held, else a freshly minted one.
    fn interaction_hints(&self, c: &Configuration<CoinBag>, inside: &AgentSet) -> Vec<Vec<GcLabel>> {
        let mut hints = Vec::new();
        for p in inside {
            for (q, bag) in c.iter().filter(|(q, _)| !inside.contains(q)) {
                let gift = |m: &AgentId| {
                    SwapSpec::new(CoinBag::new(), CoinBag::of(m, 1)).and_then(|spec| GcLabel::swap(p.clone(), q.clone(), spec))
                };
                if let Some(m) = bag.minters().find(|m| !inside.contains(m)) {
                    if let Ok(label) = gift(m) {
                        hints.push(vec![label]);
                    }
                }
                if let Ok(label) = gift(q) {
                    hints.push(vec![GcLabel::mint(q.clone(), 1), label]);
                }
            }
        }
        hints
    }
}

struct PairEntry<'c> {
    p: usize,
    q: usize,
    p_id: &'c AgentId,
    q_id: &'c AgentId,
    count: usize,
}

/// Per-agent sub-bags and per-pair swap counts at one configuration.
struct SwapTable<'c> {
    mints: usize,
    subbags: Vec<Vec<CoinBag>>,
    pairs: Vec<PairEntry<'c>>,
    max_swap: usize,
}

impl<'c> SwapTable<'c> {
    fn new(c: &'c Configuration<CoinBag>, bounds: &Bounds) -> Self {
        let agents: Vec<(&AgentId, &CoinBag)> = c.iter().collect();
        let subbags: Vec<Vec<CoinBag>> = agents.iter().map(|(_, b)| b.subbags(bounds.max_swap_size)).collect();
        let mut table = SwapTable {
            mints: agents.len() * bounds.max_mint as usize,
            subbags,
            pairs: Vec::new(),
            max_swap: bounds.max_swap_size,
        };
        for p in 0..agents.len() {
            for q in p + 1..agents.len() {
                let mut count = 0;
                for x in &table.subbags[p] {
                    let ys = table.compatible(q, x);
                    count += ys.len() - usize::from(ys.contains(x));
                }
                table.pairs.push(PairEntry { p, q, p_id: agents[p].0, q_id: agents[q].0, count });
            }
        }
        table
    }

    /// Sub-bags of agent `q` that fit next to `x` within the swap bound.
    /// They form a prefix because sub-bags are sorted by size.
    fn compatible(&self, q: usize, x: &CoinBag) -> &[CoinBag] {
        let room = self.max_swap as u64 - x.size();
        let ys = &self.subbags[q];
        let end = ys.partition_point(|y| y.size() <= room);
        &ys[..end]
    }

    fn total(&self) -> usize {
        self.mints + self.pairs.iter().map(|p| p.count).sum::<usize>()
    }

    fn label(&self, pair: &PairEntry<'_>, x: &CoinBag, y: &CoinBag) -> GcLabel {
        GcLabel::Swap {
            p: pair.p_id.clone(),
            q: pair.q_id.clone(),
            spec: SwapSpec { give: x.clone(), take: y.clone() },
        }
    }
}

/// All mint and swap transactions enabled at `c` within `bounds`.
pub fn enumerate_enabled_gc(c: &Configuration<CoinBag>, bounds: &Bounds) -> Vec<Txn<Gc>> {
    crate::platform::enumerate_enabled(&Gc, c, bounds)
}

/// Economic reading of a swap from `p`'s side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SwapKind {
    /// `p` hands `q` back `q`-coins and receives nothing.
    Payment,
    /// Exchange of self-minted coins.
    MutualCredit,
    /// `p` returns `j` of `q`'s coins for `j` other coins.
    Redemption,
    Other,
}

impl fmt::Display for SwapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SwapKind::Payment => "payment",
            SwapKind::MutualCredit => "mutual-credit",
            SwapKind::Redemption => "redemption",
            SwapKind::Other => "other",
        })
    }
}

/// Classifies a swap where `p` gives `spec.give()` and `q` gives
/// `spec.take()`. Checked in order: payment, mutual credit, redemption.
pub fn classify_swap(spec: &SwapSpec, p: &AgentId, q: &AgentId) -> SwapKind {
    let (x, y) = (&spec.give, &spec.take);
    if !x.is_empty() && x.only_from(q) && y.is_empty() {
        SwapKind::Payment
    } else if !x.is_empty() && !y.is_empty() && x.only_from(p) && y.only_from(q) {
        SwapKind::MutualCredit
    } else if !x.is_empty() && x.only_from(q) && y.size() == x.size() && !y.only_from(q) {
        SwapKind::Redemption
    } else {
        SwapKind::Other
    }
}

/// Total number of `minter`'s coins held across `c`.
pub fn coin_count(c: &Configuration<CoinBag>, minter: &AgentId) -> u64 {
    c.states().map(|bag| bag.count(minter)).sum()
}

/// A minter whose coins in circulation differ from what it minted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationViolation {
    /// Index of the step after which the mismatch shows; `None` for the
    /// starting configuration.
    pub after_step: Option<usize>,
    pub minter: AgentId,
    pub in_circulation: u64,
    pub minted: u64,
}

fn first_mismatch(c: &Configuration<CoinBag>, minted: &BTreeMap<AgentId, u64>) -> Option<(AgentId, u64, u64)> {
    let mut minters: BTreeSet<&AgentId> = minted.keys().collect();
    for bag in c.states() {
        minters.extend(bag.minters());
    }
    minters.into_iter().find_map(|m| {
        let held = coin_count(c, m);
        let made = minted.get(m).copied().unwrap_or(0);
        (held != made).then(|| (m.clone(), held, made))
    })
}

/// Audits a computation given as raw transactions: each must match the
/// current states of its participants, but guards are not consulted, so a
/// forged transaction is caught by the count rather than rejected.
pub fn audit_conservation(
    initial: &Configuration<CoinBag>,
    transactions: &[Txn<Gc>],
) -> Result<Option<ConservationViolation>, Error> {
    let mut minted = BTreeMap::new();
    if let Some((minter, held, made)) = first_mismatch(initial, &minted) {
        return Ok(Some(ConservationViolation { after_step: None, minter, in_circulation: held, minted: made }));
    }
    let mut current = initial.clone();
    for (i, t) in transactions.iter().enumerate() {
        current = crate::dts::lift(t, &current)
            .map_err(|e| Error::Validation { index: i, reason: format!("{e}") })?
            .after()
            .clone();
        if let GcLabel::Mint { minter, amount } = t.label() {
            *minted.entry(minter.clone()).or_insert(0) += *amount;
        }
        if let Some((minter, held, made)) = first_mismatch(&current, &minted) {
            return Ok(Some(ConservationViolation { after_step: Some(i), minter, in_circulation: held, minted: made }));
        }
    }
    Ok(None)
}

/// Conservation of money over every prefix of a trace. The trace must be a
/// valid run; otherwise the validation failure is returned as an error.
pub fn check_conservation(trace: &Trace<CoinBag, GcLabel>) -> Result<Option<ConservationViolation>, Error> {
    let steps = replay_steps(&Gc, trace).map_err(|f| match f.step_index() {
        Some(index) => Error::Validation { index, reason: format!("{}", f.error) },
        None => f.error,
    })?;
    let transactions: Vec<Txn<Gc>> = steps.into_iter().map(|(t, _)| t).collect();
    audit_conservation(&trace.initial, &transactions)
}

/// Runtime monitor comparing coins in circulation with coins minted.
#[derive(Debug, Default)]
pub struct ConservationMonitor {
    minted: BTreeMap<AgentId, u64>,
}

impl Monitor<Gc> for ConservationMonitor {
    fn name(&self) -> &'static str {
        "conservation"
    }

    fn start(&mut self, initial: &Configuration<CoinBag>) -> Result<(), String> {
        self.minted.clear();
        report(first_mismatch(initial, &self.minted))
    }

    fn observe(&mut self, _index: usize, t: &Txn<Gc>, after: &Configuration<CoinBag>) -> Result<(), String> {
        if let GcLabel::Mint { minter, amount } = t.label() {
            *self.minted.entry(minter.clone()).or_insert(0) += *amount;
        }
        report(first_mismatch(after, &self.minted))
    }
}

fn report(mismatch: Option<(AgentId, u64, u64)>) -> Result<(), String> {
    match mismatch {
        None => Ok(()),
        Some((m, held, made)) => Err(format!("{held} coins of {m} in circulation but {made} minted")),
    }
}
