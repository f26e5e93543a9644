//! The law catalog and its checker.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Corpus, Section};
use crate::canon::{is_canonical, to_canonical};
use crate::error::{CeError, HarnessError};
use crate::pce::{combine_pce, eq_pce, is_well_founded_pce, unify_pce, ContextTuple, Pce};
use crate::psi::{psi, psi_apply, Psi};
use crate::semantics::apply_ce;
use crate::strategy::{is_well_founded_ce, Entry, Strategy};
use crate::term::{meet, Position, Substitution, Term};
use crate::formula::BoolFormula;
use crate::unify::{ClauseStats, Unifier};

/// A registered law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Law {
    pub id: &'static str,
    pub statement: &'static str,
    /// `false` for the universal commutativity statements, which are
    /// registered to exhibit their counterexample.
    pub expect_pass: bool,
}

const fn law(id: &'static str, statement: &'static str) -> Law {
    Law { id, statement, expect_pass: true }
}

const CATALOG: &[Law] = &[
    law("meet-conjunction", "meet(u,u') matches t iff u matches t and u' matches t"),
    law("substitution-subsumption", "if s(u) matches t and g subsumes s then g(u) matches t"),
    law("neutral-pce", "E ⊞ [@eps.{[]}] = [@eps.{[]}] ⊞ E = E, likewise for ⊎"),
    law("idempotence-pce", "E ⊞ E = E and E ⊎ E = E"),
    law("associativity-pce", "(E1 ⊞ E2) ⊞ E3 = E1 ⊞ (E2 ⊞ E3), likewise for ⊎"),
    law("noncommutativity-pce", "some E1, E2 have E1 ⊞ E2 != E2 ⊞ E1"),
    Law {
        id: "commutativity-pce",
        statement: "E1 ⊞ E2 = E2 ⊞ E1 (expected to fail)",
        expect_pass: false,
    },
    law("canonical-form", "to_canonical(S) is canonical, well-founded, idempotent and equivalent to S"),
    law("semantics-preservation", "Psi(S,t)(t) = [[S]](t)"),
    law("pce-equivalence", "E = E' iff Psi(E,t) = Psi(E',t) for every t"),
    law("strategy-equivalence", "Psi(S,t) = Psi(S',t) for every t implies [[S]] = [[S']]"),
    law("theorem-1", "Psi(S ⊞ S', t) = Psi(S,t) ⊞ Psi(S',t)"),
    law("theorem-2", "Psi(S ⊎ S', t) = Psi(S,t) ⊎ Psi(S',t)"),
    law("neutral-ce", "S ⊞ @eps.{[]} ≡ @eps.{[]} ⊞ S ≡ S, likewise for ⊎ wherever S succeeds"),
    law("idempotence-ce", "S ⊞ S ≡ S and S ⊎ S ≡ S"),
    law("associativity-ce", "(S1 ⊞ S2) ⊞ S3 ≡ S1 ⊞ (S2 ⊞ S3), likewise for ⊎"),
    law("noncommutativity-ce", "some S1, S2 have S1 ⊞ S2 ≢ S2 ⊞ S1"),
    Law {
        id: "commutativity-ce",
        statement: "S1 ⊞ S2 ≡ S2 ⊞ S1 (expected to fail)",
        expect_pass: false,
    },
    law("failure-ce", "Psi(S ⊞ S',t) fails iff either side fails; Psi(S ⊎ S',t) fails iff both fail"),
    law("congruence-ce", "S1 ≡ S2 implies S1 ⊞ S ≡ S2 ⊞ S and S ⊞ S1 ≡ S ⊞ S2, likewise for ⊎"),
];

pub fn catalog() -> &'static [Law] {
    CATALOG
}

/// Outcome of checking one law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub passed: bool,
    /// Number of instances evaluated.
    pub checked: u64,
    /// Instances abandoned because unification exceeded its step budget.
    pub skipped: u64,
    /// Counterexample of a failing universal law, or witness of an
    /// existential one.
    pub detail: Option<String>,
    /// Clause counters accumulated by the unifier, for the theorem laws.
    pub coverage: Option<ClauseStats>,
}

impl LawReport {
    pub fn as_expected(&self) -> bool {
        self.passed == self.law.expect_pass
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "LAW {} {verdict} {}", self.law.id, self.checked)?;
        if self.skipped > 0 {
            write!(f, " skipped={}", self.skipped)?;
        }
        if let Some(d) = &self.detail {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    failure: Option<(usize, String)>,
    stats: ClauseStats,
}

impl Tally {
    fn ok(checked: u64) -> Self {
        Tally { checked, ..Tally::default() }
    }

    fn fail(checked: u64, message: String) -> Self {
        Tally {
            checked,
            failure: Some((0, message)),
            ..Tally::default()
        }
    }

    /// An error from a binary operation: exceeding the unifier budget skips
    /// the instance, anything else is a failure.
    fn error(e: CeError, context: String) -> Self {
        match e {
            CeError::BudgetExceeded(_) => Tally {
                skipped: 1,
                ..Tally::default()
            },
            e => Tally::fail(1, format!("{context} error={e}")),
        }
    }

    fn from(checked: u64, failure: Option<String>) -> Self {
        Tally {
            checked,
            failure: failure.map(|m| (0, m)),
            ..Tally::default()
        }
    }

    fn join(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.stats.merge(&other.stats);
        self.failure = match (self.failure, other.failure) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Runs `f` on every item in parallel; the reported failure is the one with
/// the smallest item index, so results do not depend on scheduling.
fn run<T: Sync>(items: &[T], f: impl Fn(&T) -> Tally + Sync) -> Tally {
    items
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut t = f(x);
            if let Some(fl) = &mut t.failure {
                fl.0 = i;
            }
            t
        })
        .reduce(Tally::default, Tally::join)
}

fn law_rng(corpus: &Corpus, id: &str, section: usize) -> ChaCha8Rng {
    let salt = id.bytes().fold(section as u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(corpus.config.seed ^ salt)
}

/// `count` index pairs below `n`: all of them when few enough, otherwise a
/// seeded sample, ordered by `key`.
fn pairs(n: usize, count: usize, rng: &mut ChaCha8Rng, key: impl Fn(usize) -> usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = if n * n <= count {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        let mut set = BTreeSet::new();
        while set.len() < count {
            set.insert((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        set.into_iter().collect()
    };
    out.sort_by_key(|&(i, j)| (key(i) + key(j), i, j));
    out
}

fn triples(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, usize)> {
    if n == 0 {
        return Vec::new();
    }
    let mut set = BTreeSet::new();
    let mut attempts = 0;
    while set.len() < count.min(n * n * n) && attempts < count * 50 {
        attempts += 1;
        set.insert((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    set.into_iter().collect()
}

fn budgeted(corpus: &Corpus) -> Unifier {
    Unifier::with_budget(corpus.config.unify_budget)
}

fn identity_strategy() -> Strategy {
    Strategy::AtInsert(Position::root(), ContextTuple::hole())
}

/// The gated insertion list that performs exactly `e`.
fn pce_as_strategy(e: &Pce) -> Strategy {
    match e {
        Pce::Fail => Strategy::Fail,
        Pce::List(entries) => Strategy::Gated(
            entries.iter().map(|(p, tau)| (p.clone(), Entry::Insert(tau.clone()))).collect(),
            BoolFormula::conj(entries.iter().map(|(p, _)| p.clone()).filter(|p| !p.is_root())),
        ),
    }
}

/// First corpus term on which `a` and `b` have different embeddings.
fn psi_difference(sec: &Section, a: &Strategy, b: &Strategy) -> Option<String> {
    let (pa, pb) = (Psi::new(a), Psi::new(b));
    sec.terms.iter().find_map(|t| {
        let (l, r) = (pa.at(t), pb.at(t));
        (!eq_pce(&l, &r)).then(|| format!("t={t} lhs={l} rhs={r}"))
    })
}

fn equivalent(sec: &Section, a: &Strategy, b: &Strategy) -> bool {
    psi_difference(sec, a, b).is_none()
}

type BinOp = fn(&mut Unifier, &Strategy, &Strategy) -> Result<Strategy, CeError>;

type PceOp = fn(&Pce, &Pce) -> Pce;

fn ops() -> [(&'static str, BinOp, PceOp); 2] {
    [("⊞", Unifier::unify, unify_pce), ("⊎", Unifier::combine, combine_pce)]
}

/// `check_law` for every law of the catalog, in catalog order.
pub fn check_all(corpus: &Corpus) -> Vec<LawReport> {
    CATALOG
        .iter()
        .map(|l| check_law(l.id, corpus).expect("registered"))
        .collect()
}

pub fn check_law(id: &str, corpus: &Corpus) -> Result<LawReport, HarnessError> {
    let law = *CATALOG
        .iter()
        .find(|l| l.id == id)
        .ok_or_else(|| HarnessError::UnknownLaw(id.to_string()))?;
    let mut existential = false;
    let mut coverage = None;
    let tally = match id {
        "meet-conjunction" => meet_conjunction(corpus),
        "substitution-subsumption" => subsumption(corpus),
        "neutral-pce" => neutral_pce(corpus),
        "idempotence-pce" => idempotence_pce(corpus),
        "associativity-pce" => associativity_pce(corpus),
        "noncommutativity-pce" => {
            existential = true;
            commutativity_pce(corpus)
        }
        "commutativity-pce" => commutativity_pce(corpus),
        "canonical-form" => canonical_form(corpus),
        "semantics-preservation" => semantics_preservation(corpus),
        "pce-equivalence" => pce_equivalence(corpus),
        "strategy-equivalence" => strategy_equivalence(corpus),
        "theorem-1" | "theorem-2" => {
            let t = homomorphism(corpus, id == "theorem-2");
            coverage = Some(t.stats.clone());
            t
        }
        "neutral-ce" => neutral_ce(corpus),
        "idempotence-ce" => idempotence_ce(corpus),
        "associativity-ce" => associativity_ce(corpus),
        "noncommutativity-ce" => {
            existential = true;
            commutativity_ce(corpus)
        }
        "commutativity-ce" => commutativity_ce(corpus),
        "failure-ce" => failure_ce(corpus),
        "congruence-ce" => congruence_ce(corpus),
        _ => unreachable!("every catalog law is dispatched"),
    };
    let found = tally.failure.map(|(_, m)| m);
    let passed = if existential { found.is_some() } else { found.is_none() };
    let detail = if existential {
        found.map(|w| format!("witness {w}"))
    } else {
        found
    };
    Ok(LawReport {
        law,
        passed,
        checked: tally.checked,
        skipped: tally.skipped,
        detail,
        coverage,
    })
}

fn meet_conjunction(corpus: &Corpus) -> Tally {
    let items: Vec<(&Section, usize, usize)> = corpus
        .sections
        .iter()
        .flat_map(|sec| {
            let n = sec.patterns.len();
            (0..n).flat_map(move |i| (0..n).map(move |j| (sec, i, j)))
        })
        .collect();
    run(&items, |&(sec, i, j)| {
        let (u, v) = (&sec.patterns[i], &sec.patterns[j]);
        let m = meet(u, v);
        let bad = sec.terms.iter().find(|t| {
            let lhs = m.as_ref().is_some_and(|m| m.matches(t));
            lhs != (u.matches(t) && v.matches(t))
        });
        let n = sec.terms.len() as u64;
        match bad {
            None => Tally::ok(n),
            Some(t) => Tally::fail(n, format!("u={u} u'={v} t={t} meet={m:?}")),
        }
    })
}

fn subsumption(corpus: &Corpus) -> Tally {
    let vars: BTreeSet<String> = ["X", "Y"].iter().map(|x| x.to_string()).collect();
    let mut items = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let small: Vec<&Term> = sec.patterns.iter().filter(|p| p.depth() <= 1).collect();
        if small.is_empty() {
            continue;
        }
        let mut rng = law_rng(corpus, "substitution-subsumption", k);
        let pick = |rng: &mut ChaCha8Rng| small[rng.gen_range(0..small.len())].clone();
        for _ in 0..corpus.config.pair_samples * 20 {
            let u = sec.patterns[rng.gen_range(0..sec.patterns.len())].clone();
            let gamma = Substitution::from_pairs([("X".to_string(), pick(&mut rng)), ("Y".to_string(), pick(&mut rng))]);
            let delta = Substitution::from_pairs([("X".to_string(), pick(&mut rng)), ("Y".to_string(), pick(&mut rng))]);
            items.push((sec, u, gamma, delta));
        }
    }
    run(&items, |(sec, u, gamma, delta)| {
        let sigma = Substitution::from_pairs(
            vars.iter()
                .map(|x| (x.clone(), Term::var(x.clone()).apply_subst(gamma).apply_subst(delta))),
        );
        if !gamma.subsumes_on(&sigma, &vars) {
            return Tally::fail(1, format!("u={u} g={gamma} s={sigma}: subsumption not recognised"));
        }
        let (su, gu) = (u.apply_subst(&sigma), u.apply_subst(gamma));
        let bad = sec.terms.iter().find(|t| su.matches(t) && !gu.matches(t));
        let n = sec.terms.len() as u64;
        Tally::from(n, bad.map(|t| format!("u={u} g={gamma} s={sigma} t={t}")))
    })
}

fn pce_items(corpus: &Corpus) -> Vec<&Pce> {
    corpus.sections.iter().flat_map(|s| &s.pces).collect()
}

fn neutral_pce(corpus: &Corpus) -> Tally {
    let id = Pce::single(Position::root(), ContextTuple::hole());
    let items: Vec<&Pce> = pce_items(corpus).into_iter().filter(|e| !e.is_fail()).collect();
    run(&items, |e| {
        for (name, _, op) in ops() {
            let (l, r) = (op(e, &id), op(&id, e));
            if !eq_pce(&l, e) || !eq_pce(&r, e) {
                return Tally::fail(1, format!("E={e} op={name} right={l} left={r}"));
            }
        }
        Tally::ok(1)
    })
}

fn idempotence_pce(corpus: &Corpus) -> Tally {
    run(&pce_items(corpus), |e| {
        for (name, _, op) in ops() {
            let r = op(e, e);
            if !eq_pce(&r, e) {
                return Tally::fail(1, format!("E={e} op={name} result={r}"));
            }
        }
        Tally::ok(1)
    })
}

fn associativity_pce(corpus: &Corpus) -> Tally {
    let mut items = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let mut rng = law_rng(corpus, "associativity-pce", k);
        for (a, b, c) in triples(sec.pces.len(), corpus.config.pair_samples * 20, &mut rng) {
            items.push((&sec.pces[a], &sec.pces[b], &sec.pces[c]));
        }
    }
    run(&items, |&(a, b, c)| {
        for (name, _, op) in ops() {
            let (l, r) = (op(&op(a, b), c), op(a, &op(b, c)));
            if !eq_pce(&l, &r) {
                return Tally::fail(1, format!("E1={a} E2={b} E3={c} op={name} lhs={l} rhs={r}"));
            }
        }
        Tally::ok(1)
    })
}

fn commutativity_pce(corpus: &Corpus) -> Tally {
    let items: Vec<(&Pce, &Pce)> = corpus
        .sections
        .iter()
        .flat_map(|sec| {
            let n = sec.pces.len();
            let mut ps: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            ps.sort_by_key(|&(i, j)| (i + j, i));
            ps.into_iter().map(move |(i, j)| (&sec.pces[i], &sec.pces[j]))
        })
        .collect();
    run(&items, |&(a, b)| {
        let (l, r) = (unify_pce(a, b), unify_pce(b, a));
        Tally::from(1, (!eq_pce(&l, &r)).then(|| format!("E1={a} E2={b} E1⊞E2={l} E2⊞E1={r}")))
    })
}

fn strategy_items(corpus: &Corpus) -> Vec<(&Section, usize)> {
    corpus
        .sections
        .iter()
        .flat_map(|sec| (0..sec.strategies.len()).map(move |i| (sec, i)))
        .collect()
}

fn canonical_form(corpus: &Corpus) -> Tally {
    run(&strategy_items(corpus), |&(sec, i)| {
        let s = &sec.strategies[i];
        let c = match to_canonical(s) {
            Ok(c) => c,
            Err(e) => return Tally::fail(1, format!("S={s} error={e}")),
        };
        if !is_canonical(&c) || !is_well_founded_ce(&c) {
            return Tally::fail(1, format!("S={s} C={c} not canonical or not well-founded"));
        }
        if to_canonical(&c).as_ref() != Ok(&c) {
            return Tally::fail(1, format!("S={s} C={c} not idempotent"));
        }
        let bad = sec.terms.iter().find_map(|t| {
            let (l, r) = (apply_ce(&c, Some(t)), apply_ce(s, Some(t)));
            (l != r).then(|| format!("S={s} C={c} t={t} canonical={l:?} original={r:?}"))
        });
        Tally::from(sec.terms.len() as u64, bad)
    })
}

fn semantics_preservation(corpus: &Corpus) -> Tally {
    run(&strategy_items(corpus), |&(sec, i)| {
        let s = &sec.strategies[i];
        let bad = sec.terms.iter().find_map(|t| {
            let e = psi(s, t);
            if !is_well_founded_pce(&e) {
                return Some(format!("S={s} t={t} psi={e} not well-founded"));
            }
            let (l, r) = (psi_apply(s, t), apply_ce(s, Some(t)));
            (l != r).then(|| format!("S={s} t={t} psi={e} via-psi={l:?} direct={r:?}"))
        });
        Tally::from(sec.terms.len() as u64, bad)
    })
}

fn pce_equivalence(corpus: &Corpus) -> Tally {
    let mut items: Vec<(&Section, Pce, Pce)> = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let mut rng = law_rng(corpus, "pce-equivalence", k);
        for (i, j) in pairs(sec.pces.len(), corpus.config.pair_samples * 4, &mut rng, |_| 0) {
            items.push((sec, sec.pces[i].clone(), sec.pces[j].clone()));
        }
        for e in &sec.pces {
            if let Pce::List(entries) = e {
                // Same embedding with every tuple doubled.
                let doubled = entries.iter().map(|(p, tau)| (p.clone(), tau.concat(tau))).collect();
                items.push((sec, e.clone(), Pce::List(doubled)));
            }
        }
    }
    run(&items, |(sec, a, b)| {
        let (sa, sb) = (pce_as_strategy(a), pce_as_strategy(b));
        let pointwise = psi_difference(sec, &sa, &sb);
        let n = sec.terms.len() as u64;
        let syntactic = eq_pce(a, b);
        Tally::from(
            n,
            (syntactic != pointwise.is_none())
                .then(|| format!("E={a} E'={b} equal={syntactic} pointwise-difference={pointwise:?}")),
        )
    })
}

fn strategy_equivalence(corpus: &Corpus) -> Tally {
    let mut items: Vec<(&Section, Strategy, Strategy)> = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        for (s, c) in sec.strategies.iter().zip(&sec.canonical) {
            items.push((sec, s.clone(), c.clone()));
            items.push((sec, s.clone(), Strategy::choice(s.clone(), Strategy::Fail)));
        }
        let mut rng = law_rng(corpus, "strategy-equivalence", k);
        for (i, j) in pairs(sec.strategies.len(), corpus.config.pair_samples, &mut rng, |_| 0) {
            items.push((sec, sec.strategies[i].clone(), sec.strategies[j].clone()));
        }
    }
    run(&items, |(sec, a, b)| {
        let n = sec.terms.len() as u64;
        if !equivalent(sec, a, b) {
            return Tally::ok(n);
        }
        let bad = sec.terms.iter().find_map(|t| {
            let (l, r) = (apply_ce(a, Some(t)), apply_ce(b, Some(t)));
            (l != r).then(|| format!("S={a} S'={b} t={t} lhs={l:?} rhs={r:?}"))
        });
        Tally::from(n, bad)
    })
}

/// Sampled pairs of canonical strategies, smallest first.
fn canonical_pairs<'c>(corpus: &'c Corpus, id: &str) -> Vec<(&'c Section, usize, usize)> {
    let mut items = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let mut rng = law_rng(corpus, id, k);
        let size = |i: usize| sec.canonical[i].size();
        for (i, j) in pairs(sec.canonical.len(), corpus.config.pair_samples, &mut rng, size) {
            items.push((sec, i, j));
        }
    }
    items
}

fn homomorphism(corpus: &Corpus, combine: bool) -> Tally {
    let (name, op, pop) = ops()[combine as usize];
    let items = canonical_pairs(corpus, "theorems");
    run(&items, |&(sec, i, j)| {
        let (a, b) = (&sec.canonical[i], &sec.canonical[j]);
        let mut u = budgeted(corpus);
        let r = match op(&mut u, a, b) {
            Ok(r) => r,
            Err(e) => return Tally::error(e, format!("S={a} S'={b} op={name}")),
        };
        let (pr, pa, pb) = (Psi::new(&r), Psi::new(a), Psi::new(b));
        let bad = sec.terms.iter().find_map(|t| {
            let (l, rr) = (pr.at(t), pop(&pa.at(t), &pb.at(t)));
            (!eq_pce(&l, &rr)).then(|| format!("S={a} S'={b} result={r} t={t} lhs={l} rhs={rr}"))
        });
        let mut t = Tally::from(sec.terms.len() as u64, bad);
        t.stats = u.stats;
        t
    })
}

fn neutral_ce(corpus: &Corpus) -> Tally {
    let id = identity_strategy();
    run(&strategy_items(corpus), |&(sec, i)| {
        let s = &sec.canonical[i];
        for (name, op, _) in ops() {
            for (l, r) in [(s, &id), (&id, s)] {
                match op(&mut budgeted(corpus), l, r) {
                    Ok(out) => {
                        // Where S fails, S ⊎ @eps.{[]} still succeeds as the identity.
                        let d = if name == "⊎" {
                            let (po, ps) = (Psi::new(&out), Psi::new(s));
                            sec.terms.iter().find_map(|t| {
                                let (lhs, rhs) = (po.at(t), ps.at(t));
                                (!rhs.is_fail() && !eq_pce(&lhs, &rhs))
                                    .then(|| format!("t={t} lhs={lhs} rhs={rhs}"))
                            })
                        } else {
                            psi_difference(sec, &out, s)
                        };
                        if let Some(d) = d {
                            return Tally::fail(1, format!("S={s} op={name} left={l} result={out} {d}"));
                        }
                    }
                    Err(e) => return Tally::error(e, format!("S={s} op={name}")),
                }
            }
        }
        Tally::ok(sec.terms.len() as u64)
    })
}

fn idempotence_ce(corpus: &Corpus) -> Tally {
    run(&strategy_items(corpus), |&(sec, i)| {
        let s = &sec.canonical[i];
        for (name, op, _) in ops() {
            match op(&mut budgeted(corpus), s, s) {
                Ok(out) => {
                    if let Some(d) = psi_difference(sec, &out, s) {
                        return Tally::fail(1, format!("S={s} op={name} result={out} {d}"));
                    }
                }
                Err(e) => return Tally::error(e, format!("S={s} op={name}")),
            }
        }
        Tally::ok(sec.terms.len() as u64)
    })
}

fn associativity_ce(corpus: &Corpus) -> Tally {
    let mut items = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let mut rng = law_rng(corpus, "associativity-ce", k);
        for (a, b, c) in triples(sec.canonical.len(), corpus.config.triple_samples, &mut rng) {
            items.push((sec, a, b, c));
        }
    }
    run(&items, |&(sec, a, b, c)| {
        let (a, b, c) = (&sec.canonical[a], &sec.canonical[b], &sec.canonical[c]);
        for (name, op, _) in ops() {
            let mut u = budgeted(corpus);
            let sides = op(&mut u, a, b)
                .and_then(|ab| op(&mut u, &ab, c))
                .and_then(|l| Ok((l, op(&mut u, b, c).and_then(|bc| op(&mut u, a, &bc))?)));
            match sides {
                Ok((l, r)) => {
                    if let Some(d) = psi_difference(sec, &l, &r) {
                        return Tally::fail(1, format!("S1={a} S2={b} S3={c} op={name} {d}"));
                    }
                }
                Err(e) => return Tally::error(e, format!("S1={a} S2={b} S3={c} op={name}")),
            }
        }
        Tally::ok(sec.terms.len() as u64)
    })
}

fn commutativity_ce(corpus: &Corpus) -> Tally {
    let items = canonical_pairs(corpus, "commutativity-ce");
    run(&items, |&(sec, i, j)| {
        let (a, b) = (&sec.canonical[i], &sec.canonical[j]);
        let mut u = budgeted(corpus);
        match (u.unify(a, b), u.unify(b, a)) {
            (Ok(l), Ok(r)) => Tally::from(
                sec.terms.len() as u64,
                psi_difference(sec, &l, &r).map(|d| format!("S1={a} S2={b} {d}")),
            ),
            (Err(e), _) | (_, Err(e)) => Tally::error(e, format!("S1={a} S2={b}")),
        }
    })
}

fn failure_ce(corpus: &Corpus) -> Tally {
    let items = canonical_pairs(corpus, "failure-ce");
    run(&items, |&(sec, i, j)| {
        let (a, b) = (&sec.canonical[i], &sec.canonical[j]);
        let mut u = budgeted(corpus);
        let (uni, com) = match (u.unify(a, b), u.combine(a, b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return Tally::error(e, format!("S={a} S'={b}")),
        };
        let ps = [Psi::new(a), Psi::new(b), Psi::new(&uni), Psi::new(&com)];
        let bad = sec.terms.iter().find_map(|t| {
            let [fa, fb, fu, fc] = [0, 1, 2, 3].map(|k| ps[k].at(t).is_fail());
            (fu != (fa || fb) || fc != (fa && fb))
                .then(|| format!("S={a} S'={b} t={t} fails: S={fa} S'={fb} ⊞={fu} ⊎={fc}"))
        });
        Tally::from(sec.terms.len() as u64, bad)
    })
}

fn congruence_ce(corpus: &Corpus) -> Tally {
    let mut items = Vec::new();
    for (k, sec) in corpus.sections.iter().enumerate() {
        let mut rng = law_rng(corpus, "congruence-ce", k);
        let n = sec.strategies.len();
        for (i, s) in sec.strategies.iter().enumerate().take(corpus.config.triple_samples) {
            let variants = [
                Strategy::choice(s.clone(), Strategy::Fail),
                Strategy::guard(Term::var("X"), s.clone()),
                Strategy::at(Position::root(), s.clone()),
                Strategy::choice(s.clone(), s.clone()),
                sec.canonical[i].clone(),
            ];
            for v in variants {
                items.push((sec, s.clone(), v, rng.gen_range(0..n)));
            }
        }
    }
    run(&items, |(sec, s, v, p)| {
        if !equivalent(sec, s, v) {
            return Tally::default();
        }
        let p = &sec.strategies[*p];
        for (name, op, _) in ops() {
            let apply = |x: &Strategy, y: &Strategy| {
                let (x, y) = (to_canonical(x)?, to_canonical(y)?);
                op(&mut budgeted(corpus), &x, &y)
            };
            let sides = [(apply(s, p), apply(v, p)), (apply(p, s), apply(p, v))];
            for (l, r) in sides {
                match (l, r) {
                    (Ok(l), Ok(r)) => {
                        if let Some(d) = psi_difference(sec, &l, &r) {
                            return Tally::fail(1, format!("S1={s} S2={v} S={p} op={name} {d}"));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        return Tally::error(e, format!("S1={s} S2={v} S={p} op={name}"))
                    }
                }
            }
        }
        Tally::ok(1)
    })
}

/// The line-oriented report followed by a plain-text summary.
pub fn render_report(corpus: &Corpus, reports: &[LawReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let c = &corpus.config;
    out.push_str(&format!(
        "# corpus: {} signatures, {} terms (depth <= {}), {} strategies, {} embeddings, seed {}\n",
        corpus.sections.len(),
        corpus.term_count(),
        c.max_depth,
        corpus.strategy_count(),
        corpus.pce_count(),
        c.seed
    ));
    out.push_str("# strategy equivalence is pointwise Psi-equality over the corpus terms\n");
    for r in reports {
        if let Some(stats) = &r.coverage {
            out.push_str(&format!("# {} clause coverage: {stats}\n", r.law.id));
        }
    }
    let pass = reports.iter().filter(|r| r.passed).count();
    let unexpected: Vec<&str> = reports.iter().filter(|r| !r.as_expected()).map(|r| r.law.id).collect();
    out.push_str(&format!("# {} laws: {pass} pass, {} fail\n", reports.len(), reports.len() - pass));
    if unexpected.is_empty() {
        out.push_str("# every verdict is as expected\n");
    } else {
        out.push_str(&format!("# unexpected verdicts: {}\n", unexpected.join(", ")));
    }
    out
}
