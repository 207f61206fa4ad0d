//! Specification corpora, the spec-file format, and samplers.

mod corpus;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ltl::{format, parse_with, Formula, ParseError, ParseOptions, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    Ind,
    Ood,
    ReachOnly,
    ReachAvoid,
    Rsp,
    Rec,
    Per,
    Indep,
    Coop,
    Mix,
    Custom,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Ind,
        Family::Ood,
        Family::ReachOnly,
        Family::ReachAvoid,
        Family::Rsp,
        Family::Rec,
        Family::Per,
        Family::Indep,
        Family::Coop,
        Family::Mix,
        Family::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ind => "ind",
            Family::Ood => "ood",
            Family::ReachOnly => "reach_only",
            Family::ReachAvoid => "reach_avoid",
            Family::Rsp => "rsp",
            Family::Rec => "rec",
            Family::Per => "per",
            Family::Indep => "indep",
            Family::Coop => "coop",
            Family::Mix => "mix",
            Family::Custom => "custom",
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Family::Rsp | Family::Rec | Family::Per)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = SpecGenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| SpecGenError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HorizonKind {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecParams {
    pub n_seq: usize,
    pub n_disj: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub id: String,
    pub formula: Formula,
    pub family: Family,
    pub horizon_kind: HorizonKind,
    pub params: Option<SpecParams>,
}

impl SpecRecord {
    pub fn new(id: impl Into<String>, formula: Formula, family: Family, params: Option<SpecParams>) -> Self {
        let horizon_kind = if family.is_infinite() || (family == Family::Custom && !formula.is_co_safe()) {
            HorizonKind::Infinite
        } else {
            HorizonKind::Finite
        };
        SpecRecord { id: id.into(), formula, family, horizon_kind, params }
    }

    pub fn is_infinite(&self) -> bool {
        self.horizon_kind == HorizonKind::Infinite
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecGenError {
    #[error("alphabet has {available} atoms, {needed} needed")]
    InsufficientAlphabet { needed: usize, available: usize },
    #[error("reach and avoid atoms must be disjoint")]
    OverlappingAtoms,
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: expected `<id> TAB <formula>`")]
    Malformed { line: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

/// Environments with a fixed corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorpusEnv {
    Letter,
    Zone,
    ArmGrippers,
    ArmGrippersArm,
    ZoneMulti,
}

impl CorpusEnv {
    pub const ALL: [CorpusEnv; 5] =
        [CorpusEnv::Letter, CorpusEnv::Zone, CorpusEnv::ArmGrippers, CorpusEnv::ArmGrippersArm, CorpusEnv::ZoneMulti];

    pub fn name(self) -> &'static str {
        match self {
            CorpusEnv::Letter => "letter",
            CorpusEnv::Zone => "zone",
            CorpusEnv::ArmGrippers => "arm_grippers",
            CorpusEnv::ArmGrippersArm => "arm_full",
            CorpusEnv::ZoneMulti => "zone_multi",
        }
    }

    fn lists(self) -> Vec<(Family, &'static [&'static str])> {
        use corpus::*;
        match self {
            CorpusEnv::Letter => vec![
                (Family::Ind, LETTER_IND),
                (Family::Ood, LETTER_OOD),
                (Family::Rsp, LETTER_RSP),
                (Family::Rec, LETTER_REC),
            ],
            CorpusEnv::Zone | CorpusEnv::ArmGrippers => vec![
                (Family::Ind, ZONE_IND),
                (Family::Ood, ZONE_OOD),
                (Family::Rsp, ZONE_RSP),
                (Family::Rec, ZONE_REC),
                (Family::Per, ZONE_PER),
            ],
            CorpusEnv::ArmGrippersArm => vec![(Family::Ind, ARM_FULL_IND), (Family::Ood, ARM_FULL_OOD)],
            CorpusEnv::ZoneMulti => vec![
                (Family::Indep, MULTI_INDEP),
                (Family::Coop, MULTI_COOP),
                (Family::Mix, MULTI_MIX),
                (Family::Rsp, MULTI_RSP),
                (Family::Rec, MULTI_REC),
                (Family::Per, MULTI_PER),
            ],
        }
    }
}

fn parse_fixed(text: &str) -> Formula {
    parse_with(text, &ParseOptions::default().without_next()).expect("corpus formula parses")
}

/// The fixed corpus of one environment; ids are `<env>/<family>/<row>`.
pub fn corpus(env: CorpusEnv) -> Vec<SpecRecord> {
    let mut out = Vec::new();
    for (family, list) in env.lists() {
        for (i, text) in list.iter().enumerate() {
            out.push(SpecRecord::new(format!("{}/{}/{}", env.name(), family, i + 1), parse_fixed(text), family, None));
        }
    }
    out
}

/// Letter complexity grid: reach-only and reach-avoid formulas for
/// n_seq in {2, 4} and n_disj in {0, 1}.
pub fn letter_complexity_corpus() -> Vec<SpecRecord> {
    let mut out = Vec::new();
    for (family, grid) in [(Family::ReachOnly, corpus::LETTER_REACH_ONLY), (Family::ReachAvoid, corpus::LETTER_REACH_AVOID)]
    {
        for &((n_seq, n_disj), list) in grid {
            for (i, text) in list.iter().enumerate() {
                out.push(SpecRecord::new(
                    format!("letter/{family}/seq{n_seq}_disj{n_disj}/{}", i + 1),
                    parse_fixed(text),
                    family,
                    Some(SpecParams { n_seq, n_disj }),
                ));
            }
        }
    }
    out
}

/// Every fixed formula, all environments.
pub fn all_fixed() -> Vec<SpecRecord> {
    CorpusEnv::ALL.into_iter().flat_map(corpus).chain(letter_complexity_corpus()).collect()
}

/// Named corpora for command-line use: `<env>` for a whole corpus,
/// `<env>_<family>` for one family, `letter_complexity` for the grid.
pub fn corpus_by_name(name: &str) -> Result<Vec<SpecRecord>, SpecGenError> {
    if name == "letter_complexity" {
        return Ok(letter_complexity_corpus());
    }
    if let Some(rest) = name.strip_prefix("letter_") {
        if let Ok(f @ (Family::ReachOnly | Family::ReachAvoid)) = rest.parse::<Family>() {
            return Ok(letter_complexity_corpus().into_iter().filter(|r| r.family == f).collect());
        }
    }
    // Longest env prefix first so `zone_multi` wins over `zone`.
    let mut envs = CorpusEnv::ALL.to_vec();
    envs.sort_by_key(|e| std::cmp::Reverse(e.name().len()));
    for env in envs {
        if name == env.name() {
            return Ok(corpus(env));
        }
        if let Some(fam) = name.strip_prefix(env.name()).and_then(|r| r.strip_prefix('_')) {
            if let Ok(family) = fam.parse::<Family>() {
                let recs: Vec<SpecRecord> = corpus(env).into_iter().filter(|r| r.family == family).collect();
                if !recs.is_empty() {
                    return Ok(recs);
                }
            }
        }
    }
    Err(SpecGenError::UnknownName(name.to_string()))
}

pub fn corpus_names() -> Vec<String> {
    let mut names = vec!["letter_complexity".to_string(), "letter_reach_only".into(), "letter_reach_avoid".into()];
    for env in CorpusEnv::ALL {
        names.push(env.name().to_string());
        let fams: BTreeSet<Family> = env.lists().into_iter().map(|(f, _)| f).collect();
        names.extend(fams.into_iter().map(|f| format!("{}_{}", env.name(), f)));
    }
    names
}

/// Reads the tab-separated spec format: `<id> TAB <formula>`, optionally
/// followed by `TAB <family> [TAB <n_seq> TAB <n_disj>]`. Lines starting
/// with `#` and blank lines are skipped.
pub fn parse_spec_file(text: &str, options: &ParseOptions) -> Result<Vec<SpecRecord>, SpecGenError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 || cols[0].trim().is_empty() {
            return Err(SpecGenError::Malformed { line: line_no });
        }
        let formula = parse_with(cols[1], options).map_err(|source| SpecGenError::Parse { line: line_no, source })?;
        let family = match cols.get(2) {
            Some(f) if !f.is_empty() => f.parse()?,
            _ => Family::Custom,
        };
        let params = match (cols.get(3), cols.get(4)) {
            (Some(a), Some(b)) => match (a.parse(), b.parse()) {
                (Ok(n_seq), Ok(n_disj)) => Some(SpecParams { n_seq, n_disj }),
                _ => None,
            },
            _ => None,
        };
        out.push(SpecRecord::new(cols[0].trim(), formula, family, params));
    }
    Ok(out)
}

pub fn write_spec_file(records: &[SpecRecord]) -> String {
    let mut out = String::from("# id\tformula\tfamily\tn_seq\tn_disj\n");
    for r in records {
        let (s, d) = r.params.map_or((String::new(), String::new()), |p| (p.n_seq.to_string(), p.n_disj.to_string()));
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.id, format(&r.formula), r.family, s, d));
    }
    out
}

/// How atoms may repeat across the stages of a sampled chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AtomReuse {
    /// Every atom is used at most once in the whole formula.
    Never,
    /// Atoms are distinct within a stage, and a stage never avoids the
    /// previous stage's target. Allows chains longer than the alphabet.
    AcrossStages,
}

fn draw_stages<R: Rng + ?Sized>(
    n_seq: usize,
    per_stage: usize,
    alphabet: &[Proposition],
    reuse: AtomReuse,
    rng: &mut R,
    avoid_prev_last: bool,
) -> Result<Vec<Vec<Proposition>>, SpecGenError> {
    let available = alphabet.len();
    match reuse {
        AtomReuse::Never => {
            let needed = per_stage * n_seq;
            if needed > available {
                return Err(SpecGenError::InsufficientAlphabet { needed, available });
            }
            let mut pool = alphabet.to_vec();
            pool.shuffle(rng);
            Ok(pool[..needed].chunks(per_stage).map(<[Proposition]>::to_vec).collect())
        }
        AtomReuse::AcrossStages => {
            let needed = per_stage + usize::from(avoid_prev_last);
            if needed > available {
                return Err(SpecGenError::InsufficientAlphabet { needed, available });
            }
            let mut stages: Vec<Vec<Proposition>> = Vec::new();
            for _ in 0..n_seq {
                let mut pool: Vec<Proposition> = alphabet
                    .iter()
                    .filter(|p| !avoid_prev_last || stages.last().is_none_or(|s| s.last() != Some(*p)))
                    .cloned()
                    .collect();
                pool.shuffle(rng);
                pool.truncate(per_stage);
                stages.push(pool);
            }
            Ok(stages)
        }
    }
}

fn disj(atoms: &[Proposition]) -> Formula {
    Formula::disjunction(atoms.iter().map(|p| Formula::Atom(p.clone())))
}

/// Nested eventually chain `F (s1 & F (s2 & ... F sn))`, each stage a
/// disjunction of `n_disj + 1` atoms.
pub fn sample_reach_only<R: Rng + ?Sized>(
    n_seq: usize,
    n_disj: usize,
    alphabet: &[Proposition],
    reuse: AtomReuse,
    rng: &mut R,
) -> Result<SpecRecord, SpecGenError> {
    let stages = draw_stages(n_seq.max(1), n_disj + 1, alphabet, reuse, rng, false)?;
    let f = stages.iter().rev().fold(None, |inner: Option<Formula>, s| {
        Some(Formula::eventually(match inner {
            None => disj(s),
            Some(rest) => Formula::and(disj(s), rest),
        }))
    });
    let id = format!("reach_only/seq{n_seq}_disj{n_disj}");
    Ok(SpecRecord::new(id, f.unwrap(), Family::ReachOnly, Some(SpecParams { n_seq, n_disj })))
}

/// Nested chain `!(avoid1) U (t1 & (!(avoid2) U (t2 & ...)))` with
/// `n_disj + 1` avoid atoms and one target per stage.
pub fn sample_reach_avoid<R: Rng + ?Sized>(
    n_seq: usize,
    n_disj: usize,
    alphabet: &[Proposition],
    reuse: AtomReuse,
    rng: &mut R,
) -> Result<SpecRecord, SpecGenError> {
    let stages = draw_stages(n_seq.max(1), n_disj + 2, alphabet, reuse, rng, true)?;
    let f = stages.iter().rev().fold(None, |inner: Option<Formula>, s| {
        let (target, avoid) = s.split_last().unwrap();
        let t = Formula::Atom(target.clone());
        let reach = match inner {
            None => t,
            Some(rest) => Formula::and(t, rest),
        };
        Some(Formula::until(Formula::not(disj(avoid)), reach))
    });
    let id = format!("reach_avoid/seq{n_seq}_disj{n_disj}");
    Ok(SpecRecord::new(id, f.unwrap(), Family::ReachAvoid, Some(SpecParams { n_seq, n_disj })))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfiniteTemplate {
    /// `(G F trigger) & G (trigger -> F response) & G !(avoid)`
    Rsp { trigger: Formula, response: Formula, avoid: Vec<Proposition> },
    /// `G F g1 & ... & G F gn & G !(avoid)`
    Rec { goals: Vec<Formula>, avoid: Vec<Proposition> },
    /// `F G goal & G !(avoid)`
    Per { goal: Formula, avoid: Vec<Proposition> },
}

pub fn build_infinite(id: impl Into<String>, template: &InfiniteTemplate) -> Result<SpecRecord, SpecGenError> {
    let (reach, avoid): (Vec<&Formula>, &Vec<Proposition>) = match template {
        InfiniteTemplate::Rsp { trigger, response, avoid } => (vec![trigger, response], avoid),
        InfiniteTemplate::Rec { goals, avoid } => (goals.iter().collect(), avoid),
        InfiniteTemplate::Per { goal, avoid } => (vec![goal], avoid),
    };
    if reach.is_empty() || avoid.is_empty() {
        return Err(SpecGenError::InsufficientAlphabet { needed: 2, available: reach.len() + avoid.len() });
    }
    let reach_atoms: BTreeSet<Proposition> = reach.iter().flat_map(|f| f.alphabet()).collect();
    if avoid.iter().any(|p| reach_atoms.contains(p)) {
        return Err(SpecGenError::OverlappingAtoms);
    }
    let safety = Formula::always(Formula::not(disj(avoid)));
    let (family, parts) = match template {
        InfiniteTemplate::Rsp { trigger, response, .. } => (
            Family::Rsp,
            vec![
                Formula::always(Formula::eventually(trigger.clone())),
                Formula::always(Formula::implies(trigger.clone(), Formula::eventually(response.clone()))),
                safety,
            ],
        ),
        InfiniteTemplate::Rec { goals, .. } => (
            Family::Rec,
            goals
                .iter()
                .map(|g| Formula::always(Formula::eventually(g.clone())))
                .chain(std::iter::once(safety))
                .collect(),
        ),
        InfiniteTemplate::Per { goal, .. } => {
            (Family::Per, vec![Formula::eventually(Formula::always(goal.clone())), safety])
        }
    };
    Ok(SpecRecord::new(id, Formula::conjunction(parts), family, None))
}

/// Renames atoms through `map`; atoms outside it are kept.
pub fn rename_atoms(f: &Formula, map: &BTreeMap<Proposition, Proposition>) -> Formula {
    let r = |g: &Formula| rename_atoms(g, map);
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(p) => Formula::Atom(map.get(p).cloned().unwrap_or_else(|| p.clone())),
        Formula::Not(a) => Formula::not(r(a)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Until(a, b) => Formula::until(r(a), r(b)),
        Formula::Next(a) => Formula::next(r(a)),
        Formula::Eventually(a) => Formula::eventually(r(a)),
        Formula::Always(a) => Formula::always(r(a)),
    }
}

/// Training-distribution sample: one of the `templates` with its atoms
/// injectively re-drawn from `alphabet`.
pub fn sample_ind<R: Rng + ?Sized>(
    templates: &[SpecRecord],
    alphabet: &[Proposition],
    rng: &mut R,
) -> Result<SpecRecord, SpecGenError> {
    let template = &templates[rng.random_range(0..templates.len())];
    let atoms: Vec<Proposition> = template.formula.alphabet().into_iter().collect();
    if atoms.len() > alphabet.len() {
        return Err(SpecGenError::InsufficientAlphabet { needed: atoms.len(), available: alphabet.len() });
    }
    let mut pool = alphabet.to_vec();
    pool.shuffle(rng);
    let map = atoms.into_iter().zip(pool).collect();
    Ok(SpecRecord::new(format!("{}~", template.id), rename_atoms(&template.formula, &map), template.family, None))
}

/// Random formula already in negation normal form. Leaves are literals or
/// constants; inner nodes are `& | U F G X`.
pub fn random_nnf_formula<R: Rng + ?Sized>(atoms: &[Proposition], max_depth: usize, rng: &mut R) -> Formula {
    let leaf = |rng: &mut R| match rng.random_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        2..=5 => Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone()),
        _ => Formula::not(Formula::Atom(atoms[rng.random_range(0..atoms.len())].clone())),
    };
    if max_depth <= 1 || rng.random_range(0..4) == 0 {
        return leaf(rng);
    }
    let d = max_depth - 1;
    match rng.random_range(0..6) {
        0 => Formula::and(random_nnf_formula(atoms, d, rng), random_nnf_formula(atoms, d, rng)),
        1 => Formula::or(random_nnf_formula(atoms, d, rng), random_nnf_formula(atoms, d, rng)),
        2 => Formula::until(random_nnf_formula(atoms, d, rng), random_nnf_formula(atoms, d, rng)),
        3 => Formula::eventually(random_nnf_formula(atoms, d, rng)),
        4 => Formula::always(random_nnf_formula(atoms, d, rng)),
        _ => Formula::next(random_nnf_formula(atoms, d, rng)),
    }
}
