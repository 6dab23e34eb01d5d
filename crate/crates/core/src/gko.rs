//! Coset branching of level-1 times level-m affine sl2 modules, with iterated chains and realization matching.

use crate::exactnum::{rat, Rational};
use crate::fusion::{affine_sl2_fusion, minimal_fusion, Label};
use crate::kac::{self, KacLabel};
use crate::qdim::pf_qdim;
use num_traits::One;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors raised by branching computations.
#[derive(Debug, Error, PartialEq)]
pub enum GkoError {
    /// A level, parity, or step parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An affine label leaves its level range.
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    /// A delegated fusion or eigenvalue computation failed.
    #[error("computation failed: {0}")]
    Computation(String),
}

/// Lowest conformal weight of the level-m affine sl2 module with label k.
pub fn sugawara_weight(m: u64, k: u64) -> Result<Rational, GkoError> {
    if k > m {
        return Err(GkoError::InvalidLabel(format!(
            "label {k} exceeds level {m}"
        )));
    }
    Ok(rat((k * (k + 2)) as i64, (4 * (m + 2)) as i64))
}

/// One branched summand: a coset module paired with an affine module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTerm {
    /// Series parameter of the coset minimal model.
    pub p: u64,
    /// Canonical coset label.
    pub coset: KacLabel,
    /// Coset lowest conformal weight.
    pub weight: Rational,
    /// Level of the affine factor.
    pub level: u64,
    /// Label of the affine factor.
    pub affine: u64,
    /// Multiplicity.
    pub multiplicity: u64,
}

impl BranchTerm {
    /// Serializes the term with string-rendered exact weights.
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "coset": self.coset.to_string(),
            "weight": self.weight.to_string(),
            "level": self.level,
            "affine": self.affine,
            "multiplicity": self.multiplicity,
        })
    }
}

/// Branch decomposition, one term per admissible s.
pub type BranchSum = Vec<BranchTerm>;

/// Serializes a branch sum as a JSON array.
pub fn branch_to_json(sum: &BranchSum) -> Value {
    Value::Array(sum.iter().map(BranchTerm::to_json).collect())
}

/// Decomposes L(1,eps) x L(m,n) into coset times level-(m+1) summands.
pub fn gko_branch(m: u64, eps: u64, n: u64) -> Result<BranchSum, GkoError> {
    if m < 1 {
        return Err(GkoError::InvalidParameter(format!("level {m} below 1")));
    }
    if eps > 1 {
        return Err(GkoError::InvalidParameter(format!("parity {eps} not 0 or 1")));
    }
    if n > m {
        return Err(GkoError::InvalidLabel(format!(
            "label {n} exceeds level {m}"
        )));
    }
    let p = m + 2;
    let err = |e: kac::KacError| GkoError::InvalidParameter(e.to_string());
    let coset_c = kac::central_charge(p).map_err(err)?;
    let lhs = rat(1, 1) + rat(3 * m as i64, (m + 2) as i64);
    let rhs = &coset_c + rat(3 * (m + 1) as i64, (m + 3) as i64);
    assert_eq!(lhs, rhs, "central-charge ledger must balance at level {m}");
    let outer = &sugawara_weight(1, eps)? + &sugawara_weight(m, n)?;
    let mut terms = Vec::new();
    for s in 0..=(m + 1) {
        if (s + n + eps) % 2 != 0 {
            continue;
        }
        let label = kac::canonical(p, KacLabel::new(s + 1, n + 1));
        let weight = kac::highest_weight(p, label).map_err(err)?;
        let balance = &(&weight + &sugawara_weight(m + 1, s)?) - &outer;
        assert!(
            balance.denom().is_one(),
            "weight balance must be integral at (m,eps,n,s)=({m},{eps},{n},{s})"
        );
        terms.push(BranchTerm {
            p,
            coset: label,
            weight,
            level: m + 1,
            affine: s,
            multiplicity: 1,
        });
    }
    Ok(terms)
}

/// One chain term: accumulated cosets, the affine tail, and pending absorptions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChainTerm {
    /// Accumulated cosets as (p, label, weight) triples.
    pub cosets: Vec<(u64, KacLabel, Rational)>,
    /// Current affine level.
    pub level: u64,
    /// Current affine label.
    pub affine: u64,
    /// Parities of factors not yet absorbed.
    pub pending: Vec<u64>,
    /// Multiplicity.
    pub multiplicity: u64,
}

impl ChainTerm {
    /// Builds a fresh term with no accumulated cosets.
    pub fn new(level: u64, affine: u64, pending: Vec<u64>, multiplicity: u64) -> Self {
        ChainTerm {
            cosets: Vec::new(),
            level,
            affine,
            pending,
            multiplicity,
        }
    }

    fn key(&self) -> (Vec<(u64, KacLabel, Rational)>, u64, u64, Vec<u64>) {
        (
            self.cosets.clone(),
            self.level,
            self.affine,
            self.pending.clone(),
        )
    }

    /// Serializes the term with string-rendered exact weights.
    pub fn to_json(&self) -> Value {
        json!({
            "cosets": self.cosets.iter().map(|(p, l, w)| json!([p, l.to_string(), w.to_string()])).collect::<Vec<_>>(),
            "level": self.level,
            "affine": self.affine,
            "pending": self.pending,
            "multiplicity": self.multiplicity,
        })
    }
}

/// Formal sum of chain terms in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChainState {
    /// Terms sorted by coset data, affine data, and pending parities.
    pub terms: Vec<ChainTerm>,
}

impl ChainState {
    /// Builds a state from terms, merging duplicates.
    pub fn new(terms: Vec<ChainTerm>) -> Self {
        ChainState { terms }.canonicalize()
    }

    fn canonicalize(mut self) -> Self {
        self.terms.sort();
        let mut merged: Vec<ChainTerm> = Vec::new();
        for term in self.terms {
            match merged.last_mut() {
                Some(last) if last.key() == term.key() => {
                    last.multiplicity += term.multiplicity;
                }
                _ => merged.push(term),
            }
        }
        ChainState { terms: merged }
    }

    /// Total multiplicity over all terms.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.iter().map(|t| t.multiplicity).sum()
    }

    /// Serializes the state as a JSON array of terms.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(ChainTerm::to_json).collect())
    }
}

/// Absorbs the next pending factors of every term, the given number of times.
pub fn chain_branch(initial: &ChainState, steps: usize) -> Result<ChainState, GkoError> {
    let mut state = initial.clone();
    for _ in 0..steps {
        let mut next = Vec::new();
        for term in &state.terms {
            let Some((&eps, rest)) = term.pending.split_first() else {
                return Err(GkoError::InvalidParameter(
                    "no pending factor left to absorb".into(),
                ));
            };
            for bt in gko_branch(term.level, eps, term.affine)? {
                let mut cosets = term.cosets.clone();
                cosets.push((bt.p, bt.coset, bt.weight.clone()));
                next.push(ChainTerm {
                    cosets,
                    level: bt.level,
                    affine: bt.affine,
                    pending: rest.to_vec(),
                    multiplicity: term.multiplicity * bt.multiplicity,
                });
            }
        }
        state = ChainState::new(next);
    }
    Ok(state)
}

/// Decomposition profile of a 3A module as (4/5-weight, 6/7-weight, multiplicity) rows.
pub fn threea_profile(label: &Rational) -> Result<Vec<(Rational, Rational, u64)>, GkoError> {
    let row = |a: (i64, i64), b: (i64, i64), m: u64| (rat(a.0, a.1), rat(b.0, b.1), m);
    let profiles: [(Rational, Vec<(Rational, Rational, u64)>); 6] = [
        (
            rat(0, 1),
            vec![
                row((0, 1), (0, 1), 1),
                row((0, 1), (5, 1), 1),
                row((3, 1), (0, 1), 1),
                row((3, 1), (5, 1), 1),
                row((2, 3), (4, 3), 2),
            ],
        ),
        (
            rat(1, 7),
            vec![
                row((0, 1), (1, 7), 1),
                row((0, 1), (22, 7), 1),
                row((3, 1), (1, 7), 1),
                row((3, 1), (22, 7), 1),
                row((2, 3), (10, 21), 2),
            ],
        ),
        (
            rat(5, 7),
            vec![
                row((0, 1), (5, 7), 1),
                row((0, 1), (12, 7), 1),
                row((3, 1), (5, 7), 1),
                row((3, 1), (12, 7), 1),
                row((2, 3), (1, 21), 2),
            ],
        ),
        (
            rat(2, 5),
            vec![
                row((2, 5), (0, 1), 1),
                row((2, 5), (5, 1), 1),
                row((7, 5), (0, 1), 1),
                row((7, 5), (5, 1), 1),
                row((1, 15), (4, 3), 2),
            ],
        ),
        (
            rat(19, 35),
            vec![
                row((2, 5), (1, 7), 1),
                row((2, 5), (22, 7), 1),
                row((7, 5), (1, 7), 1),
                row((7, 5), (22, 7), 1),
                row((1, 15), (10, 21), 2),
            ],
        ),
        (
            rat(39, 35),
            vec![
                row((2, 5), (5, 7), 1),
                row((2, 5), (12, 7), 1),
                row((7, 5), (5, 7), 1),
                row((7, 5), (12, 7), 1),
                row((1, 15), (1, 21), 2),
            ],
        ),
    ];
    profiles
        .into_iter()
        .find(|(l, _)| l == label)
        .map(|(_, rows)| rows)
        .ok_or_else(|| GkoError::InvalidLabel(format!("no 3A profile for {label}")))
}

/// One claimed summand: a 3A module label with its p=7 coset weight and affine label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimedTriple {
    /// Lowest weight naming the 3A module.
    pub three_a: Rational,
    /// Weight of the p=7 coset factor.
    pub weight: Rational,
    /// Affine label at level 6.
    pub s: u64,
}

/// Multiset comparison between a fully absorbed chain and a claimed decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    /// True when both multisets coincide.
    pub matched: bool,
    /// Total multiplicity on the chain side.
    pub total_multiplicity: u64,
    /// Quadruples claimed but absent from the chain, with counts.
    pub missing: Vec<String>,
    /// Quadruples in the chain but not claimed, with counts.
    pub extra: Vec<String>,
}

impl MatchReport {
    /// Serializes the report.
    pub fn to_json(&self) -> Value {
        json!({
            "matched": self.matched,
            "total_multiplicity": self.total_multiplicity,
            "missing": self.missing,
            "extra": self.extra,
        })
    }
}

type Quadruple = (Rational, Rational, Rational, u64);

fn quad_name(q: &Quadruple) -> String {
    format!("({}, {}, {}, s={})", q.0, q.1, q.2, q.3)
}

/// Expands claimed triples into (4/5, 6/7, 25/28, s) quadruple counts.
pub fn expand_claimed(claimed: &[ClaimedTriple]) -> Result<BTreeMap<Quadruple, u64>, GkoError> {
    let mut out = BTreeMap::new();
    for t in claimed {
        for (w45, w67, mult) in threea_profile(&t.three_a)? {
            *out.entry((w45, w67, t.weight.clone(), t.s)).or_insert(0) += mult;
        }
    }
    Ok(out)
}

/// Compares a fully absorbed three-step chain against a claimed decomposition.
pub fn match_realization(
    chain: &ChainState,
    claimed: &[ClaimedTriple],
) -> Result<MatchReport, GkoError> {
    let mut chain_counts: BTreeMap<Quadruple, u64> = BTreeMap::new();
    for term in &chain.terms {
        if !term.pending.is_empty() {
            return Err(GkoError::InvalidParameter(
                "chain still has pending factors".into(),
            ));
        }
        let [c5, c6, c7] = term.cosets.as_slice() else {
            return Err(GkoError::InvalidParameter(format!(
                "expected three cosets, found {}",
                term.cosets.len()
            )));
        };
        if (c5.0, c6.0, c7.0) != (5, 6, 7) {
            return Err(GkoError::InvalidParameter(
                "chain cosets are not at p = 5, 6, 7".into(),
            ));
        }
        let key = (c5.2.clone(), c6.2.clone(), c7.2.clone(), term.affine);
        *chain_counts.entry(key).or_insert(0) += term.multiplicity;
    }
    let claimed_counts = expand_claimed(claimed)?;
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    for (q, &want) in &claimed_counts {
        let have = chain_counts.get(q).copied().unwrap_or(0);
        if have < want {
            missing.push(format!("{} x {}", quad_name(q), want - have));
        }
    }
    for (q, &have) in &chain_counts {
        let want = claimed_counts.get(q).copied().unwrap_or(0);
        if have > want {
            extra.push(format!("{} x {}", quad_name(q), have - want));
        }
    }
    Ok(MatchReport {
        matched: missing.is_empty() && extra.is_empty(),
        total_multiplicity: chain.total_multiplicity(),
        missing,
        extra,
    })
}

/// Worst relative residual of the branching quantum-dimension identity at level m.
pub fn qdim_consistency(m: u64) -> Result<f64, GkoError> {
    let comp = |s: String| GkoError::Computation(s);
    let mm = minimal_fusion(m + 2).map_err(|e| comp(e.to_string()))?;
    let aff_m = affine_sl2_fusion(m).map_err(|e| comp(e.to_string()))?;
    let aff_m1 = affine_sl2_fusion(m + 1).map_err(|e| comp(e.to_string()))?;
    let aff_1 = affine_sl2_fusion(1).map_err(|e| comp(e.to_string()))?;
    let qd = |ring: &crate::fusion::FusionRing, idx: usize| {
        pf_qdim(ring, idx).map(|a| a.value).map_err(|e| comp(e.to_string()))
    };
    let coset_qd = |label: KacLabel| -> Result<f64, GkoError> {
        let idx = mm
            .find_label(&Label::Kac(label))
            .ok_or_else(|| comp(format!("coset label {label} missing")))?;
        qd(&mm, idx)
    };
    let branch_value = |eps: u64, n: u64| -> Result<f64, GkoError> {
        let mut total = 0.0;
        for t in gko_branch(m, eps, n)? {
            total += coset_qd(t.coset)? * qd(&aff_m1, t.affine as usize)?;
        }
        Ok(total)
    };
    let b0 = branch_value(0, 0)?;
    let mut worst = 0.0f64;
    for eps in 0..=1u64 {
        for n in 0..=m {
            let lhs = branch_value(eps, n)?;
            let rhs = qd(&aff_1, eps as usize)? * qd(&aff_m, n as usize)? * b0;
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn weight_set(sum: &BranchSum) -> Vec<(Rational, u64)> {
        sum.iter()
            .map(|t| (t.weight.clone(), t.affine))
            .collect()
    }

    #[test]
    fn sugawara_values_and_errors() {
        assert_eq!(sugawara_weight(4, 0).unwrap(), rat(0, 1));
        assert_eq!(sugawara_weight(1, 1).unwrap(), rat(1, 4));
        assert_eq!(sugawara_weight(6, 2).unwrap(), rat(1, 4));
        assert_eq!(
            sugawara_weight(2, 3),
            Err(GkoError::InvalidLabel("label 3 exceeds level 2".into()))
        );
    }

    #[test]
    fn printed_branch_examples() {
        let b = gko_branch(1, 0, 0).unwrap();
        assert_eq!(
            weight_set(&b),
            vec![(rat(0, 1), 0), (rat(1, 2), 2)]
        );
        let b = gko_branch(1, 1, 0).unwrap();
        assert_eq!(weight_set(&b), vec![(rat(1, 16), 1)]);
        let b = gko_branch(5, 0, 0).unwrap();
        assert_eq!(
            weight_set(&b),
            vec![
                (rat(0, 1), 0),
                (rat(3, 4), 2),
                (rat(13, 4), 4),
                (rat(15, 2), 6)
            ]
        );
        assert!(b.iter().all(|t| t.p == 7 && t.level == 6));
    }

    #[test]
    fn parity_and_minimal_weight_equality() {
        for m in 1..=6u64 {
            for eps in 0..=1u64 {
                for n in 0..=m {
                    let sum = gko_branch(m, eps, n).unwrap();
                    assert!(!sum.is_empty());
                    let outer = &sugawara_weight(1, eps).unwrap()
                        + &sugawara_weight(m, n).unwrap();
                    let mut totals = Vec::new();
                    for t in &sum {
                        assert_eq!((t.affine + n + eps) % 2, 0);
                        let total = &t.weight + &sugawara_weight(m + 1, t.affine).unwrap();
                        let diff = &total - &outer;
                        assert!(diff.denom().is_one());
                        assert!(diff >= Rational::zero());
                        if t.affine == n + eps {
                            assert_eq!(total, outer, "top component at ({m},{eps},{n})");
                        }
                        totals.push(total);
                    }
                    assert_eq!(
                        totals.iter().min().unwrap(),
                        &outer,
                        "minimal weight at ({m},{eps},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn chain_steps_compose_single_branches() {
        let init = ChainState::new(vec![ChainTerm::new(3, 0, vec![0, 0], 1)]);
        assert_eq!(chain_branch(&init, 0).unwrap(), init);
        let one = chain_branch(&init, 1).unwrap();
        let direct = gko_branch(3, 0, 0).unwrap();
        let expected = ChainState::new(
            direct
                .iter()
                .map(|bt| ChainTerm {
                    cosets: vec![(bt.p, bt.coset, bt.weight.clone())],
                    level: bt.level,
                    affine: bt.affine,
                    pending: vec![0],
                    multiplicity: bt.multiplicity,
                })
                .collect(),
        );
        assert_eq!(one, expected);
        let two = chain_branch(&init, 2).unwrap();
        assert!(two.terms.iter().all(|t| t.pending.is_empty()
            && t.cosets.len() == 2
            && t.cosets[0].0 == 5
            && t.cosets[1].0 == 6));
        assert!(matches!(
            chain_branch(&two, 1),
            Err(GkoError::InvalidParameter(_))
        ));
    }

    #[test]
    fn branch_parameter_errors() {
        assert!(matches!(
            gko_branch(0, 0, 0),
            Err(GkoError::InvalidParameter(_))
        ));
        assert!(matches!(
            gko_branch(3, 2, 0),
            Err(GkoError::InvalidParameter(_))
        ));
        assert!(matches!(gko_branch(3, 0, 4), Err(GkoError::InvalidLabel(_))));
    }

    #[test]
    fn vacuum_profile_expansion_contains_printed_quadruples() {
        let claimed = [ClaimedTriple {
            three_a: rat(0, 1),
            weight: rat(0, 1),
            s: 0,
        }];
        let counts = expand_claimed(&claimed).unwrap();
        assert_eq!(counts.len(), 5);
        assert_eq!(counts[&(rat(0, 1), rat(0, 1), rat(0, 1), 0)], 1);
        assert_eq!(counts[&(rat(3, 1), rat(5, 1), rat(0, 1), 0)], 1);
        assert_eq!(counts[&(rat(2, 3), rat(4, 3), rat(0, 1), 0)], 2);
        assert!(threea_profile(&rat(1, 2)).is_err());
    }

    #[test]
    fn match_realization_detects_perturbations() {
        let claimed = [ClaimedTriple {
            three_a: rat(0, 1),
            weight: rat(0, 1),
            s: 0,
        }];
        let mut terms = Vec::new();
        for (w45, w67, mult) in threea_profile(&rat(0, 1)).unwrap() {
            terms.push(ChainTerm {
                cosets: vec![
                    (5, KacLabel::new(1, 1), w45),
                    (6, KacLabel::new(1, 1), w67),
                    (7, KacLabel::new(1, 1), rat(0, 1)),
                ],
                level: 6,
                affine: 0,
                pending: vec![],
                multiplicity: mult,
            });
        }
        let chain = ChainState::new(terms.clone());
        let report = match_realization(&chain, &claimed).unwrap();
        assert!(report.matched);
        assert_eq!(report.total_multiplicity, 6);
        terms[0].cosets[2].2 = rat(3, 4);
        let perturbed = ChainState::new(terms);
        let report = match_realization(&perturbed, &claimed).unwrap();
        assert!(!report.matched);
        assert_eq!(report.missing.len(), 1);
        assert_eq!(report.extra.len(), 1);
    }

    #[test]
    fn qdim_identity_holds_through_level_six() {
        for m in 1..=6u64 {
            let worst = qdim_consistency(m).unwrap();
            assert!(worst < 1e-8, "level {m} residual {worst}");
        }
    }
}
