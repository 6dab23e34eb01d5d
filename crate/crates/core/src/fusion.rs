//! Fusion-ring algebra with minimal-model, affine sl2, tensor-product, and 3A constructors.

use crate::exactnum::{rat, Rational};
use crate::kac::{self, KacLabel};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Errors raised by fusion-ring construction and evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FusionError {
    /// A series or level parameter is out of range.
    #[error("invalid parameter {0}")]
    InvalidParameter(String),
    /// A label index or name does not belong to the ring.
    #[error("unknown label {0}")]
    UnknownLabel(String),
    /// A ring axiom fails, with the first violation identified.
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
}

/// An opaque fusion-ring label carrying display metadata.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// A minimal-model Kac label.
    Kac(KacLabel),
    /// An affine sl2 label at a fixed level.
    Affine(u64),
    /// A 3A-algebra module named by its lowest weight.
    Frac(Rational),
    /// A label of a tensor-product ring.
    Pair(Box<Label>, Box<Label>),
    /// One of the fourteen extension modules.
    Module(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Kac(k) => write!(f, "{k}"),
            Label::Affine(j) => write!(f, "{j}"),
            Label::Frac(r) => write!(f, "{r}"),
            Label::Pair(a, b) => write!(f, "{a}(x){b}"),
            Label::Module(i) => write!(f, "M{i}"),
        }
    }
}

/// A formal nonnegative-integer combination of ring labels, keyed by label index.
pub type FormalSum = BTreeMap<usize, u64>;

/// Renders a formal sum using the ring's label names.
pub fn display_sum(ring: &FusionRing, sum: &FormalSum) -> String {
    if sum.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (idx, mult) in sum {
        let name = ring.labels[*idx].to_string();
        if *mult == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{mult}*{name}"));
        }
    }
    parts.join(" + ")
}

/// A finite commutative fusion ring with unit, duals, and structure tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    pub labels: Vec<Label>,
    pub unit: usize,
    pub dual: Vec<usize>,
    tensor: Vec<u64>,
}

impl FusionRing {
    pub(crate) fn from_tensor(labels: Vec<Label>, unit: usize, tensor: Vec<u64>) -> Self {
        let n = labels.len();
        assert_eq!(tensor.len(), n * n * n);
        let mut ring = FusionRing { labels, unit, dual: vec![0; n], tensor };
        for i in 0..n {
            let mut partners =
                (0..n).filter(|j| ring.coeff(i, *j, unit) > 0).collect::<Vec<_>>();
            assert_eq!(partners.len(), 1, "dual must be unique");
            ring.dual[i] = partners.pop().unwrap();
        }
        ring
    }

    /// Returns the number of labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Returns true when the ring has no labels.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Returns the structure constant N_{ij}^k.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.len();
        self.tensor[(i * n + j) * n + k]
    }

    /// Returns the index of a label, if present.
    pub fn find_label(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Returns the index of the label whose rendered name matches.
    pub fn find_by_name(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.to_string() == name)
    }

    /// Fuses two single labels.
    pub fn fuse_labels(&self, i: usize, j: usize) -> FormalSum {
        let mut out = FormalSum::new();
        for k in 0..self.len() {
            let c = self.coeff(i, j, k);
            if c > 0 {
                out.insert(k, c);
            }
        }
        out
    }

    /// Fuses two formal sums by bilinear extension.
    pub fn fuse(&self, a: &FormalSum, b: &FormalSum) -> Result<FormalSum, FusionError> {
        for idx in a.keys().chain(b.keys()) {
            if *idx >= self.len() {
                return Err(FusionError::UnknownLabel(format!("index {idx}")));
            }
        }
        let mut out = FormalSum::new();
        for (i, ca) in a {
            for (j, cb) in b {
                for k in 0..self.len() {
                    let c = self.coeff(*i, *j, k);
                    if c > 0 {
                        *out.entry(k).or_insert(0) += ca * cb * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Verifies unit, commutativity, duality, and associativity, naming the first violation.
    pub fn check_ring_axioms(&self) -> Result<(), FusionError> {
        let n = self.len();
        let u = self.unit;
        for j in 0..n {
            for k in 0..n {
                let want = u64::from(j == k);
                if self.coeff(u, j, k) != want || self.coeff(j, u, k) != want {
                    return Err(FusionError::AxiomViolation(format!(
                        "unit fails at ({j},{k})"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.coeff(i, j, k) != self.coeff(j, i, k) {
                        return Err(FusionError::AxiomViolation(format!(
                            "commutativity fails at ({i},{j})^{k}"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = u64::from(j == self.dual[i]);
                if self.coeff(i, j, u) != want {
                    return Err(FusionError::AxiomViolation(format!(
                        "duality fails at ({i},{j})"
                    )));
                }
            }
        }
        let rows: Vec<Vec<(usize, u64)>> = (0..n * n)
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (0..n)
                    .filter_map(|k| {
                        let c = self.coeff(i, j, k);
                        (c > 0).then_some((k, c))
                    })
                    .collect()
            })
            .collect();
        let mut lhs = vec![0u64; n];
        let mut rhs = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for v in lhs.iter_mut() {
                        *v = 0;
                    }
                    for v in rhs.iter_mut() {
                        *v = 0;
                    }
                    for (m, c1) in &rows[i * n + k] {
                        for (l, c2) in &rows[j * n + m] {
                            lhs[*l] += c1 * c2;
                        }
                    }
                    for (m, c1) in &rows[i * n + j] {
                        for (l, c2) in &rows[*m * n + k] {
                            rhs[*l] += c1 * c2;
                        }
                    }
                    if lhs != rhs {
                        return Err(FusionError::AxiomViolation(format!(
                            "associativity fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializes the ring as a JSON object with a sparse structure tensor.
    pub fn to_json(&self) -> Value {
        let n = self.len();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.coeff(i, j, k);
                    if c > 0 {
                        entries.push(json!([i, j, k, c]));
                    }
                }
            }
        }
        json!({
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "unit": self.unit,
            "dual": self.dual,
            "tensor": entries,
        })
    }
}

fn strict_triangle(x: u64, y: u64, z: u64) -> bool {
    x < y + z && y < x + z && z < x + y
}

fn admissible_as_printed(p: u64, a: KacLabel, b: KacLabel, c: KacLabel) -> bool {
    let sp = a.i_prime + b.i_prime + c.i_prime;
    let s = a.i + b.i + c.i;
    sp % 2 == 1
        && s % 2 == 1
        && strict_triangle(a.i_prime, b.i_prime, c.i_prime)
        && strict_triangle(a.i, b.i, c.i)
        && sp < 2 * (p + 1)
        && s < 2 * p
}

/// Returns true when some choice of Kac-symmetric representatives makes the triple admissible.
pub fn admissible(p: u64, a: KacLabel, b: KacLabel, c: KacLabel) -> bool {
    for mask in 0..8u32 {
        let fa = if mask & 1 == 0 { a } else { kac::flip(p, a) };
        let fb = if mask & 2 == 0 { b } else { kac::flip(p, b) };
        let fc = if mask & 4 == 0 { c } else { kac::flip(p, c) };
        if admissible_as_printed(p, fa, fb, fc) {
            return true;
        }
    }
    false
}

/// Builds the fusion ring of the p-th unitary minimal model over canonical Kac labels.
pub fn minimal_fusion(p: u64) -> Result<FusionRing, FusionError> {
    let table = kac::kac_table(p)
        .map_err(|e| FusionError::InvalidParameter(e.to_string()))?;
    let labels: Vec<KacLabel> = table.into_iter().map(|(l, _)| l).collect();
    let n = labels.len();
    let mut tensor = vec![0u64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if admissible(p, labels[i], labels[j], labels[k]) {
                    tensor[(i * n + j) * n + k] = 1;
                }
            }
        }
    }
    let unit = labels
        .iter()
        .position(|l| *l == KacLabel::new(1, 1))
        .expect("vacuum label present");
    Ok(FusionRing::from_tensor(
        labels.into_iter().map(Label::Kac).collect(),
        unit,
        tensor,
    ))
}

/// Builds the level-m affine sl2 fusion ring over labels 0..=m.
pub fn affine_sl2_fusion(m: u64) -> Result<FusionRing, FusionError> {
    if m < 1 {
        return Err(FusionError::InvalidParameter(format!("level m={m}, need m >= 1")));
    }
    let n = (m + 1) as usize;
    let mut tensor = vec![0u64; n * n * n];
    for j in 0..=m {
        for k in 0..=m {
            for l in 0..=m {
                let lo = j.abs_diff(k);
                let hi = (j + k).min(2 * m - j - k);
                if l % 2 == (j + k) % 2 && l >= lo && l <= hi {
                    tensor[((j * (m + 1) + k) * (m + 1) + l) as usize] = 1;
                }
            }
        }
    }
    Ok(FusionRing::from_tensor(
        (0..=m).map(Label::Affine).collect(),
        0,
        tensor,
    ))
}

/// Returns the six 3A-algebra labels in fixed order.
pub fn three_a_labels() -> Vec<Rational> {
    vec![rat(0, 1), rat(1, 7), rat(5, 7), rat(2, 5), rat(19, 35), rat(39, 35)]
}

/// Builds the six-label 3A-algebra fusion ring from its fixed table.
pub fn three_a_ring() -> FusionRing {
    let labels = three_a_labels();
    let n = labels.len();
    let upper: &[(usize, usize, &[usize])] = &[
        (1, 1, &[0, 2]),
        (1, 2, &[1, 2]),
        (1, 3, &[4]),
        (1, 4, &[3, 5]),
        (1, 5, &[4, 5]),
        (2, 2, &[0, 1, 2]),
        (2, 3, &[5]),
        (2, 4, &[4, 5]),
        (2, 5, &[3, 4, 5]),
        (3, 3, &[0, 3]),
        (3, 4, &[1, 4]),
        (3, 5, &[2, 5]),
        (4, 4, &[0, 2, 3, 5]),
        (4, 5, &[1, 2, 4, 5]),
        (5, 5, &[0, 1, 2, 3, 4, 5]),
    ];
    let mut tensor = vec![0u64; n * n * n];
    let mut set = |i: usize, j: usize, k: usize| {
        tensor[(i * n + j) * n + k] = 1;
        tensor[(j * n + i) * n + k] = 1;
    };
    for j in 0..n {
        set(0, j, j);
    }
    for (i, j, ks) in upper {
        for k in *ks {
            set(*i, *j, *k);
        }
    }
    FusionRing::from_tensor(labels.into_iter().map(Label::Frac).collect(), 0, tensor)
}

/// Builds the tensor product of two fusion rings over paired labels.
pub fn tensor_ring(r1: &FusionRing, r2: &FusionRing) -> FusionRing {
    let n1 = r1.len();
    let n2 = r2.len();
    let n = n1 * n2;
    let mut labels = Vec::with_capacity(n);
    for a in &r1.labels {
        for b in &r2.labels {
            labels.push(Label::Pair(Box::new(a.clone()), Box::new(b.clone())));
        }
    }
    let mut tensor = vec![0u64; n * n * n];
    for i1 in 0..n1 {
        for j1 in 0..n1 {
            for k1 in 0..n1 {
                let c1 = r1.coeff(i1, j1, k1);
                if c1 == 0 {
                    continue;
                }
                for i2 in 0..n2 {
                    for j2 in 0..n2 {
                        for k2 in 0..n2 {
                            let c2 = r2.coeff(i2, j2, k2);
                            if c2 == 0 {
                                continue;
                            }
                            let i = i1 * n2 + i2;
                            let j = j1 * n2 + j2;
                            let k = k1 * n2 + k2;
                            tensor[(i * n + j) * n + k] = c1 * c2;
                        }
                    }
                }
            }
        }
    }
    FusionRing::from_tensor(labels, r1.unit * n2 + r2.unit, tensor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc_range(cap: u64, u: u64, v: u64) -> Vec<u64> {
        let lo = u.abs_diff(v) + 1;
        let hi = (u + v).saturating_sub(1).min(2 * cap - 1 - u - v);
        (lo..=hi).step_by(2).collect()
    }

    fn admissible_oracle(p: u64, a: KacLabel, b: KacLabel, c: KacLabel) -> bool {
        let direct = trunc_range(p + 1, a.i_prime, b.i_prime).contains(&c.i_prime)
            && trunc_range(p, a.i, b.i).contains(&c.i);
        let fc = kac::flip(p, c);
        let flipped = trunc_range(p + 1, a.i_prime, b.i_prime).contains(&fc.i_prime)
            && trunc_range(p, a.i, b.i).contains(&fc.i);
        direct || flipped
    }

    fn kac_sum(ring: &FusionRing, pairs: &[(u64, u64)]) -> FormalSum {
        pairs
            .iter()
            .map(|(ip, i)| {
                (
                    ring.find_label(&Label::Kac(KacLabel::new(*ip, *i))).unwrap(),
                    1u64,
                )
            })
            .collect()
    }

    #[test]
    fn admissibility_matches_truncated_oracle() {
        for p in 2..=10 {
            let labels: Vec<KacLabel> =
                kac::kac_table(p).unwrap().into_iter().map(|(l, _)| l).collect();
            for &a in &labels {
                for &b in &labels {
                    for &c in &labels {
                        assert_eq!(
                            admissible(p, a, b, c),
                            admissible_oracle(p, a, b, c),
                            "p={p} {a} {b} {c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn q_table_matches_minimal_fusion_of_seven() {
        let ring = minimal_fusion(7).unwrap();
        let q = |ip, i| ring.find_label(&Label::Kac(KacLabel::new(ip, i))).unwrap();
        let q1 = q(1, 1);
        let q2 = q(1, 5);
        let q3 = q(1, 3);
        assert_eq!(ring.fuse_labels(q2, q2), kac_sum(&ring, &[(1, 1), (1, 3)]));
        assert_eq!(ring.fuse_labels(q2, q3), kac_sum(&ring, &[(1, 5), (1, 3)]));
        assert_eq!(
            ring.fuse_labels(q3, q3),
            kac_sum(&ring, &[(1, 1), (1, 5), (1, 3)])
        );
        assert_eq!(ring.fuse_labels(q1, q2), kac_sum(&ring, &[(1, 5)]));
    }

    #[test]
    fn weight_three_quarters_fuses_with_the_currents() {
        let ring = minimal_fusion(7).unwrap();
        let a = ring.find_label(&Label::Kac(KacLabel::new(3, 1))).unwrap();
        let b = ring.find_label(&Label::Kac(KacLabel::new(1, 5))).unwrap();
        assert_eq!(ring.fuse_labels(a, b), kac_sum(&ring, &[(3, 5)]));
    }

    #[test]
    fn affine_fusion_matches_the_level_sum() {
        let r1 = affine_sl2_fusion(1).unwrap();
        assert_eq!(r1.fuse_labels(1, 1), FormalSum::from([(0, 1)]));
        let r6 = affine_sl2_fusion(6).unwrap();
        assert_eq!(r6.fuse_labels(2, 6), FormalSum::from([(4, 1)]));
        assert_eq!(
            r6.fuse_labels(2, 4),
            FormalSum::from([(2, 1), (4, 1), (6, 1)])
        );
        assert!(affine_sl2_fusion(0).is_err());
    }

    #[test]
    fn affine_fusion_respects_symmetry_and_diagram_twists() {
        for m in 1..=8u64 {
            let ring = affine_sl2_fusion(m).unwrap();
            let g = |j: u64, k: u64, l: u64| ring.coeff(j as usize, k as usize, l as usize);
            for j in 0..=m {
                for k in 0..=m {
                    for l in 0..=m {
                        assert_eq!(g(j, k, l), g(k, j, l));
                        assert_eq!(g(j, k, l), g(m - j, m - k, l));
                        assert_eq!(g(j, k, l), g(m - j, k, m - l));
                    }
                }
            }
        }
    }

    #[test]
    fn three_a_table_spot_checks() {
        let ring = three_a_ring();
        let f = |i: usize, j: usize| ring.fuse_labels(i, j);
        assert_eq!(f(1, 1), FormalSum::from([(0, 1), (2, 1)]));
        assert_eq!(f(3, 3), FormalSum::from([(0, 1), (3, 1)]));
        assert_eq!(f(4, 4), FormalSum::from([(0, 1), (2, 1), (3, 1), (5, 1)]));
        assert_eq!(
            f(5, 5),
            FormalSum::from([(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1)])
        );
        assert_eq!(f(3, 4), FormalSum::from([(1, 1), (4, 1)]));
        for j in 0..6 {
            assert_eq!(f(0, j), FormalSum::from([(j, 1)]));
            assert_eq!(ring.dual[j], j);
        }
    }

    #[test]
    fn p_and_q_subtables_are_isomorphic() {
        let mm = minimal_fusion(7).unwrap();
        let ta = three_a_ring();
        let qs = [
            mm.find_label(&Label::Kac(KacLabel::new(1, 1))).unwrap(),
            mm.find_label(&Label::Kac(KacLabel::new(1, 5))).unwrap(),
            mm.find_label(&Label::Kac(KacLabel::new(1, 3))).unwrap(),
        ];
        let ps = [0usize, 1, 2];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(
                        mm.coeff(qs[a], qs[b], qs[c]),
                        ta.coeff(ps[a], ps[b], ps[c])
                    );
                }
            }
        }
    }

    #[test]
    fn tensor_ring_multiplies_structure_constants() {
        let a = three_a_ring();
        let b = minimal_fusion(3).unwrap();
        let t = tensor_ring(&a, &b);
        assert_eq!(t.unit, a.unit * b.len() + b.unit);
        for i1 in 0..a.len() {
            for j1 in 0..a.len() {
                for k1 in 0..a.len() {
                    for i2 in 0..b.len() {
                        for j2 in 0..b.len() {
                            for k2 in 0..b.len() {
                                assert_eq!(
                                    t.coeff(
                                        i1 * b.len() + i2,
                                        j1 * b.len() + j2,
                                        k1 * b.len() + k2
                                    ),
                                    a.coeff(i1, j1, k1) * b.coeff(i2, j2, k2)
                                );
                            }
                        }
                    }
                }
            }
        }
        t.check_ring_axioms().unwrap();
    }

    #[test]
    fn fuse_extends_bilinearly() {
        let ring = three_a_ring();
        let a = FormalSum::from([(1, 2), (3, 1)]);
        let b = FormalSum::from([(4, 1), (5, 3)]);
        let got = ring.fuse(&a, &b).unwrap();
        let mut want = FormalSum::new();
        for (i, ca) in &a {
            for (j, cb) in &b {
                for (k, c) in ring.fuse_labels(*i, *j) {
                    *want.entry(k).or_insert(0) += ca * cb * c;
                }
            }
        }
        assert_eq!(got, want);
        let bad = FormalSum::from([(17, 1)]);
        assert!(matches!(
            ring.fuse(&bad, &b),
            Err(FusionError::UnknownLabel(_))
        ));
        let unit = FormalSum::from([(ring.unit, 1)]);
        assert_eq!(ring.fuse(&unit, &b).unwrap(), b);
    }

    #[test]
    fn axioms_pass_for_all_constructors() {
        minimal_fusion(7).unwrap().check_ring_axioms().unwrap();
        minimal_fusion(4).unwrap().check_ring_axioms().unwrap();
        three_a_ring().check_ring_axioms().unwrap();
        affine_sl2_fusion(6).unwrap().check_ring_axioms().unwrap();
    }

    #[test]
    fn corrupted_tensor_is_rejected() {
        let mut ring = three_a_ring();
        let n = ring.len();
        ring.tensor[(3 * n + 4) * n + 2] += 1;
        assert!(matches!(
            ring.check_ring_axioms(),
            Err(FusionError::AxiomViolation(_))
        ));
    }

    #[test]
    fn json_shape_lists_nonzero_entries() {
        let ring = three_a_ring();
        let v = ring.to_json();
        assert_eq!(v["labels"].as_array().unwrap().len(), 6);
        assert_eq!(v["unit"], 0);
        let entries = v["tensor"].as_array().unwrap();
        let nonzero: usize = (0..6)
            .flat_map(|i| (0..6).flat_map(move |j| (0..6).map(move |k| (i, j, k))))
            .filter(|(i, j, k)| ring.coeff(*i, *j, *k) > 0)
            .count();
        assert_eq!(entries.len(), nonzero);
    }
}
