//! The 6A extension algebra: its 14 modules, classification, fusion table, and sign analysis.

use crate::exactnum::{rat, Rational};
use crate::fusion::{
    display_sum, minimal_fusion, tensor_ring, three_a_ring, FormalSum, FusionRing, Label,
};
use crate::gko::{chain_branch, match_realization, ChainState, ChainTerm, ClaimedTriple, MatchReport};
use crate::kac;
use crate::qdim::{character_qdims, pf_qdim, sum_of_squares, Approx};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

const CLASSIFICATION_TOL: f64 = 1e-8;
const CHARACTER_TOL: f64 = 1e-8;

/// Errors raised while assembling the extension algebra.
#[derive(Debug, Error, PartialEq)]
pub enum SixaError {
    /// A summand product disagrees with the module list.
    #[error("relation failure: {0}")]
    RelationFailure(String),
    /// A product of first summands leaves the 14-module list.
    #[error("closure failure: {0}")]
    ClosureFailure(String),
    /// A delegated ring or eigenvalue computation failed.
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Builds the ambient tensor ring of the 3A algebra with the p = 7 minimal model.
pub fn u1_ring() -> FusionRing {
    let mm = minimal_fusion(7).expect("p = 7 is in range");
    tensor_ring(&three_a_ring(), &mm)
}

/// One of the fourteen modules, named by its three ambient summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTriple {
    /// Display name M0 through M13.
    pub name: String,
    /// Ambient index of the first summand.
    pub m1: usize,
    /// Ambient index of the second summand.
    pub m2: usize,
    /// Ambient index of the third summand.
    pub m3: usize,
    /// The three (3A weight, coset weight) pairs.
    pub summands: [(Rational, Rational); 3],
}

impl ModuleTriple {
    /// Serializes the triple with string-rendered exact weights.
    pub fn to_json(&self, ring: &FusionRing) -> Value {
        let labels: Vec<String> = [self.m1, self.m2, self.m3]
            .iter()
            .map(|&i| ring.labels[i].to_string())
            .collect();
        json!({
            "name": self.name,
            "summands": self.summands.iter()
                .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                .collect::<Vec<_>>(),
            "labels": labels,
        })
    }
}

fn module_weight_data() -> [[((i64, i64), (i64, i64)); 3]; 14] {
    [
        [((0, 1), (0, 1)), ((1, 7), (34, 7)), ((5, 7), (9, 7))],
        [((0, 1), (3, 4)), ((1, 7), (45, 28)), ((5, 7), (1, 28))],
        [((0, 1), (13, 4)), ((1, 7), (3, 28)), ((5, 7), (15, 28))],
        [((0, 1), (15, 2)), ((1, 7), (5, 14)), ((5, 7), (39, 14))],
        [((0, 1), (165, 32)), ((1, 7), (3, 224)), ((5, 7), (323, 224))],
        [((0, 1), (5, 32)), ((1, 7), (675, 224)), ((5, 7), (99, 224))],
        [((0, 1), (57, 32)), ((1, 7), (143, 224)), ((5, 7), (15, 224))],
        [((2, 5), (0, 1)), ((19, 35), (34, 7)), ((39, 35), (9, 7))],
        [((2, 5), (3, 4)), ((19, 35), (45, 28)), ((39, 35), (1, 28))],
        [((2, 5), (13, 4)), ((19, 35), (3, 28)), ((39, 35), (15, 28))],
        [((2, 5), (15, 2)), ((19, 35), (5, 14)), ((39, 35), (39, 14))],
        [((2, 5), (5, 32)), ((19, 35), (675, 224)), ((39, 35), (99, 224))],
        [((2, 5), (57, 32)), ((19, 35), (143, 224)), ((39, 35), (15, 224))],
        [((2, 5), (165, 32)), ((19, 35), (3, 224)), ((39, 35), (323, 224))],
    ]
}

/// The extension algebra with its ambient ring, module list, and cached characters.
pub struct SixA {
    /// The ambient 126-label tensor ring.
    pub ring: FusionRing,
    /// The fourteen modules in order M0 through M13.
    pub modules: Vec<ModuleTriple>,
    /// Ambient index of the second algebra summand.
    pub u2: usize,
    /// Ambient index of the third algebra summand.
    pub u3: usize,
    qdims: Vec<Approx>,
}

impl SixA {
    /// Assembles the ring, the 14-module list, and the ambient character.
    pub fn new() -> Result<Self, SixaError> {
        let ring = u1_ring();
        let table =
            kac::kac_table(7).map_err(|e| SixaError::Construction(e.to_string()))?;
        let resolve = |t: &Rational, w: &Rational| -> Result<usize, SixaError> {
            let label = table
                .iter()
                .find(|(_, h)| h == w)
                .map(|(l, _)| *l)
                .ok_or_else(|| {
                    SixaError::Construction(format!("no p = 7 label of weight {w}"))
                })?;
            ring.find_label(&Label::Pair(
                Box::new(Label::Frac(t.clone())),
                Box::new(Label::Kac(label)),
            ))
            .ok_or_else(|| SixaError::Construction(format!("missing ambient label {t}, {w}")))
        };
        let mut modules = Vec::with_capacity(14);
        for (i, rows) in module_weight_data().into_iter().enumerate() {
            let summands = rows.map(|(a, b)| (rat(a.0, a.1), rat(b.0, b.1)));
            let idx: Vec<usize> = summands
                .iter()
                .map(|(t, w)| resolve(t, w))
                .collect::<Result<_, _>>()?;
            modules.push(ModuleTriple {
                name: format!("M{i}"),
                m1: idx[0],
                m2: idx[1],
                m3: idx[2],
                summands,
            });
        }
        let (u2, u3) = (modules[0].m2, modules[0].m3);
        let qdims =
            character_qdims(&ring).map_err(|e| SixaError::Construction(e.to_string()))?;
        Ok(SixA {
            ring,
            modules,
            u2,
            u3,
            qdims,
        })
    }

    /// Serializes the module list.
    pub fn modules_to_json(&self) -> Value {
        Value::Array(self.modules.iter().map(|m| m.to_json(&self.ring)).collect())
    }

    /// Checks that fusing with the algebra summands permutes each module's summands.
    pub fn verify_summand_relations(&self) -> Result<RelationReport, SixaError> {
        let mut rows = Vec::with_capacity(self.modules.len());
        for m in &self.modules {
            let p2 = self.ring.fuse_labels(self.u2, m.m1);
            let p3 = self.ring.fuse_labels(self.u3, m.m1);
            if p2 != FormalSum::from([(m.m2, 1)]) {
                return Err(SixaError::RelationFailure(format!(
                    "U2 x {} first summand gave {}",
                    m.name,
                    display_sum(&self.ring, &p2)
                )));
            }
            if p3 != FormalSum::from([(m.m3, 1)]) {
                return Err(SixaError::RelationFailure(format!(
                    "U3 x {} first summand gave {}",
                    m.name,
                    display_sum(&self.ring, &p3)
                )));
            }
            rows.push(RelationRow {
                module: m.name.clone(),
                u2_product: display_sum(&self.ring, &p2),
                u3_product: display_sum(&self.ring, &p3),
            });
        }
        Ok(RelationReport { rows })
    }

    fn symbolic_qdim(&self, m: &ModuleTriple) -> String {
        let (t, w) = &m.summands[0];
        let d_names: [((i64, i64), &str); 6] = [
            ((3, 4), "d1"),
            ((15, 2), "d2"),
            ((165, 32), "d3"),
            ((5, 32), "d4"),
            ((13, 4), "d5"),
            ((57, 32), "d6"),
        ];
        let d = d_names
            .iter()
            .find(|(h, _)| &rat(h.0, h.1) == w)
            .map(|(_, name)| *name);
        match (t.is_zero(), d) {
            (true, None) => "1".into(),
            (true, Some(d)) => d.into(),
            (false, None) => "phi".into(),
            (false, Some(d)) => format!("phi*{d}"),
        }
    }

    /// Tabulates module quantum dimensions against the printed table.
    pub fn qdim_table(&self) -> Vec<QdimRow> {
        let printed = [
            "1", "d1", "d5", "d2", "d3", "d4", "d6", "phi", "phi*d1", "phi*d5", "phi*d1",
            "phi*d2", "phi*d6", "phi*d3",
        ];
        self.modules
            .iter()
            .zip(printed)
            .map(|(m, printed)| {
                let symbolic = self.symbolic_qdim(m);
                QdimRow {
                    module: m.name.clone(),
                    value: self.qdims[m.m1],
                    typo: symbolic != printed,
                    symbolic,
                    printed: printed.into(),
                }
            })
            .collect()
    }

    /// Verifies that the squared module dimensions exhaust the global dimension.
    pub fn classification_check(&self) -> Result<ClassificationReport, SixaError> {
        let comp = |e: crate::qdim::QdimError| SixaError::Construction(e.to_string());
        let module_qdims: Vec<Approx> =
            self.modules.iter().map(|m| self.qdims[m.m1]).collect();
        let sum = sum_of_squares(&module_qdims).map_err(comp)?;
        let glob_u1 = sum_of_squares(&self.qdims).map_err(comp)?;
        let qdim_u = 1.0 + self.qdims[self.u2].value + self.qdims[self.u3].value;
        let glob_u = glob_u1.value / (qdim_u * qdim_u);
        let three_a = three_a_ring();
        let phi_idx = three_a
            .find_label(&Label::Frac(rat(2, 5)))
            .ok_or_else(|| SixaError::Construction("missing 3A label 2/5".into()))?;
        let phi = pf_qdim(&three_a, phi_idx).map_err(comp)?.value;
        let mm = minimal_fusion(7).map_err(|e| SixaError::Construction(e.to_string()))?;
        let mut d_sq = 0.0;
        for (i_prime, i) in [(3, 1), (1, 6), (2, 6), (2, 1), (3, 6), (4, 1)] {
            let idx = mm
                .find_label(&Label::Kac(kac::KacLabel::new(i_prime, i)))
                .ok_or_else(|| SixaError::Construction("missing p = 7 label".into()))?;
            let d = pf_qdim(&mm, idx).map_err(comp)?.value;
            d_sq += d * d;
        }
        let product_form = (1.0 + phi * phi) * (1.0 + d_sq);
        let residual = (sum.value - glob_u).abs() / glob_u.max(1.0);
        let product_residual = (glob_u - product_form).abs() / glob_u.max(1.0);
        Ok(ClassificationReport {
            sum_of_squares: sum.value,
            glob_u,
            glob_u_product_form: product_form,
            residual,
            product_residual,
            passed: residual <= CLASSIFICATION_TOL && product_residual <= CLASSIFICATION_TOL,
        })
    }

    fn first_summand_index(&self) -> BTreeMap<usize, usize> {
        self.modules
            .iter()
            .enumerate()
            .map(|(k, m)| (m.m1, k))
            .collect()
    }

    /// Computes the 14x14x14 fusion tensor and the ring it generates.
    pub fn fusion_table_14(&self) -> Result<FusionTable14, SixaError> {
        let index_of = self.first_summand_index();
        let n = self.modules.len();
        let mut tensor = vec![vec![vec![0u64; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let product = self
                    .ring
                    .fuse_labels(self.modules[i].m1, self.modules[j].m1);
                for (&lbl, &mult) in &product {
                    let Some(&k) = index_of.get(&lbl) else {
                        return Err(SixaError::ClosureFailure(format!(
                            "{} x {} contains {}",
                            self.modules[i].name, self.modules[j].name, self.ring.labels[lbl]
                        )));
                    };
                    tensor[i][j][k] = mult;
                }
            }
        }
        let mut flat = vec![0u64; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    flat[(i * n + j) * n + k] = tensor[i][j][k];
                }
            }
        }
        let ring = FusionRing::from_tensor((0..n).map(Label::Module).collect(), 0, flat);
        Ok(FusionTable14 { tensor, ring })
    }

    /// Scans all 196 products for closure, self-duality, and the character identity.
    pub fn closure_check(&self) -> Result<ClosureReport, SixaError> {
        let index_of = self.first_summand_index();
        let n = self.modules.len();
        let mut failures = Vec::new();
        let mut cases = Vec::new();
        let mut tensor = vec![vec![vec![0u64; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let product = self
                    .ring
                    .fuse_labels(self.modules[i].m1, self.modules[j].m1);
                let mut decomposed = BTreeMap::new();
                for (&lbl, &mult) in &product {
                    match index_of.get(&lbl) {
                        Some(&k) => {
                            tensor[i][j][k] = mult;
                            decomposed.insert(k, mult);
                        }
                        None => failures.push(format!(
                            "{} x {} contains {}",
                            self.modules[i].name, self.modules[j].name, self.ring.labels[lbl]
                        )),
                    }
                }
                let rhs = decomposed
                    .iter()
                    .map(|(&k, &mult)| match mult {
                        1 => self.modules[k].name.clone(),
                        _ => format!("{}*{}", mult, self.modules[k].name),
                    })
                    .collect::<Vec<_>>()
                    .join(" + ");
                cases.push(format!(
                    "{} x {} = {}",
                    self.modules[i].name, self.modules[j].name, rhs
                ));
            }
        }
        let all_closed = failures.is_empty();
        let mut self_dual = all_closed;
        let mut character_residual = 0.0f64;
        if all_closed {
            let qd: Vec<f64> = self.modules.iter().map(|m| self.qdims[m.m1].value).collect();
            for i in 0..n {
                for j in 0..n {
                    if (tensor[i][j][0] > 0) != (i == j) || tensor[i][j][0] > 1 {
                        self_dual = false;
                    }
                    let total: f64 =
                        (0..n).map(|k| tensor[i][j][k] as f64 * qd[k]).sum();
                    character_residual =
                        character_residual.max((qd[i] * qd[j] - total).abs());
                }
            }
        }
        Ok(ClosureReport {
            pairs_checked: n * n,
            all_closed,
            failures,
            cases,
            self_dual,
            qdim_character_residual: character_residual,
            passed: all_closed && self_dual && character_residual <= CHARACTER_TOL,
        })
    }

    /// The four iterated branchings realizing the modules inside lattice data.
    pub fn realization_cases(&self) -> Vec<RealizationCase> {
        let initial = |terms: &[(u64, [u64; 3])]| {
            ChainState::new(
                terms
                    .iter()
                    .map(|&(aff, pending)| ChainTerm::new(3, aff, pending.to_vec(), 1))
                    .collect(),
            )
        };
        vec![
            RealizationCase {
                name: "D1".into(),
                initial: initial(&[(0, [0, 0, 0]), (3, [1, 0, 0])]),
                assignments: vec![(0, 0), (1, 2), (2, 4), (3, 6)],
            },
            RealizationCase {
                name: "D2".into(),
                initial: initial(&[(0, [0, 0, 1]), (3, [1, 0, 1])]),
                assignments: vec![(5, 1), (6, 3), (4, 5)],
            },
            RealizationCase {
                name: "D3".into(),
                initial: initial(&[(2, [0, 0, 1]), (1, [1, 0, 1])]),
                assignments: vec![(11, 1), (12, 3), (13, 5)],
            },
            RealizationCase {
                name: "D4".into(),
                initial: initial(&[(2, [0, 0, 0]), (1, [1, 0, 0])]),
                assignments: vec![(7, 0), (8, 2), (9, 4), (10, 6)],
            },
        ]
    }

    /// Expands a (module, affine label) assignment list into claimed triples.
    pub fn claimed_triples(&self, assignments: &[(usize, u64)]) -> Vec<ClaimedTriple> {
        let mut out = Vec::new();
        for &(mi, s) in assignments {
            for (t, w) in &self.modules[mi].summands {
                out.push(ClaimedTriple {
                    three_a: t.clone(),
                    weight: w.clone(),
                    s,
                });
            }
        }
        out
    }

    /// Runs all four realization chains and matches them against the module list.
    pub fn realize_all(&self) -> Result<Vec<(String, MatchReport)>, SixaError> {
        let mut out = Vec::new();
        for case in self.realization_cases() {
            let chain = chain_branch(&case.initial, 3)
                .map_err(|e| SixaError::Construction(e.to_string()))?;
            let claimed = self.claimed_triples(&case.assignments);
            let report = match_realization(&chain, &claimed)
                .map_err(|e| SixaError::Construction(e.to_string()))?;
            out.push((case.name, report));
        }
        Ok(out)
    }
}

/// One verified pair of summand products.
#[derive(Debug, Clone, Serialize)]
pub struct RelationRow {
    /// Module name.
    pub module: String,
    /// Product of the second algebra summand with the first module summand.
    pub u2_product: String,
    /// Product of the third algebra summand with the first module summand.
    pub u3_product: String,
}

/// Full listing of the summand-relation products.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    /// One row per module.
    pub rows: Vec<RelationRow>,
}

/// One module's quantum dimension with its symbolic and printed forms.
#[derive(Debug, Clone, Serialize)]
pub struct QdimRow {
    /// Module name.
    pub module: String,
    /// Computed value with error bound.
    pub value: Approx,
    /// Symbolic form derived from the first summand.
    pub symbolic: String,
    /// Form listed in the source table.
    pub printed: String,
    /// True when the two symbolic forms disagree.
    pub typo: bool,
}

/// Completeness certificate for the 14-module classification.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    /// Sum of squared module dimensions.
    pub sum_of_squares: f64,
    /// Global dimension of the extension from the ambient quotient.
    pub glob_u: f64,
    /// The factored form of the same quantity.
    pub glob_u_product_form: f64,
    /// Relative gap between the sum and the quotient.
    pub residual: f64,
    /// Relative gap between the quotient and the factored form.
    pub product_residual: f64,
    /// True when both gaps are within tolerance.
    pub passed: bool,
}

/// The 14-module fusion tensor with its generated ring.
pub struct FusionTable14 {
    /// Multiplicities indexed by module triples.
    pub tensor: Vec<Vec<Vec<u64>>>,
    /// The fusion ring on module labels.
    pub ring: FusionRing,
}

impl FusionTable14 {
    /// Serializes the nonzero tensor entries as sparse quadruples.
    pub fn to_json(&self) -> Value {
        let n = self.tensor.len();
        let mut nonzero = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.tensor[i][j][k] > 0 {
                        nonzero.push(json!([i, j, k, self.tensor[i][j][k]]));
                    }
                }
            }
        }
        json!({
            "modules": (0..n).map(|i| format!("M{i}")).collect::<Vec<_>>(),
            "nonzero": nonzero,
        })
    }
}

/// Closure scan over all module pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    /// Number of ordered pairs scanned.
    pub pairs_checked: usize,
    /// True when every product stays in the module list.
    pub all_closed: bool,
    /// Products that left the list.
    pub failures: Vec<String>,
    /// Rendered decomposition of every pair.
    pub cases: Vec<String>,
    /// True when the unit appears exactly on the diagonal.
    pub self_dual: bool,
    /// Worst character residual over all pairs.
    pub qdim_character_residual: f64,
    /// True when closed, self-dual, and within character tolerance.
    pub passed: bool,
}

/// One iterated-branching realization with its claimed module assignment.
pub struct RealizationCase {
    /// Case name.
    pub name: String,
    /// Level-3 starting state with pending parities.
    pub initial: ChainState,
    /// Claimed (module index, affine label) pairs.
    pub assignments: Vec<(usize, u64)>,
}

/// Normalized structure-constant signs of the algebra product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StructureConstants {
    /// Sign of the paired second-summand constants.
    pub lambda: i8,
    /// Sign of the mixed third-summand constant.
    pub mu: i8,
    /// Sign of the pure third-summand constant.
    pub gamma: i8,
}

/// Enumerates all sign tuples satisfying the derived constraints.
pub fn sign_solutions() -> Vec<StructureConstants> {
    let mut out = Vec::new();
    for lambda in [1i8, -1] {
        for mu in [1i8, -1] {
            for gamma in [1i8, -1] {
                if lambda * lambda == mu * mu && gamma * lambda == 1 && lambda == gamma {
                    out.push(StructureConstants { lambda, mu, gamma });
                }
            }
        }
    }
    out
}

/// Twists a sign tuple by an automorphism acting as s2 and s3 on the summands.
pub fn sigma_orbit(base: StructureConstants, s2: i8, s3: i8) -> StructureConstants {
    StructureConstants {
        lambda: base.lambda * s3,
        mu: base.mu * s2,
        gamma: base.gamma * s3,
    }
}
