//! Quantum dimensions as Perron-Frobenius eigenvalues of fusion matrices, with global dimensions and extension identities.

use crate::exactnum::rat;
use crate::fusion::{minimal_fusion, tensor_ring, three_a_ring, FusionRing, Label};
use crate::kac::KacLabel;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

const RAYLEIGH_TOL: f64 = 1e-14;
const MAX_ITER: usize = 100_000;
const CHARACTER_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-8;

/// Errors raised by quantum-dimension computations.
#[derive(Debug, Error, PartialEq)]
pub enum QdimError {
    /// A label index is outside the ring.
    #[error("unknown label index {0}")]
    UnknownLabel(usize),
    /// Power iteration or the character self-check missed its tolerance.
    #[error("power iteration did not converge: {0}")]
    NonConvergence(String),
}

/// A real value together with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Approx {
    /// Computed value.
    pub value: f64,
    /// Absolute error bound from residuals and float propagation.
    pub bound: f64,
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12} (err <= {:.1e})", self.value, self.bound)
    }
}

/// One named numeric check with residual, tolerance, and verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    /// Relation being checked.
    pub name: String,
    /// Absolute residual achieved.
    pub residual: f64,
    /// Tolerance the residual must meet.
    pub tolerance: f64,
    /// Verdict residual <= tolerance.
    pub passed: bool,
}

impl Certificate {
    /// Builds a certificate, passing when the residual meets the tolerance.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Certificate {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

/// Quantum dimensions of every label with the global dimension and verified relations.
#[derive(Debug, Clone, Serialize)]
pub struct QDimReport {
    /// Display names of the ring labels.
    pub labels: Vec<String>,
    /// Per-label quantum dimensions.
    pub qdims: Vec<Approx>,
    /// Global dimension, the sum of squared quantum dimensions.
    pub global: Approx,
    /// Character and polynomial relations checked against pinned tolerances.
    pub algebraic_certificates: Vec<Certificate>,
}

impl QDimReport {
    /// True when every certificate passed.
    pub fn all_passed(&self) -> bool {
        self.algebraic_certificates.iter().all(|c| c.passed)
    }
}

/// Flattens the fusion matrix (N_a)_{jk} = N_{a,j}^k into row-major floats.
fn fusion_matrix(ring: &FusionRing, a: usize) -> Vec<f64> {
    let n = ring.len();
    let mut m = vec![0.0; n * n];
    for j in 0..n {
        for k in 0..n {
            m[j * n + k] = ring.coeff(a, j, k) as f64;
        }
    }
    m
}

/// Marks every node reachable from the start along positive entries.
fn reachable(m: &[f64], n: usize, transpose: bool) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(j) = stack.pop() {
        for k in 0..n {
            let e = if transpose { m[k * n + j] } else { m[j * n + k] };
            if e > 0.0 && !seen[k] {
                seen[k] = true;
                stack.push(k);
            }
        }
    }
    seen
}

/// Tests strong connectivity of the digraph of positive matrix entries.
fn strongly_connected(m: &[f64], n: usize) -> bool {
    reachable(m, n, false).iter().all(|&b| b) && reachable(m, n, true).iter().all(|&b| b)
}

/// Multiplies the flattened matrix by a vector.
fn matvec(m: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|j| (0..n).map(|k| m[j * n + k] * v[k]).sum())
        .collect()
}

/// Sup norm of a vector.
fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Runs power iteration until both the Rayleigh quotient and the normalized iterate stabilize.
fn power_iteration(m: &[f64], n: usize) -> Result<(f64, Vec<f64>), QdimError> {
    let vec_tol = 1e-14f64.max(4.0 * n as f64 * f64::EPSILON);
    let mut v = vec![1.0; n];
    let mut prev = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let w = matvec(m, n, &v);
        let num: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        let rq = num / den;
        let sup = sup_norm(&w);
        if sup == 0.0 {
            return Err(QdimError::NonConvergence("iterate vanished".into()));
        }
        let next: Vec<f64> = w.iter().map(|x| x / sup).collect();
        let vdiff = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        let done = (rq - prev).abs() < RAYLEIGH_TOL && vdiff < vec_tol;
        v = next;
        prev = rq;
        if done {
            return Ok((rq, v));
        }
    }
    Err(QdimError::NonConvergence(format!(
        "Rayleigh gap stayed above {RAYLEIGH_TOL:e} after {MAX_ITER} iterations"
    )))
}

/// Sup-norm residual of the eigenpair (d, v) for the flattened matrix.
fn eigen_residual(m: &[f64], n: usize, d: f64, v: &[f64]) -> f64 {
    let w = matvec(m, n, v);
    let r = (0..n)
        .map(|j| (w[j] - d * v[j]).abs())
        .fold(0.0f64, f64::max);
    r / sup_norm(v)
}

/// Reports whether the label's fusion matrix digraph is strongly connected.
pub fn is_irreducible(ring: &FusionRing, label: usize) -> Result<bool, QdimError> {
    if label >= ring.len() {
        return Err(QdimError::UnknownLabel(label));
    }
    let m = fusion_matrix(ring, label);
    Ok(strongly_connected(&m, ring.len()))
}

/// Computes all quantum dimensions at once from the unique positive ring character.
pub fn character_qdims(ring: &FusionRing) -> Result<Vec<Approx>, QdimError> {
    let n = ring.len();
    let mut m = vec![0.0; n * n];
    for a in 0..n {
        for j in 0..n {
            for k in 0..n {
                m[j * n + k] += ring.coeff(a, j, k) as f64;
            }
        }
    }
    let (_, v) = power_iteration(&m, n)?;
    let unit = v[ring.unit];
    if unit <= 0.0 {
        return Err(QdimError::NonConvergence(
            "eigenvector vanishes at the unit".into(),
        ));
    }
    let dims: Vec<f64> = v.iter().map(|x| x / unit).collect();
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let na = fusion_matrix(ring, a);
        let r = eigen_residual(&na, n, dims[a], &v);
        if r > CHARACTER_TOL * (1.0 + dims[a].abs()) {
            return Err(QdimError::NonConvergence(format!(
                "character residual {r:e} at label {a}"
            )));
        }
        out.push(Approx {
            value: dims[a],
            bound: r + 1e-13 * (1.0 + dims[a].abs()),
        });
    }
    Ok(out)
}

/// Computes the quantum dimension of one label as a Perron-Frobenius eigenvalue.
pub fn pf_qdim(ring: &FusionRing, label: usize) -> Result<Approx, QdimError> {
    if label >= ring.len() {
        return Err(QdimError::UnknownLabel(label));
    }
    let n = ring.len();
    let m = fusion_matrix(ring, label);
    if strongly_connected(&m, n) {
        let mut shifted = m.clone();
        for j in 0..n {
            shifted[j * n + j] += 1.0;
        }
        let (rq, v) = power_iteration(&shifted, n)?;
        let d = rq - 1.0;
        let bound = eigen_residual(&m, n, d, &v) + 1e-13 * (1.0 + d.abs());
        Ok(Approx { value: d, bound })
    } else {
        Ok(character_qdims(ring)?[label])
    }
}

/// Sums squared quantum dimensions over all labels of the ring.
pub fn global_dim(ring: &FusionRing) -> Result<Approx, QdimError> {
    sum_of_squares(&(0..ring.len())
        .map(|a| pf_qdim(ring, a))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Sums squares of approximations with propagated bounds.
pub(crate) fn sum_of_squares(qdims: &[Approx]) -> Result<Approx, QdimError> {
    let mut value = 0.0;
    let mut bound = 0.0;
    for q in qdims {
        value += q.value * q.value;
        bound += 2.0 * q.value.abs() * q.bound + q.bound * q.bound;
    }
    Ok(Approx {
        value,
        bound: bound + 1e-12 * value,
    })
}

/// Builds the quantum-dimension report with certificates for a ring.
pub fn qdim_report(ring: &FusionRing) -> Result<QDimReport, QdimError> {
    let n = ring.len();
    let qdims: Vec<Approx> = (0..n)
        .map(|a| pf_qdim(ring, a))
        .collect::<Result<_, _>>()?;
    let d: Vec<f64> = qdims.iter().map(|q| q.value).collect();
    let global = sum_of_squares(&qdims)?;
    let mut certs = Vec::new();
    certs.push(Certificate::new(
        "unit has quantum dimension one",
        (d[ring.unit] - 1.0).abs(),
        1e-10,
    ));
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    certs.push(Certificate::new(
        "all quantum dimensions at least one",
        (1.0 - min).max(0.0),
        CHARACTER_TOL,
    ));
    let dual_res = (0..n)
        .map(|a| (d[a] - d[ring.dual[a]]).abs())
        .fold(0.0f64, f64::max);
    certs.push(Certificate::new(
        "duality symmetry",
        dual_res,
        CHARACTER_TOL,
    ));
    let mut char_res = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let s: f64 = (0..n).map(|k| ring.coeff(a, b, k) as f64 * d[k]).sum();
            char_res = char_res.max((d[a] * d[b] - s).abs());
        }
    }
    certs.push(Certificate::new(
        "ring character property",
        char_res,
        CHARACTER_TOL,
    ));
    if *ring == three_a_ring() {
        let t = ring.find_label(&Label::Frac(rat(2, 5))).unwrap();
        certs.push(Certificate::new(
            "golden relation t^2 = 1 + t",
            (d[t] * d[t] - d[t] - 1.0).abs(),
            CHARACTER_TOL,
        ));
    }
    if minimal_fusion(7).map(|m| m == *ring).unwrap_or(false) {
        let x = d[ring.find_label(&Label::Kac(KacLabel::new(1, 5))).unwrap()];
        let y = d[ring.find_label(&Label::Kac(KacLabel::new(1, 3))).unwrap()];
        certs.push(Certificate::new(
            "x^2 = 1 + y",
            (x * x - 1.0 - y).abs(),
            CHARACTER_TOL,
        ));
        certs.push(Certificate::new(
            "x*y = x + y",
            (x * y - x - y).abs(),
            CHARACTER_TOL,
        ));
        certs.push(Certificate::new(
            "y^2 = 1 + x + y",
            (y * y - 1.0 - x - y).abs(),
            CHARACTER_TOL,
        ));
    }
    Ok(QDimReport {
        labels: ring.labels.iter().map(|l| l.to_string()).collect(),
        qdims,
        global,
        algebraic_certificates: certs,
    })
}

/// Checks the extension identity glob_sub = glob_ext * qdim_ext^2 within scaled tolerance.
pub fn extension_check(glob_sub: f64, qdim_ext: f64, glob_ext: f64) -> bool {
    let rhs = glob_ext * qdim_ext * qdim_ext;
    (glob_sub - rhs).abs() <= IDENTITY_TOL * glob_sub.abs().max(rhs.abs()).max(1.0)
}

/// Checks multiplicativity of the global dimension under tensor products.
pub fn tensor_glob_check(r1: &FusionRing, r2: &FusionRing) -> bool {
    let t = tensor_ring(r1, r2);
    match (global_dim(&t), global_dim(r1), global_dim(r2)) {
        (Ok(gt), Ok(g1), Ok(g2)) => {
            let rhs = g1.value * g2.value;
            (gt.value - rhs).abs() <= IDENTITY_TOL * gt.value.abs().max(rhs.abs()).max(1.0)
        }
        _ => false,
    }
}
