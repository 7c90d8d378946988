//! The Newton-Schulz orthogonalization step and its scalar oracle.
//!
//! Because the update `G' = aG + b(GG^T)G + c(GG^T)(GG^T)G` is an odd
//! polynomial in the matrix, it acts on the singular values alone: the
//! output's singular values are `|p(s_i)|` of the input's, re-sorted, where
//! `p(s) = a s + b s^3 + c s^5`. [`scalar_polynomial`] and [`scalar_iterate`]
//! expose that diagonal action directly; they double as an independent
//! oracle for the dense-matrix path in the test suites.
//!
//! The dense evaluation order is fixed: `M = G G^T` is formed once per step,
//! then `aG + b(MG) + c(M(MG))`. Floating-point results differ slightly
//! across orderings, and the trace tolerances assume this one.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{
    gram_left, gram_right, matmul, normalize_frobenius, residual_from_gram,
    spectrum_from_gram, Spectrum,
};
use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Coefficients of the odd quintic `p(s) = a s + b s^3 + c s^5`. The
/// structure has no even terms, so `p(0) = 0` and `p(-s) = -p(s)` hold by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl NsCoefficients {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a, b, c })
    }

    /// The identity map `p(s) = s`.
    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0 }
    }
}

impl Default for NsCoefficients {
    /// The quintic used by the muon reference implementation. A config
    /// default only; nothing in the library assumes these numbers.
    fn default() -> Self {
        Self {
            a: 3.4445,
            b: -4.7750,
            c: 2.0315,
        }
    }
}

/// An iteration plan: how many steps, and which coefficients each step uses.
/// A single triple may be reused for every step, or one triple given per
/// step (the slope at zero can be re-tuned as the spectrum contracts).
#[derive(Debug, Clone, PartialEq)]
pub struct NsSchedule {
    coefficients: Vec<NsCoefficients>,
    iterations: usize,
}

impl NsSchedule {
    pub fn new(coefficients: Vec<NsCoefficients>, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::Config("schedule needs at least one iteration".into()));
        }
        if coefficients.len() != 1 && coefficients.len() != iterations {
            return Err(Error::Config(format!(
                "coefficient list must have length 1 or {iterations}, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            coefficients,
            iterations,
        })
    }

    /// One triple reused for every iteration.
    pub fn uniform(k: NsCoefficients, iterations: usize) -> Result<Self> {
        Self::new(alloc::vec![k], iterations)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn coefficients(&self) -> &[NsCoefficients] {
        &self.coefficients
    }

    pub fn coefficient_at(&self, iteration: usize) -> NsCoefficients {
        debug_assert!(iteration < self.iterations);
        if self.coefficients.len() == 1 {
            self.coefficients[0]
        } else {
            self.coefficients[iteration]
        }
    }
}

impl Default for NsSchedule {
    /// Five iterations of the default coefficients.
    fn default() -> Self {
        Self::uniform(NsCoefficients::default(), 5).unwrap()
    }
}

/// `p(s) = a s + b s^3 + c s^5`, evaluated in Horner form on `s^2` so that
/// odd symmetry is exact in floating point.
#[inline]
pub fn scalar_polynomial(s: f64, k: NsCoefficients) -> f64 {
    let s2 = s * s;
    s * (k.a + s2 * (k.b + s2 * k.c))
}

/// Trajectory `[s, p_1(s), p_2(p_1(s)), ...]` of length `iterations + 1`.
pub fn scalar_iterate(s: f64, schedule: &NsSchedule) -> Vec<f64> {
    let mut out = Vec::with_capacity(schedule.iterations() + 1);
    out.push(s);
    let mut cur = s;
    for i in 0..schedule.iterations() {
        cur = scalar_polynomial(cur, schedule.coefficient_at(i));
        out.push(cur);
    }
    out
}

/// One dense Newton-Schulz step. Requires a tall matrix (`rows >= cols`).
pub fn ns_step(g: &DenseMatrix, k: NsCoefficients) -> Result<DenseMatrix> {
    if g.rows() < g.cols() {
        return Err(Error::Config(format!(
            "ns_step needs a tall matrix, got {}x{}; pass the transpose",
            g.rows(),
            g.cols()
        )));
    }
    let m = gram_right(g); // G G^T, formed once
    let mg = matmul(&m, g)?;
    let mmg = matmul(&m, &mg)?;
    let entries = g
        .entries()
        .iter()
        .zip(mg.entries())
        .zip(mmg.entries())
        .map(|((&g0, &g1), &g2)| k.a * g0 + k.b * g1 + k.c * g2)
        .collect();
    DenseMatrix::from_vec(g.rows(), g.cols(), entries)
}

/// Per-iteration record: the spectrum and the summary statistics the
/// experiments plot.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    pub spectrum: Spectrum,
    pub ortho_residual: f64,
    pub min_sval: f64,
    pub max_sval: f64,
    pub tail_fraction: f64,
}

/// Records for iterations `0..=n`; index 0 describes the normalized input.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    tail_threshold: f64,
    records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn tail_threshold(&self) -> f64 {
        self.tail_threshold
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    pub fn final_record(&self) -> &IterationRecord {
        self.records.last().unwrap()
    }
}

/// Normalizes `g` by its Frobenius norm, then applies one [`ns_step`] per
/// scheduled iteration, recording the spectrum and metrics at every step
/// (including step 0). Returns the final iterate together with the trace.
pub fn ns_run(
    g: &DenseMatrix,
    schedule: &NsSchedule,
    tail_threshold: f64,
) -> Result<(DenseMatrix, IterationTrace)> {
    if !(tail_threshold > 0.0 && tail_threshold < 1.0) {
        return Err(Error::Config(format!(
            "tail threshold must be in (0, 1), got {tail_threshold}"
        )));
    }
    let mut cur = normalize_frobenius(g)?;
    let mut records = Vec::with_capacity(schedule.iterations() + 1);
    records.push(record_step(0, &cur, tail_threshold)?);
    for i in 0..schedule.iterations() {
        cur = ns_step(&cur, schedule.coefficient_at(i))?;
        records.push(record_step(i + 1, &cur, tail_threshold)?);
    }
    Ok((
        cur,
        IterationTrace {
            tail_threshold,
            records,
        },
    ))
}

/// Spectrum and metrics of one iterate. The Gram matrix `M^T M` is formed
/// once and feeds both the orthogonality residual and the eigensolve.
fn record_step(iteration: usize, m: &DenseMatrix, tail_threshold: f64) -> Result<IterationRecord> {
    let gram = gram_left(m);
    let ortho_residual = residual_from_gram(&gram);
    let spectrum = spectrum_from_gram(&gram)?;
    Ok(IterationRecord {
        iteration,
        ortho_residual,
        min_sval: spectrum.min(),
        max_sval: spectrum.max(),
        tail_fraction: spectrum.tail_fraction(tail_threshold),
        spectrum,
    })
}
