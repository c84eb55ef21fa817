//! One-shot analysis of an instance: homology, bounds, sharp-pair checks and the oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::bounds::{best_bound, line_bounds, sharp_pair_report, BoundsError, LineBounds, SharpPairReport};
use crate::field::Field;
use crate::geometry::{euler_characteristic, Arrangement, NormalizationRecord};
use crate::homology::{HomologyError, HomologyReport, Instance};
use crate::local_system::{validate, LocalSystem, LocalSystemError};
use crate::oracle::{oracle_h1, OracleError};
use crate::Cyclo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("local system rejected: {0}")]
    Admissibility(#[from] LocalSystemError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub seed: u64,
    /// Compute in `Complex64` instead of the cyclotomic field.
    pub float: bool,
    pub oracle: bool,
    /// In exact mode, also compute the rank in floating point and compare.
    pub float_check: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            seed: 0,
            float: false,
            oracle: true,
            float_check: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub record: NormalizationRecord,
    pub normalized: Arrangement,
    pub resonant: Vec<usize>,
    pub homology: HomologyReport,
    pub exact: bool,
    pub float_rank: Option<usize>,
    pub line_bounds: Vec<LineBounds>,
    pub best_bound: Option<usize>,
    pub sharp: SharpPairReport,
    pub oracle: Option<usize>,
    pub euler: i64,
}

impl Analysis {
    /// `h_2 = chi + h_1`, since `h_0 = 0` for a nontrivial system.
    pub fn h2(&self) -> i64 {
        self.euler + self.homology.h1 as i64
    }

    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle.map(|o| o == self.homology.h1)
    }

    pub fn float_agrees(&self) -> Option<bool> {
        self.float_rank.map(|r| r == self.homology.rank)
    }

    pub fn cdo_holds(&self) -> bool {
        self.line_bounds.iter().all(|b| self.homology.h1 <= b.cdo)
    }

    /// `None` when the bound does not apply (pencils).
    pub fn r0_holds(&self) -> Option<bool> {
        if self.line_bounds.iter().any(|b| b.r0.is_none()) {
            return None;
        }
        Some(self.line_bounds.iter().all(|b| b.r0.is_some_and(|r| self.homology.h1 <= r)))
    }

    /// Every internal check that must hold for a correct computation.
    pub fn consistent(&self) -> bool {
        self.homology.zaslavsky_ok
            && self.oracle_agrees() != Some(false)
            && self.float_agrees() != Some(false)
            && self.cdo_holds()
            && self.r0_holds() != Some(false)
            && self.sharp.holds()
            && self.h2() >= 0
    }

    /// Human-readable list of failed checks.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.homology.zaslavsky_ok {
            out.push("bounded chamber count differs from the Zaslavsky count".to_string());
        }
        if self.oracle_agrees() == Some(false) {
            out.push(format!("oracle gives {} but chambers give {}", self.oracle.unwrap(), self.homology.h1));
        }
        if self.float_agrees() == Some(false) {
            out.push("floating-point rank differs from exact rank".to_string());
        }
        if !self.cdo_holds() {
            out.push("CDO bound violated".to_string());
        }
        if self.r0_holds() == Some(false) {
            out.push("resonant-point bound violated".to_string());
        }
        if !self.sharp.holds() {
            out.push("sharp-pair statement violated".to_string());
        }
        if self.h2() < 0 {
            out.push("negative h2".to_string());
        }
        out
    }
}

fn run<F: Field>(arr: &Arrangement, ls: &LocalSystem, opts: &AnalysisOptions) -> Result<(Instance<F>, HomologyReport, Option<usize>), AnalysisError> {
    let inst = Instance::<F>::new(arr, ls, opts.seed)?;
    let report = inst.report()?;
    let oracle = if opts.oracle {
        Some(oracle_h1::<F>(arr, ls, opts.seed)?)
    } else {
        None
    };
    Ok((inst, report, oracle))
}

pub fn analyze(arr: &Arrangement, ls: &LocalSystem, opts: &AnalysisOptions) -> Result<Analysis, AnalysisError> {
    validate(ls, arr)?;
    let exact = ls.is_exact() && !opts.float;
    let (record, normalized, resonant, homology, oracle) = if exact {
        let (inst, rep, o) = run::<Cyclo>(arr, ls, opts)?;
        (inst.record, inst.arrangement, inst.resonant.points, rep, o)
    } else {
        let (inst, rep, o) = run::<Complex64>(arr, ls, opts)?;
        (inst.record, inst.arrangement, inst.resonant.points, rep, o)
    };
    let float_rank = if exact && opts.float_check {
        Some(Instance::<Complex64>::new(arr, ls, opts.seed)?.report()?.rank)
    } else {
        None
    };
    let bounds = line_bounds(arr, ls)?;
    Ok(Analysis {
        record,
        normalized,
        resonant,
        best_bound: best_bound(&bounds),
        line_bounds: bounds,
        sharp: sharp_pair_report(arr, ls, homology.h1),
        homology,
        exact,
        float_rank,
        oracle,
        euler: euler_characteristic(arr),
    })
}
