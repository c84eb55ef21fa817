//! Randomized checking of every computed quantity against the oracle and the bounds.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use twisted_betti::analysis::{analyze, AnalysisOptions};
use twisted_betti::bounds::{beta_certificate, BoundsError};
use twisted_betti::fuzz::{random_instance, FuzzInstance};
use twisted_betti::oracle::oracle_h1_along;
use twisted_betti::Cyclo;

use crate::input::to_file;
use crate::CliError;

pub struct FuzzConfig {
    pub lines: usize,
    pub order: u32,
    pub trials: usize,
    pub seed: u64,
    pub sharp_only: bool,
    pub out: PathBuf,
}

struct Trial {
    index: usize,
    instance: Option<FuzzInstance>,
    h1: Option<usize>,
    sharp: bool,
    vanishing: bool,
    problems: Vec<String>,
}

fn run_trial(cfg: &FuzzConfig, index: usize) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let sharp = cfg.sharp_only || index % 3 == 2;
    let mut trial = Trial {
        index,
        instance: None,
        h1: None,
        sharp,
        vanishing: false,
        problems: Vec::new(),
    };
    let Some(inst) = random_instance(&mut rng, cfg.lines, cfg.order, sharp) else {
        return trial;
    };
    let (arr, ls) = (&inst.arrangement, &inst.system);
    let opts = AnalysisOptions {
        seed: index as u64,
        ..AnalysisOptions::default()
    };
    match analyze(arr, ls, &opts) {
        Ok(a) => {
            trial.h1 = Some(a.homology.h1);
            trial.vanishing = a.sharp.vanishing_applies;
            trial.problems.extend(a.failures());
            let decone: Vec<usize> = if arr.len() <= 6 { (0..arr.len()).collect() } else { vec![index % arr.len()] };
            for l in decone {
                match oracle_h1_along::<Cyclo>(arr, ls, l, opts.seed) {
                    Ok(o) if o == a.homology.h1 => {}
                    Ok(o) => trial.problems.push(format!("oracle along line {l} gives {o}")),
                    Err(e) => trial.problems.push(format!("oracle along line {l}: {e}")),
                }
            }
            for l0 in 0..arr.len() {
                match beta_certificate::<Cyclo>(arr, ls, l0, opts.seed) {
                    Ok(c) if c.holds() => {}
                    Ok(_) => trial.problems.push(format!("certificate fails on line {l0}")),
                    Err(BoundsError::PencilNotCovered) => {}
                    Err(e) => trial.problems.push(format!("certificate on line {l0}: {e}")),
                }
            }
        }
        Err(e) => trial.problems.push(e.to_string()),
    }
    trial.instance = Some(inst);
    trial
}

fn dump(dir: &Path, trial: &Trial) -> Result<String, CliError> {
    let inst = trial.instance.as_ref().expect("only completed trials are dumped");
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("trial-{}.json", trial.index));
    let text = serde_json::to_string_pretty(&to_file(&inst.arrangement, &inst.system)).expect("serializable");
    std::fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

/// Runs the trials in parallel; the summary does not depend on scheduling.
pub fn run(cfg: &FuzzConfig) -> Result<(Value, usize), CliError> {
    let trials: Vec<Trial> = (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let (mut completed, mut sharp, mut vanishing) = (0, 0, 0);
    for t in &trials {
        let Some(h) = t.h1 else {
            if t.instance.is_some() {
                failures.push(json!({"trial": t.index, "problems": t.problems, "file": dump(&cfg.out, t)?}));
            }
            continue;
        };
        completed += 1;
        *histogram.entry(h.to_string()).or_default() += 1;
        sharp += usize::from(t.sharp);
        vanishing += usize::from(t.vanishing);
        if !t.problems.is_empty() {
            failures.push(json!({"trial": t.index, "h1": h, "problems": t.problems, "file": dump(&cfg.out, t)?}));
        }
    }
    let violations = failures.len();
    let summary = json!({
        "lines": cfg.lines,
        "order": cfg.order,
        "seed": cfg.seed,
        "sharp_only": cfg.sharp_only,
        "trials": cfg.trials,
        "completed": completed,
        "skipped": cfg.trials - completed - failures.iter().filter(|f| f.get("h1").is_none()).count(),
        "sharp_pair_trials": sharp,
        "vanishing_checked": vanishing,
        "h1_histogram": histogram,
        "violations": violations,
        "failures": failures,
    });
    Ok((summary, violations))
}
