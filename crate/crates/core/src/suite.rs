//! Deterministic verification suites: seeded sampling of divisor classes and
//! flags, one `CriterionReport` per check. The CLI `verify` command and the
//! acceptance tests both drive these runners, so a disagreement found by one
//! is reproducible by the other.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cones;
use crate::criteria::{self, CriterionReport};
use crate::error::{Error, Result};
use crate::model::{DivisorClass, SurfaceModel};
use crate::rat::Rat;
use crate::toric;
use crate::zariski;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// big classes sampled per model
    pub classes: usize,
    /// slice parameters tried per (class, flag) pair
    pub slice_samples: usize,
    /// pins the slice suite to one parameter value; pairs whose threshold
    /// is below it are skipped
    pub slice_t: Option<Rat>,
    pub eps_list: Vec<Rat>,
    /// simplex size for the augmented-sequence suite
    pub eps_simplex: Rat,
    pub p_max: usize,
    /// refinement level compared against level 1 in the toric suite
    pub oracle_level: u32,
    /// pseudo-effective classes checked against the exhaustive oracle
    pub oracle_classes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0x6f6b_6f75_6e6b,
            classes: 10,
            slice_samples: 4,
            slice_t: None,
            eps_list: vec![Rat::new(1, 4), Rat::new(1, 2), Rat::one()],
            eps_simplex: Rat::new(1, 2),
            p_max: 8,
            oracle_level: 6,
            oracle_classes: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    TheoremA,
    TheoremB,
    TheoremC,
    Slice,
    Nested,
    Multiplicity,
    Augmented,
    Sigma,
    Oracle,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        Ok(match s {
            "theoremA" => Suite::TheoremA,
            "theoremB" => Suite::TheoremB,
            "theoremC" => Suite::TheoremC,
            "slice" => Suite::Slice,
            "nested" => Suite::Nested,
            "multiplicity" => Suite::Multiplicity,
            "augmented" => Suite::Augmented,
            "sigma" => Suite::Sigma,
            "oracle" => Suite::Oracle,
            "all" => Suite::All,
            other => {
                return Err(Error::Parse(format!(
                    "unknown suite `{other}` (expected one of all, theoremA, theoremB, \
                     theoremC, slice, nested, multiplicity, augmented, sigma, oracle)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::TheoremA => "theoremA",
            Suite::TheoremB => "theoremB",
            Suite::TheoremC => "theoremC",
            Suite::Slice => "slice",
            Suite::Nested => "nested",
            Suite::Multiplicity => "multiplicity",
            Suite::Augmented => "augmented",
            Suite::Sigma => "sigma",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CriterionReport>,
}

impl SuiteOutcome {
    fn collect(name: &str, checks: Vec<CriterionReport>) -> Self {
        let passed = checks.iter().filter(|c| c.agree).count();
        SuiteOutcome {
            suite: name.to_string(),
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn first_failure(&self) -> Option<&CriterionReport> {
        self.checks.iter().find(|c| !c.agree)
    }
}

fn rng_for(cfg: &SuiteConfig, tag: &str) -> ChaCha8Rng {
    // stable per-suite stream: fold the tag into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(cfg.seed ^ h)
}

fn random_class(model: &SurfaceModel, rng: &mut ChaCha8Rng) -> DivisorClass {
    let coeffs: Vec<i64> = (0..model.rank).map(|_| rng.random_range(-5..=7)).collect();
    DivisorClass::from_ints(&coeffs)
}

/// Rejection-samples `n` integral classes satisfying `pred`.
pub fn sample_classes<F>(
    model: &SurfaceModel,
    n: usize,
    rng: &mut ChaCha8Rng,
    mut pred: F,
) -> Vec<DivisorClass>
where
    F: FnMut(&SurfaceModel, &DivisorClass) -> bool,
{
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        assert!(
            attempts < 200_000,
            "sampler exhausted; the model admits too few classes"
        );
        let class = random_class(model, rng);
        if pred(model, &class) {
            out.push(class);
        }
    }
    out
}

pub fn sample_big(model: &SurfaceModel, n: usize, rng: &mut ChaCha8Rng) -> Vec<DivisorClass> {
    sample_classes(model, n, rng, |m, c| cones::is_big(m, c).unwrap_or(false))
}

pub fn sample_ample(model: &SurfaceModel, n: usize, rng: &mut ChaCha8Rng) -> Vec<DivisorClass> {
    sample_classes(model, n, rng, |m, c| cones::is_ample(m, c).unwrap_or(false))
}

pub fn sample_pseudoeffective(
    model: &SurfaceModel,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<DivisorClass> {
    sample_classes(model, n, rng, |m, c| {
        cones::is_pseudoeffective(m, c).map(|t| t.holds).unwrap_or(false)
    })
}

/// A random rational in (0, 1) with small denominator.
fn random_unit_fraction(rng: &mut ChaCha8Rng) -> Rat {
    let den = rng.random_range(2..=32i64);
    let num = rng.random_range(1..den);
    Rat::new(num, den)
}

fn theorem_a(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "theoremA");
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            checks.push(criteria::origin_criterion(model, &class, flag)?);
        }
        checks.push(criteria::nef_report(model, &class)?);
    }
    Ok(checks)
}

fn theorem_b(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "theoremB");
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            checks.push(criteria::simplex_criterion(model, &class, flag)?);
        }
        checks.push(criteria::ample_report(model, &class)?);
    }
    for class in sample_ample(model, cfg.classes.div_ceil(2), &mut rng) {
        for flag in &model.flags {
            let lambda = criteria::largest_simplex_constant(model, &class, flag)?.lambda;
            let report = CriterionReport {
                criterion: "ample-lambda-positive".into(),
                left: lambda.is_positive(),
                right: true,
                agree: lambda.is_positive(),
                certificates: [
                    ("divisor".to_string(), serde_json::to_value(&class).unwrap()),
                    ("flag".to_string(), serde_json::to_value(&flag.id).unwrap()),
                    ("lambda".to_string(), serde_json::to_value(&lambda).unwrap()),
                ]
                .into_iter()
                .collect(),
            };
            checks.push(report);
        }
    }
    Ok(checks)
}

fn theorem_c(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "theoremC");
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            checks.push(criteria::theorem_c_report(model, &class, flag)?);
        }
    }
    Ok(checks)
}

fn slice_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "slice");
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            let mu = cones::mu_threshold(model, &class, &flag.curve)?;
            if let Some(t) = &cfg.slice_t {
                if !t.is_negative() && t < &mu {
                    checks.push(criteria::slice_check(model, &class, flag, t)?);
                }
                continue;
            }
            for _ in 0..cfg.slice_samples {
                let t = &mu * &random_unit_fraction(&mut rng);
                checks.push(criteria::slice_check(model, &class, flag, &t)?);
            }
        }
    }
    Ok(checks)
}

fn nested_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "nested");
    let amples = sample_ample(model, 1, &mut rng);
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            checks.push(criteria::nested_check(
                model,
                &class,
                &amples[0],
                flag,
                &cfg.eps_list,
            )?);
        }
    }
    Ok(checks)
}

fn multiplicity_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "multiplicity");
    let mut checks = Vec::new();
    for class in sample_big(model, cfg.classes, &mut rng) {
        for flag in &model.flags {
            checks.push(criteria::multiplicity_bound_check(model, &class, flag)?);
        }
    }
    Ok(checks)
}

fn augmented_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "augmented");
    let amples = sample_ample(model, 1, &mut rng);
    let mut checks = Vec::new();
    let big = sample_big(model, cfg.classes.div_ceil(2), &mut rng);
    for class in big.iter().chain(amples.iter()) {
        for flag in &model.flags {
            match criteria::augmented_sequence_check(
                model,
                class,
                &amples[0],
                flag,
                &cfg.eps_simplex,
                cfg.p_max,
            ) {
                Ok(report) => checks.push(report),
                // a divisor too close to the boundary may need more levels
                // than p_max to clear the ample shift; skip those pairs
                Err(Error::NoBigLevel(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(checks)
}

fn sigma_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "sigma");
    let mut checks = Vec::new();
    let negatives: Vec<String> = model.negative_curves().map(|c| c.id.clone()).collect();
    if negatives.is_empty() {
        return Ok(checks);
    }
    for class in sample_big(model, cfg.classes, &mut rng) {
        for id in &negatives {
            let sigma = zariski::sigma_coefficient(model, &class, id)?;
            let upper = if sigma.is_positive() {
                sigma
            } else {
                cones::mu_threshold(model, &class, id)?
            };
            let grid: Vec<Rat> = (0..=10)
                .map(|k| &upper * &Rat::new(k, 10))
                .collect();
            checks.push(criteria::sigma_variation_check(model, &class, id, &grid)?);
        }
    }
    Ok(checks)
}

fn oracle_suite(model: &SurfaceModel, cfg: &SuiteConfig) -> Result<Vec<CriterionReport>> {
    let mut rng = rng_for(cfg, "oracle");
    let mut checks = Vec::new();

    // iterative decomposition against the exhaustive subset search
    for class in sample_pseudoeffective(model, cfg.oracle_classes, &mut rng) {
        let fast = zariski::zariski_decompose(model, &class)?;
        let slow = zariski::exhaustive_zariski(model, &class)?;
        let agree = fast == slow;
        checks.push(CriterionReport {
            criterion: "zariski-oracle".into(),
            left: agree,
            right: true,
            agree,
            certificates: [(
                "divisor".to_string(),
                serde_json::to_value(&class).unwrap(),
            )]
            .into_iter()
            .collect(),
        });
    }

    // finite-level section hulls against the chamber-walk polygon
    if let Some(fan) = toric::builtin_toric_for(model) {
        let toric_flags: Vec<&crate::model::Flag> = model
            .flags
            .iter()
            .filter(|f| fan.flag_rays.contains_key(&f.id))
            .collect();
        for class in sample_big(model, cfg.classes, &mut rng) {
            let nef = cones::is_nef(model, &class)?.holds;
            for flag in &toric_flags {
                let at_one = fan.oracle_compare(model, &class, flag, 1)?;
                let refined = fan.oracle_compare(model, &class, flag, cfg.oracle_level)?;
                let mut ok = at_one.contained && refined.contained;
                ok &= refined.area_gap <= at_one.area_gap;
                if nef {
                    ok &= at_one.area_gap.is_zero();
                }
                checks.push(CriterionReport {
                    criterion: "toric-oracle".into(),
                    left: ok,
                    right: true,
                    agree: ok,
                    certificates: [
                        ("divisor".to_string(), serde_json::to_value(&class).unwrap()),
                        ("flag".to_string(), serde_json::to_value(&flag.id).unwrap()),
                        (
                            "gap_level_1".to_string(),
                            serde_json::to_value(&at_one.area_gap).unwrap(),
                        ),
                        (
                            "gap_refined".to_string(),
                            serde_json::to_value(&refined.area_gap).unwrap(),
                        ),
                        ("nef".to_string(), serde_json::to_value(&nef).unwrap()),
                    ]
                    .into_iter()
                    .collect(),
                });
            }
        }
    }
    Ok(checks)
}

/// Runs the selected suite (or all of them) against one model.
pub fn run_suite(
    model: &SurfaceModel,
    suite: Suite,
    cfg: &SuiteConfig,
) -> Result<Vec<SuiteOutcome>> {
    let singles: Vec<Suite> = match suite {
        Suite::All => vec![
            Suite::TheoremA,
            Suite::TheoremB,
            Suite::TheoremC,
            Suite::Slice,
            Suite::Nested,
            Suite::Multiplicity,
            Suite::Augmented,
            Suite::Sigma,
            Suite::Oracle,
        ],
        s => vec![s],
    };
    let mut outcomes = Vec::new();
    for s in singles {
        let checks = match s {
            Suite::TheoremA => theorem_a(model, cfg)?,
            Suite::TheoremB => theorem_b(model, cfg)?,
            Suite::TheoremC => theorem_c(model, cfg)?,
            Suite::Slice => slice_suite(model, cfg)?,
            Suite::Nested => nested_suite(model, cfg)?,
            Suite::Multiplicity => multiplicity_suite(model, cfg)?,
            Suite::Augmented => augmented_suite(model, cfg)?,
            Suite::Sigma => sigma_suite(model, cfg)?,
            Suite::Oracle => oracle_suite(model, cfg)?,
            Suite::All => unreachable!(),
        };
        outcomes.push(SuiteOutcome::collect(s.name(), checks));
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn suites_are_deterministic() {
        let model = models::f1();
        let cfg = SuiteConfig {
            classes: 3,
            oracle_classes: 5,
            ..SuiteConfig::default()
        };
        let a = run_suite(&model, Suite::TheoremA, &cfg).unwrap();
        let b = run_suite(&model, Suite::TheoremA, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn all_suites_pass_on_the_small_config() {
        let cfg = SuiteConfig {
            classes: 3,
            slice_samples: 2,
            oracle_classes: 8,
            ..SuiteConfig::default()
        };
        for model in models::bundled() {
            for outcome in run_suite(&model, Suite::All, &cfg).unwrap() {
                assert_eq!(
                    outcome.failed,
                    0,
                    "suite {} failed: {:?}",
                    outcome.suite,
                    outcome.first_failure()
                );
            }
        }
    }

    #[test]
    fn unknown_suite_name_is_rejected() {
        assert!(Suite::parse("nope").is_err());
        assert_eq!(Suite::parse("theoremC").unwrap(), Suite::TheoremC);
    }
}
