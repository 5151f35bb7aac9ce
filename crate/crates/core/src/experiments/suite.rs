//! The full verification battery: every verifier wired to its desk-scale
//! defaults, run as independent jobs with per-job seeds derived from one
//! master seed. Job output order is fixed by the registry order, never by
//! scheduling, so identical seeds give identical reports.

use super::*;
use crate::cheeger::{grid_bruteforce, half_line_scan};
use crate::constants;
use crate::error::Result;
use crate::linalg::{eigenvalue_stability_check, eigenvalues, SymMatrix};
use crate::measure::{Measure1d, Pareto};
use crate::quantile::{derivative_cells, EmpiricalQuantile};
use crate::report::{BoundReport, Relation};
use crate::rng;
use rayon::prelude::*;
use serde_json::json;

pub struct SuiteJob {
    pub name: &'static str,
    pub run: fn(u64) -> Result<Vec<BoundReport>>,
}

/// Golden values frozen from a 60-digit evaluation of the constant
/// formulas at exact rational inputs.
mod golden {
    pub const C_PARETO_5: f64 = 5.278_031_643_091_577;
    pub const C2_08_1: f64 = 64.0;
    pub const C3_08_1: f64 = 4.298_279_727_294_168;
    pub const C1_08_1_1: f64 = 11.666_666_666_666_666;
    pub const PARETO5_CHEEGER: f64 = 0.329_876_977_693_223_55;
}

fn constants_job(_seed: u64) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    let mut golden_row = |id: &str, lhs: f64, rhs: f64| {
        reports.push(BoundReport::exact(
            id,
            Relation::Equality,
            lhs,
            rhs,
            json!({"kind": "golden"}),
        ));
    };
    golden_row(
        "constant[C_pareto(5)]",
        constants::pareto_product_constant(5.0)?.value,
        golden::C_PARETO_5,
    );
    golden_row(
        "constant[C2(0.8,1)]",
        constants::variance_bound_constant(0.8, 1.0)?.value,
        golden::C2_08_1,
    );
    golden_row(
        "constant[C3(0.8,1)]",
        constants::mean_bound_constant(0.8, 1.0)?.value,
        golden::C3_08_1,
    );
    golden_row(
        "constant[C1(0.8,1,1)]",
        constants::moment_bound_constant(0.8, 1.0, 1.0)?.value,
        golden::C1_08_1_1,
    );
    golden_row(
        "constant[I_pareto(5)]",
        constants::pareto_cheeger_certificate(5.0)?.value,
        golden::PARETO5_CHEEGER,
    );

    // internal consistency: the named constants against their derivation
    // through the tail-moment constant
    for (alpha, i) in [(0.8, 1.0), (0.75, 0.33), (0.9, 2.5)] {
        let c3 = constants::mean_bound_constant(alpha, i)?.value;
        let c4 = constants::tail_moment_constant(alpha, 1.0 / alpha, 1.0, i)?.value;
        let via = 2.0 * i.powf((2.0 * alpha - 1.0) / alpha) * c4.powf(-(2.0 * alpha - 1.0) / alpha);
        reports.push(BoundReport::exact(
            format!("consistency[C3,alpha={alpha},I={i}]"),
            Relation::Equality,
            c3,
            via,
            json!({"kind": "consistency"}),
        ));
    }
    for (alpha, i) in [(0.8, 1.0), (0.7, 0.33), (0.9, 2.5)] {
        let c2 = constants::variance_bound_constant(alpha, i)?.value;
        let c4 = constants::tail_moment_constant(alpha, 1.0 / alpha, 2.0, i)?.value;
        let e = (6.0 * alpha - 4.0) / alpha;
        let via = 2f64.powf((10.0 * alpha - 6.0) / alpha) * i.powf(e) * c4.powf(-e);
        reports.push(BoundReport::exact(
            format!("consistency[C2,alpha={alpha},I={i}]"),
            Relation::Equality,
            c2,
            via,
            json!({"kind": "consistency"}),
        ));
    }
    Ok(reports)
}

fn cheeger_job(_seed: u64) -> Result<Vec<BoundReport>> {
    let pareto = build_measure("pareto:lambda=5")?;
    let hl = half_line_scan(pareto.as_ref(), 0.8, 4096)?;
    let bf = grid_bruteforce(pareto.as_ref(), 0.8, 16)?;
    let laplace = build_measure("laplace:rate=1")?;
    let hl_laplace = half_line_scan(laplace.as_ref(), 1.0, 4096)?;
    let bf_laplace = grid_bruteforce(laplace.as_ref(), 1.0, 16)?;
    Ok(vec![
        BoundReport::exact(
            "cheeger-half-line[pareto5]",
            Relation::UpperBound,
            (hl.value - golden::PARETO5_CHEEGER).abs(),
            1e-6,
            json!({"value": hl.value, "expected": golden::PARETO5_CHEEGER}),
        ),
        BoundReport::exact(
            "cheeger-bruteforce[pareto5]",
            Relation::UpperBound,
            (bf.value - golden::PARETO5_CHEEGER).abs() / golden::PARETO5_CHEEGER,
            0.05,
            json!({"value": bf.value, "cells": 16}),
        ),
        BoundReport::exact(
            "cheeger-ordering[pareto5]",
            Relation::UpperBound,
            hl.value,
            bf.value + 2.0 / 16.0 * bf.value,
            json!({"half_line": hl.value, "bruteforce": bf.value}),
        ),
        BoundReport::exact(
            "cheeger-half-line[laplace1]",
            Relation::UpperBound,
            (hl_laplace.value - 1.0).abs(),
            1e-6,
            json!({"value": hl_laplace.value}),
        ),
        BoundReport::exact(
            "cheeger-bruteforce[laplace1]",
            Relation::UpperBound,
            (bf_laplace.value - 1.0).abs(),
            0.05,
            json!({"value": bf_laplace.value, "cells": 16}),
        ),
    ])
}

fn dq_saturation_job(_seed: u64) -> Result<Vec<BoundReport>> {
    let measure = build_measure("pareto:lambda=5")?;
    let q = EmpiricalQuantile::from_measure(measure, 4096, true)?;
    let cheeger = constants::pareto_cheeger_certificate(5.0)?.value;
    let cells = derivative_cells(&q, 0.8, cheeger)?;
    let window: Vec<_> = cells
        .iter()
        .filter(|c| c.p_lo >= 0.6 && c.p_hi <= 0.99)
        .collect();
    let min_ratio = window
        .iter()
        .map(|c| c.ratio())
        .fold(f64::INFINITY, f64::min);
    let max_excess = window
        .iter()
        .map(|c| c.ratio() - (1.0 + c.cell_slack / c.bound_mid))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        BoundReport::exact(
            "dq-saturation-lower",
            Relation::LowerBound,
            min_ratio,
            0.999,
            json!({"window": [0.6, 0.99], "cells": window.len()}),
        ),
        BoundReport::exact(
            "dq-saturation-upper",
            Relation::UpperBound,
            max_excess,
            0.0,
            json!({"window": [0.6, 0.99]}),
        ),
    ])
}

fn lemmas_job(_seed: u64) -> Result<Vec<BoundReport>> {
    run_lemma_suite(&LemmaSuiteConfig::pareto_default())
}

fn pareto_job(seed: u64) -> Result<Vec<BoundReport>> {
    verify_pareto_theorem(&ParetoTheoremConfig::new(
        5.0,
        vec![16, 64, 256, 1024],
        100_000,
        seed,
    ))
}

fn tails_job(seed: u64) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    let pareto = verify_tail_bounds(&TailBoundsConfig {
        measure: "pareto:lambda=5".into(),
        alpha: 0.8,
        cheeger: constants::pareto_cheeger_certificate(5.0)?.value,
        thresholds: vec![0.5, 1.0, 2.0, 4.0],
        samples: 100_000,
        seed,
        batches: 32,
        attained_upper: true,
        attained_lower: false,
    })?;
    for mut r in pareto {
        r.id = format!("pareto5/{}", r.id);
        reports.push(r);
    }
    let laplace = verify_tail_bounds(&TailBoundsConfig {
        measure: "laplace:rate=1".into(),
        alpha: 1.0,
        cheeger: 1.0,
        thresholds: vec![0.5, 1.0, 2.0, 3.0],
        samples: 100_000,
        seed: seed.wrapping_add(1),
        batches: 32,
        attained_upper: true,
        attained_lower: true,
    })?;
    for mut r in laplace {
        r.id = format!("laplace1/{}", r.id);
        reports.push(r);
    }
    Ok(reports)
}

fn poincare_job(seed: u64) -> Result<Vec<BoundReport>> {
    verify_sharp_poincare_dp(&SharpPoincareConfig {
        measure: "laplace:rate=1".into(),
        poincare_constant: 4.0,
        p: 1.5,
        dims: vec![8, 27, 64, 125],
        samples: 100_000,
        seed,
        batches: 32,
        slope_tol: 0.05,
    })
}

fn matrix_job(seed: u64) -> Result<Vec<BoundReport>> {
    let mut reports = verify_random_matrix(&RandomMatrixConfig::new(5.0, 50, 500, seed))?;

    // eigenvalue stability on seeded random pairs
    let mut worst = f64::NEG_INFINITY;
    for k in 0..100u64 {
        let gen = |s: u64| {
            let mut i = 0u64;
            SymMatrix::from_fn(8, |_, _| {
                i += 1;
                4.0 * rng::uniform01(s, i) - 2.0
            })
            .expect("order>=1")
        };
        let r = eigenvalue_stability_check(&gen(seed ^ (2 * k)), &gen(seed ^ (2 * k + 1)))?;
        worst = worst.max(r.lhs - r.rhs);
    }
    reports.push(BoundReport::exact(
        "eigenvalue-stability[100 pairs,n=8]",
        Relation::UpperBound,
        worst,
        0.0,
        json!({"pairs": 100, "n": 8}),
    ));

    // similarity invariants of the solver on seeded matrices
    let mut worst_inv = 0.0f64;
    for k in 0..20u64 {
        let mut i = 0u64;
        let m = SymMatrix::from_fn(5, |_, _| {
            i += 1;
            4.0 * rng::uniform01(seed ^ (k + 1000), i) - 2.0
        })
        .expect("order>=1");
        let e = eigenvalues(&m)?;
        let scale = 5.0 * m.frobenius_squared().sqrt().max(1.0);
        let trace_dev = (e.iter().sum::<f64>() - m.trace()).abs() / scale;
        let frob_dev = (e.iter().map(|x| x * x).sum::<f64>() - m.frobenius_squared()).abs() / scale;
        worst_inv = worst_inv.max(trace_dev).max(frob_dev);
    }
    reports.push(BoundReport::exact(
        "eigensolver-invariants[20 matrices,n=5]",
        Relation::UpperBound,
        worst_inv,
        1e-10,
        json!({"matrices": 20, "n": 5}),
    ));
    Ok(reports)
}

fn tightness_job(_seed: u64) -> Result<Vec<BoundReport>> {
    let mut cfg = TightnessConfig::new(0.8, (1..=8).map(|k| 2f64.powi(k)).collect());
    cfg.alpha1 = Some(0.6);
    Ok(tightness_report(&cfg)?.reports)
}

fn product_job(seed: u64) -> Result<Vec<BoundReport>> {
    let i = constants::pareto_cheeger_certificate(5.0)?.value;
    let c2 = constants::variance_bound_constant(0.8, i)?.value;
    let r = verify_product_theorem(&ProductTheoremConfig {
        measure: "pareto:lambda=5".into(),
        poincare_alpha: 0.5,
        c2_value: c2,
        function: "max".into(),
        n: 64,
        samples: 100_000,
        seed,
        batches: 32,
    })?;
    Ok(vec![r])
}

fn dp_job(seed: u64) -> Result<Vec<BoundReport>> {
    let i = constants::pareto_cheeger_certificate(5.0)?.value;
    let c1_beta2 = constants::moment_bound_constant(0.8, 2.0, i)?.value;
    let a = verify_dp_theorem(&DpTheoremConfig {
        measure: "pareto:lambda=5".into(),
        p: 1.5,
        certificate: DpCertificate::MomentL1 {
            alpha: 0.4,
            value: c1_beta2,
        },
        function: "scaled_sum:p=1.5".into(),
        n: 16,
        samples: 100_000,
        seed,
        batches: 32,
    })?;
    let b = verify_dp_theorem(&DpTheoremConfig {
        measure: "pareto:lambda=5".into(),
        p: f64::INFINITY,
        certificate: DpCertificate::MomentL1 {
            alpha: 0.4,
            value: c1_beta2,
        },
        function: "max".into(),
        n: 16,
        samples: 100_000,
        seed: seed.wrapping_add(1),
        batches: 32,
    })?;
    Ok(vec![a, b])
}

fn isoperimetric_job(_seed: u64) -> Result<Vec<BoundReport>> {
    let i = constants::pareto_cheeger_certificate(5.0)?.value;
    let c2 = constants::variance_bound_constant(0.8, i)?.value;
    let m = Pareto::new(5.0)?;
    Ok(vec![
        verify_isoperimetric(&IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: 0.5,
            c2_value: c2,
            box_a: vec![(1.0, 1.2), (1.0, 1.2)],
            box_b: vec![(3.0, 5.0), (3.0, 5.0)],
        })?,
        verify_isoperimetric(&IsoperimetricConfig {
            measure: "pareto:lambda=5".into(),
            poincare_alpha: 0.5,
            c2_value: c2,
            box_a: vec![(1.0, m.quantile(0.25))],
            box_b: vec![(m.quantile(0.75), f64::INFINITY)],
        })?,
    ])
}

/// The job registry, in report order.
pub fn jobs() -> Vec<SuiteJob> {
    vec![
        SuiteJob {
            name: "constants",
            run: constants_job,
        },
        SuiteJob {
            name: "cheeger",
            run: cheeger_job,
        },
        SuiteJob {
            name: "dq-saturation",
            run: dq_saturation_job,
        },
        SuiteJob {
            name: "lemmas",
            run: lemmas_job,
        },
        SuiteJob {
            name: "pareto-theorem",
            run: pareto_job,
        },
        SuiteJob {
            name: "tails",
            run: tails_job,
        },
        SuiteJob {
            name: "poincare-dp",
            run: poincare_job,
        },
        SuiteJob {
            name: "random-matrix",
            run: matrix_job,
        },
        SuiteJob {
            name: "tightness",
            run: tightness_job,
        },
        SuiteJob {
            name: "product-theorem",
            run: product_job,
        },
        SuiteJob {
            name: "dp-theorem",
            run: dp_job,
        },
        SuiteJob {
            name: "isoperimetric",
            run: isoperimetric_job,
        },
    ]
}

/// Run every job in parallel with per-job seeds derived from the master
/// seed; results come back in registry order.
pub fn run_suite(master_seed: u64) -> Result<Vec<(String, Vec<BoundReport>)>> {
    let jobs = jobs();
    jobs.par_iter()
        .map(|job| {
            let seed = rng::derive_seed(master_seed, job.name);
            (job.run)(seed).map(|reports| (job.name.to_string(), reports))
        })
        .collect()
}
