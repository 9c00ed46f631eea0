//! Acceptance suite. Each criterion prints one pass/fail line with its
//! elapsed time and is asserted at the stated tolerance (exact, throughout)
//! and runtime budget.

mod common;

use std::time::Instant;

use sghh_core::algebra::{compute_a_dual, frobenius_dual_bases, make_family, Family};
use sghh_core::cohomology::{compare_th_sg, h_dims, sg_dims, th_dims, LadderContext, StabilizationVerdict};
use sghh_core::complexes::{
    adual_actions, build_cochain_window, build_dstar, build_sg_ladder, chain_b_matrix, ChainCoeff,
    DEFAULT_DIM_CAP,
};
use sghh_core::scalar::FieldSpec;
use sghh_core::verify::{run_suite, SuiteName, SuiteSpec};
use sghh_core::{AlgebraPresentation, BvExponent, KoszulConvention, SignConventions};

fn f101() -> FieldSpec {
    FieldSpec::prime(101).unwrap()
}

fn dual_numbers(field: FieldSpec) -> AlgebraPresentation {
    make_family(&Family::TruncatedPoly { n: 2 }, field).unwrap()
}

fn kx3(field: FieldSpec) -> AlgebraPresentation {
    make_family(&Family::TruncatedPoly { n: 3 }, field).unwrap()
}

fn two_loop(field: FieldSpec) -> AlgebraPresentation {
    make_family(
        &Family::RadicalSquareZero { vertices: 1, arrows: vec![(0, 0), (0, 0)] },
        field,
    )
    .unwrap()
}

struct Criterion {
    name: &'static str,
    budget_secs: u64,
}

impl Criterion {
    fn run(self, body: impl FnOnce() -> Result<(), String>) {
        let start = Instant::now();
        let outcome = body();
        let elapsed = start.elapsed();
        match &outcome {
            Ok(()) => println!("acceptance {}: PASS ({:.2?})", self.name, elapsed),
            Err(e) => println!("acceptance {}: FAIL ({:.2?}) {e}", self.name, elapsed),
        }
        assert!(outcome.is_ok(), "{}: {}", self.name, outcome.unwrap_err());
        assert!(
            elapsed.as_secs() < self.budget_secs,
            "{} exceeded its {}s budget: {:.2?}",
            self.name,
            self.budget_secs,
            elapsed
        );
    }
}

/// Criterion 1: exact chain-complex laws on all three test algebras over
/// the prime field and the rationals, arities <= 4, form degrees <= 3.
#[test]
fn acceptance_1_exact_complex_laws() {
    Criterion { name: "1 (complex laws)", budget_secs: 60 }.run(|| {
        for field in [f101(), FieldSpec::Rational] {
            for alg in [dual_numbers(field), kx3(field), two_loop(field)] {
                for p in 0..=3u32 {
                    let w = build_cochain_window(&alg, p, 0, 4, DEFAULT_DIM_CAP)
                        .map_err(|e| e.to_string())?;
                    if !w.check_square_zero() {
                        return Err(format!("delta^2 != 0 at d={}, p={p}", alg.dim));
                    }
                }
                let adual = compute_a_dual(&alg);
                let actions = adual_actions(&alg, &adual);
                for coeff in [ChainCoeff::RegularA, ChainCoeff::ADualRaw] {
                    for n in 2..=4u32 {
                        let b1 = chain_b_matrix(&alg, coeff, Some(&actions), adual.dim, n);
                        let b0 = chain_b_matrix(&alg, coeff, Some(&actions), adual.dim, n - 1);
                        if !b0.mul(&b1).is_zero() {
                            return Err(format!("b^2 != 0 at d={}, n={n}", alg.dim));
                        }
                    }
                }
                let w = build_dstar(&alg, &adual, None, -4, 4, DEFAULT_DIM_CAP)
                    .map_err(|e| e.to_string())?;
                if !w.check_square_zero() {
                    return Err(format!("junction differential fails at d={}", alg.dim));
                }
                // the transported window where the standard trace exists
                if alg.dim <= 3 && matches!(field, FieldSpec::Prime { .. }) && alg.basis_mul(1, 1).len() <= 1 {
                    let mut tr = vec![field.zero(); alg.dim as usize];
                    tr[alg.dim as usize - 1] = field.one();
                    if let Ok(fd) = frobenius_dual_bases(&alg, &tr) {
                        let w = build_dstar(&alg, &adual, Some(&fd), -4, 4, DEFAULT_DIM_CAP)
                            .map_err(|e| e.to_string())?;
                        if !w.check_square_zero() {
                            return Err("transported junction fails".into());
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

/// Criterion 2: the chain-level identity suites, 50 seeded samples per
/// check at the verify-module caps.
#[test]
fn acceptance_2_identity_suites() {
    Criterion { name: "2 (identity suites)", budget_secs: 300 }.run(|| {
        let conv = SignConventions::default();
        for alg in [dual_numbers(f101()), two_loop(f101())] {
            for suite in [SuiteName::Theta, SuiteName::Gerstenhaber, SuiteName::Binfinity] {
                let spec = SuiteSpec { suite, max_arity: 3, max_form: 2, samples: 50, seed: 2024 };
                let res = run_suite(&alg, None, spec, conv).map_err(|e| e.to_string())?;
                if !res.passed {
                    let failed: Vec<&str> = res
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name.as_str())
                        .collect();
                    return Err(format!("d={}: {:?}", alg.dim, failed));
                }
            }
        }
        Ok(())
    });
}

/// Criterion 3: frozen dimension tables for the dual numbers and the
/// embedding bijectivity.
#[test]
fn acceptance_3_dual_numbers_tables() {
    Criterion { name: "3 (dual-number tables)", budget_secs: 30 }.run(|| {
        let alg = dual_numbers(f101());
        let window = build_cochain_window(&alg, 0, 0, 6, DEFAULT_DIM_CAP).map_err(|e| e.to_string())?;
        let hh = h_dims(alg.field, &window, 0, 4).map_err(|e| e.to_string())?;
        if hh != vec![(0, 2), (1, 1), (2, 1), (3, 1), (4, 1)] {
            return Err(format!("HH table {hh:?}"));
        }
        let adual = compute_a_dual(&alg);
        let fd = frobenius_dual_bases(&alg, &[f101().zero(), f101().one()])
            .map_err(|e| e.to_string())?;
        let dstar = build_dstar(&alg, &adual, Some(&fd), -8, 9, DEFAULT_DIM_CAP)
            .map_err(|e| e.to_string())?;
        let th = th_dims(alg.field, &dstar, -4, 4).map_err(|e| e.to_string())?;
        if th.iter().any(|(_, d)| *d != 1) {
            return Err(format!("TH table {th:?}"));
        }
        let p_max = 7;
        let ladder = build_sg_ladder(&alg, 0, 12, p_max, KoszulConvention::SecondPastFirst, DEFAULT_DIM_CAP)
            .map_err(|e| e.to_string())?;
        let rows = sg_dims(&alg, &ladder, -4, 4, 2).map_err(|e| e.to_string())?;
        let ctx = LadderContext {
            alg: &alg,
            ladder: &ladder,
            adual: &adual,
            fd: Some(&fd),
            dstar: Some(&dstar),
            conv: KoszulConvention::SecondPastFirst,
        };
        let (cmp, verdict) = compare_th_sg(&ctx, &rows, -4, 4).map_err(|e| e.to_string())?;
        if verdict != "yes" {
            return Err(format!("embedding verdict {verdict}"));
        }
        for r in &cmp {
            if r.th_dim != 1 || r.sg_stable_dim != Some(1) || r.iota_bijective != Some(true) {
                return Err(format!("comparison row {:?}", r.degree));
            }
        }
        Ok(())
    });
}

/// Criterion 4: non-stabilization evidence on the two-loop algebra, with
/// the finite generalized-complex table frozen from the oracle.
#[test]
fn acceptance_4_two_loop_non_stabilization() {
    Criterion { name: "4 (two-loop non-stabilization)", budget_secs: 120 }.run(|| {
        let alg = two_loop(f101());
        let ladder =
            build_sg_ladder(&alg, 0, 7, 5, KoszulConvention::SecondPastFirst, DEFAULT_DIM_CAP)
                .map_err(|e| e.to_string())?;
        let rows = sg_dims(&alg, &ladder, 0, 0, 2).map_err(|e| e.to_string())?;
        let row = &rows[0];
        // frozen level dims at degree 0 (see oracle_checks): 3,7,25,97,385,1537
        if row.level_dims != vec![3, 7, 25, 97, 385, 1537] {
            return Err(format!("level dims {:?}", row.level_dims));
        }
        for p in 1..5 {
            if row.level_dims[p] >= row.level_dims[p + 1] {
                return Err(format!("column not strictly increasing at p={p}"));
            }
        }
        if row.verdict != StabilizationVerdict::NotStabilized {
            return Err(format!("verdict {:?}", row.verdict));
        }
        let adual = compute_a_dual(&alg);
        let dstar = build_dstar(&alg, &adual, None, -4, 4, DEFAULT_DIM_CAP)
            .map_err(|e| e.to_string())?;
        let th = th_dims(alg.field, &dstar, -3, 3).map_err(|e| e.to_string())?;
        // frozen from the dense oracle
        if th != vec![(-3, 16), (-2, 8), (-1, 4), (0, 3), (1, 4), (2, 6), (3, 12)] {
            return Err(format!("TH table {th:?}"));
        }
        Ok(())
    });
}

/// Criterion 5: the BV suites on the symmetric test algebras, class-level
/// identities in degrees -3..3.
#[test]
fn acceptance_5_bv_on_symmetric_algebras() {
    Criterion { name: "5 (BV on symmetric algebras)", budget_secs: 300 }.run(|| {
        let conv = SignConventions::default();
        let cases = [
            (dual_numbers(f101()), vec![f101().zero(), f101().one()]),
            (kx3(f101()), vec![f101().zero(), f101().zero(), f101().one()]),
        ];
        for (alg, tr) in &cases {
            for suite in [SuiteName::Bv, SuiteName::Dstar, SuiteName::Comparison] {
                let samples = if alg.dim == 2 { 50 } else { 12 };
                let spec = SuiteSpec { suite, max_arity: 3, max_form: 2, samples, seed: 77 };
                let res = run_suite(alg, Some(tr), spec, conv).map_err(|e| e.to_string())?;
                if !res.passed {
                    let failed: Vec<&str> = res
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.name.as_str())
                        .collect();
                    return Err(format!("d={}: {:?}", alg.dim, failed));
                }
            }
        }
        Ok(())
    });
}

/// Criterion 6: sign-arbiter determinism — exactly one setting of the two
/// global switches passes the discriminating suites.
#[test]
fn acceptance_6_sign_arbiter() {
    Criterion { name: "6 (sign arbiter)", budget_secs: 600 }.run(|| {
        let alg = dual_numbers(f101());
        let trace = vec![f101().zero(), f101().one()];
        let mut passing = Vec::new();
        for koszul in [KoszulConvention::SecondPastFirst, KoszulConvention::FirstPastSecond] {
            for bv in [BvExponent::ArityMinusOne, BvExponent::Arity] {
                let conv = SignConventions { koszul, bv_exponent: bv };
                let mut ok = true;
                for suite in [SuiteName::Theta, SuiteName::Bv] {
                    let spec =
                        SuiteSpec { suite, max_arity: 3, max_form: 2, samples: 25, seed: 5 };
                    match run_suite(&alg, Some(&trace), spec, conv) {
                        Ok(r) => ok &= r.passed,
                        Err(e) => return Err(e.to_string()),
                    }
                }
                if ok {
                    passing.push(conv);
                }
            }
        }
        if passing.len() != 1 {
            return Err(format!("{} settings passed: {passing:?}", passing.len()));
        }
        if passing[0] != SignConventions::default() {
            return Err(format!("unexpected arbiter outcome {:?}", passing[0]));
        }
        Ok(())
    });
}
