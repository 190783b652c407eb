//! Cell execution and the sweep driver.
//!
//! A *cell* is one (q, N, f) evaluation under the configured resonator:
//! X = ⌊q/N⌋, both moment routes, the √(M2/M1) bound, the brute-force
//! maximum, the reference curve, and the side-condition / range flags. All
//! cross-route agreements and inequalities are checked inline; a violation
//! marks the cell `failed_*` with a diagnostic but the sweep continues.
//! Cells whose N falls outside the admissible range are rejected up front
//! (`rejected_n`, `rejected_range`) and carry no numerics.

use std::time::Instant;

use charsum_core::characters::{CharacterTable, SumAlgorithm};
use charsum_core::coefficients::CoefficientFunction;
use charsum_core::moments::{
    brute_force_max, m1_direct, m1_identity, m2_all_direct, m2_all_identity, m2_direct,
    m2_identity, principal_direct_sum, principal_resonator_sum, resonance_lower_bound,
    resonator_coefficients, theory_curve, validate_range,
};
use charsum_core::ntcore::PrimeContext;
use charsum_core::resonator::{
    ConditionStatus, Normalization, Resonator, ResonatorSpec,
};
use charsum_core::tol;
use charsum_core::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, FSpec, NormRule, ResonatorMode};

/// Wall-clock seconds per stage; zero for stages that did not run.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct StageTimings {
    /// Resonator + coefficient-function construction.
    pub setup_s: f64,
    /// Closed-form moments, principal sums, curve, flags.
    pub identity_s: f64,
    /// All resonator character sums and M1_direct.
    pub direct_r_s: f64,
    /// All partial character sums, M2_direct, brute-force maximum.
    pub direct_d_s: f64,
    pub total_s: f64,
}

/// One sweep row, flat and fully serializable. `None` means the stage did
/// not run (skipped or the cell was rejected).
#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub q: u64,
    pub n: u64,
    /// ⌊q/N⌋.
    pub x: u64,
    pub f_kind: String,
    pub f_seed: u64,
    pub resonator_mode: String,
    pub m1_direct: Option<f64>,
    pub m1_identity: Option<f64>,
    pub m2_direct: Option<f64>,
    pub m2_identity: Option<f64>,
    /// Σ over all characters of |D|²|R|² — the f-invariant variant.
    pub m2_all_direct: Option<f64>,
    pub m2_all_identity: Option<f64>,
    /// quadruple_sum / ℓ²; always ≥ N.
    pub ratio_bound: Option<f64>,
    /// √(M2/M1) from the direct pair when the D-pass ran, else identity.
    pub lower_bound: Option<f64>,
    pub brute_max: Option<f64>,
    pub argmax_j: Option<u64>,
    pub theory_curve: Option<f64>,
    /// [re, im] of D_χ₀ and R_χ₀.
    pub principal_d: Option<[f64; 2]>,
    pub principal_r: Option<[f64; 2]>,
    /// "holds" | "fails" | "indeterminate".
    pub condition: String,
    pub condition_lhs: Option<f64>,
    pub condition_rhs: Option<f64>,
    pub range_ok: bool,
    pub range_lower: f64,
    pub range_upper: f64,
    /// "ok", "failed_…", or "rejected_…".
    pub status: String,
    pub error: Option<String>,
    pub timings: StageTimings,
}

impl CellRecord {
    fn rejected(
        q: u64,
        n: u64,
        f: &FSpec,
        mode: &ResonatorMode,
        status: &str,
        reason: &str,
        range: charsum_core::moments::RangeReport,
    ) -> CellRecord {
        CellRecord {
            q,
            n,
            x: q.checked_div(n).unwrap_or(0),
            f_kind: f.label(),
            f_seed: f.seed,
            resonator_mode: mode.label(),
            m1_direct: None,
            m1_identity: None,
            m2_direct: None,
            m2_identity: None,
            m2_all_direct: None,
            m2_all_identity: None,
            ratio_bound: None,
            lower_bound: None,
            brute_max: None,
            argmax_j: None,
            theory_curve: None,
            principal_d: None,
            principal_r: None,
            condition: "indeterminate".into(),
            condition_lhs: None,
            condition_rhs: None,
            range_ok: range.ok,
            range_lower: range.lower,
            range_upper: range.upper,
            status: status.into(),
            error: Some(reason.into()),
            timings: StageTimings::default(),
        }
    }
}

/// The resonator every cell of this sweep uses, resolved for one X and q.
pub fn resolve_spec(mode: &ResonatorMode, x: u64, q: u64) -> ResonatorSpec {
    let base = if x >= 3 {
        ResonatorSpec::canonical(x).expect("x >= 3")
    } else {
        ResonatorSpec::trivial(x)
    };
    match *mode {
        ResonatorMode::Canonical => base,
        ResonatorMode::Override { lo, hi, normalization } => {
            let spec = base.with_band(lo.resolve(x), hi.resolve(x));
            match normalization {
                NormRule::SqrtP => spec,
                NormRule::SqrtQLiteral => {
                    spec.with_normalization(Normalization::SqrtQLiteral { q })
                }
            }
        }
    }
}

struct Numerics {
    m1_direct: f64,
    m1_identity: f64,
    m2_direct: Option<f64>,
    m2_identity: f64,
    m2_all_direct: Option<f64>,
    m2_all_identity: f64,
    ratio_bound: f64,
    brute: Option<(f64, u64)>,
    principal_d: Complex64,
    principal_r: Complex64,
    support_len: usize,
    l2: f64,
    /// Whether sums came from the per-character path (exact evaluation
    /// order) rather than the transform.
    exact_sums: bool,
    condition: charsum_core::resonator::ConditionReport,
    timings: StageTimings,
}

fn compute(
    table: &CharacterTable<'_>,
    n: u64,
    fspec: &FSpec,
    mode: &ResonatorMode,
    naive_only: bool,
    skip_brute_force: bool,
) -> Result<Numerics, String> {
    let q = table.q();
    let x = q / n;
    let algo = if naive_only {
        SumAlgorithm::Naive
    } else {
        SumAlgorithm::Bulk
    };
    let t0 = Instant::now();

    let spec = resolve_spec(mode, x, q);
    let r = Resonator::build(spec).map_err(|e| format!("resonator: {e}"))?;
    let f = CoefficientFunction::new(fspec.kind, fspec.seed, x.max(n))
        .map_err(|e| format!("coefficients: {e}"))?;
    let t_setup = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let m1_id = m1_identity(q, &r, &f).map_err(|e| format!("m1_identity: {e}"))?;
    let m2_id = m2_identity(q, &r, &f, n).map_err(|e| format!("m2_identity: {e}"))?;
    let m2_all_id = m2_all_identity(q, &r, n).map_err(|e| format!("m2_all_identity: {e}"))?;
    let principal_d = principal_direct_sum(&f, n).map_err(|e| format!("principal_d: {e}"))?;
    let principal_r =
        principal_resonator_sum(q, &r, &f).map_err(|e| format!("principal_r: {e}"))?;
    let l2 = r.l2();
    let ratio_bound = r.quadruple_sum(n) / l2;
    let condition = r.lemma_condition(n);
    let t_identity = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let rf = resonator_coefficients(&r, &f).map_err(|e| format!("coefficient vector: {e}"))?;
    // an X = q vector has one entry at n = q, which multiplies χ(q) = 0 for
    // every character — drop it before the transform
    let take = rf.len().min(q as usize - 1);
    let r_sums = table
        .all_sums(&rf[..take], algo)
        .map_err(|e| format!("resonator sums: {e}"))?;
    let m1_dir = m1_direct(&r_sums);
    let t_direct_r = t2.elapsed().as_secs_f64();

    let t3 = Instant::now();
    let (m2_dir, m2_all_dir, brute) = if skip_brute_force {
        (None, None, None)
    } else {
        let dv = f.vector(n).map_err(|e| format!("partial-sum vector: {e}"))?;
        let d_sums = table
            .all_sums(&dv, algo)
            .map_err(|e| format!("partial sums: {e}"))?;
        let (max, j) = brute_force_max(&d_sums);
        (
            Some(m2_direct(&d_sums, &r_sums)),
            Some(m2_all_direct(&d_sums, &r_sums)),
            Some((max, j.0)),
        )
    };
    let t_direct_d = t3.elapsed().as_secs_f64();

    Ok(Numerics {
        m1_direct: m1_dir,
        m1_identity: m1_id,
        m2_direct: m2_dir,
        m2_identity: m2_id,
        m2_all_direct: m2_all_dir,
        m2_all_identity: m2_all_id,
        ratio_bound,
        brute,
        principal_d,
        principal_r,
        support_len: r.support.len(),
        l2,
        exact_sums: naive_only,
        condition,
        timings: StageTimings {
            setup_s: t_setup,
            identity_s: t_identity,
            direct_r_s: t_direct_r,
            direct_d_s: t_direct_d,
            total_s: t0.elapsed().as_secs_f64(),
        },
    })
}

/// First violated invariant as (status, diagnostic), or None if all hold.
fn check_invariants(num: &Numerics, n: u64) -> Option<(String, String)> {
    let fail = |s: &str, m: String| Some((format!("failed_{s}"), m));

    if num.m1_direct.is_nan() || num.m1_direct < 0.0 {
        return fail("m1_negative", format!("M1_direct = {}", num.m1_direct));
    }
    let m1_rel = tol::rel_err(num.m1_direct, num.m1_identity);
    if m1_rel > tol::M1_EQUIV_REL {
        return fail(
            "m1_equiv",
            format!(
                "M1 routes disagree: direct {} vs identity {} (rel {m1_rel:e})",
                num.m1_direct, num.m1_identity
            ),
        );
    }
    if let Some(m2d) = num.m2_direct {
        let m2_rel = tol::rel_err(m2d, num.m2_identity);
        if m2_rel > tol::M2_EQUIV_REL {
            return fail(
                "m2_equiv",
                format!(
                    "M2 routes disagree: direct {m2d} vs identity {} (rel {m2_rel:e})",
                    num.m2_identity
                ),
            );
        }
    }
    if let Some(m2ad) = num.m2_all_direct {
        let rel = tol::rel_err(m2ad, num.m2_all_identity);
        if rel > tol::M2_EQUIV_REL {
            return fail(
                "m2_all_equiv",
                format!(
                    "all-character M2 routes disagree: direct {m2ad} vs identity {} (rel {rel:e})",
                    num.m2_all_identity
                ),
            );
        }
    }
    let d0 = num.principal_d.norm();
    if d0 > n as f64 * (1.0 + tol::PRINCIPAL_BOUND_REL) + 1e-9 {
        return fail("principal_bound", format!("|D_chi0| = {d0} > N = {n}"));
    }
    let r0sq = num.principal_r.norm_sqr();
    let r0cap = num.support_len as f64 * num.l2;
    if r0sq > r0cap * (1.0 + tol::PRINCIPAL_BOUND_REL) + 1e-9 {
        return fail(
            "principal_bound",
            format!("|R_chi0|^2 = {r0sq} > support_len*l2 = {r0cap}"),
        );
    }
    if num.ratio_bound < n as f64 * (1.0 - tol::DIAGONAL_REL) {
        return fail(
            "ratio_bound",
            format!("quadruple/l2 = {} < N = {n}", num.ratio_bound),
        );
    }
    if n == 1 {
        // every |D_χ|² is exactly 1, so M2 collapses onto M1: bit-for-bit on
        // the per-character path, to transform accuracy on the bulk path
        if let Some(m2d) = num.m2_direct {
            let exact = m2d.to_bits() == num.m1_direct.to_bits();
            let close = tol::rel_err(m2d, num.m1_direct) <= tol::EXACT_COMPLEX;
            if (num.exact_sums && !exact) || !close {
                return fail(
                    "degenerate_n1",
                    format!("N = 1 but M2_direct {m2d} != M1_direct {}", num.m1_direct),
                );
            }
        }
    }
    if let (Some((brute, _)), Some(m2d)) = (num.brute, num.m2_direct) {
        if let Some(lower) = resonance_lower_bound(num.m1_direct, m2d) {
            if brute < lower * (1.0 - tol::THEOREM_SLACK) {
                return fail(
                    "theorem",
                    format!("brute-force max {brute} below lower bound {lower}"),
                );
            }
        }
    }
    None
}

/// Run one cell against a prebuilt character table. Preconditions (q prime,
/// 1 ≤ N < q) are the caller's; the sweep driver screens them.
pub fn run_cell(
    table: &CharacterTable<'_>,
    n: u64,
    fspec: &FSpec,
    mode: &ResonatorMode,
    delta: f64,
    naive_only: bool,
    skip_brute_force: bool,
) -> CellRecord {
    let q = table.q();
    debug_assert!(n >= 1 && n < q);
    let x = q / n;
    let range = validate_range(q, n, delta).expect("delta validated by config");

    let (status, error, num) = match compute(table, n, fspec, mode, naive_only, skip_brute_force)
    {
        Ok(num) => match check_invariants(&num, n) {
            None => ("ok".to_string(), None, Some(num)),
            Some((status, msg)) => (status, Some(msg), Some(num)),
        },
        Err(msg) => ("failed_domain".to_string(), Some(msg), None),
    };

    match num {
        None => {
            let mut rec = CellRecord::rejected(q, n, fspec, mode, &status, "", range);
            rec.status = status;
            rec.error = error;
            rec
        }
        Some(num) => {
            let lower = match num.m2_direct {
                Some(m2d) => resonance_lower_bound(num.m1_direct, m2d),
                None => resonance_lower_bound(num.m1_identity, num.m2_identity),
            };
            let (condition, lhs, rhs) = match num.condition.status {
                ConditionStatus::Holds => ("holds", Some(num.condition.lhs), Some(num.condition.rhs)),
                ConditionStatus::Fails => ("fails", Some(num.condition.lhs), Some(num.condition.rhs)),
                ConditionStatus::Indeterminate => ("indeterminate", None, None),
            };
            CellRecord {
                q,
                n,
                x,
                f_kind: fspec.label(),
                f_seed: fspec.seed,
                resonator_mode: mode.label(),
                m1_direct: Some(num.m1_direct),
                m1_identity: Some(num.m1_identity),
                m2_direct: num.m2_direct,
                m2_identity: Some(num.m2_identity),
                m2_all_direct: num.m2_all_direct,
                m2_all_identity: Some(num.m2_all_identity),
                ratio_bound: Some(num.ratio_bound),
                lower_bound: lower,
                brute_max: num.brute.map(|(b, _)| b),
                argmax_j: num.brute.map(|(_, j)| j),
                theory_curve: theory_curve(q, n),
                principal_d: Some([num.principal_d.re, num.principal_d.im]),
                principal_r: Some([num.principal_r.re, num.principal_r.im]),
                condition: condition.into(),
                condition_lhs: lhs,
                condition_rhs: rhs,
                range_ok: range.ok,
                range_lower: range.lower,
                range_upper: range.upper,
                status,
                error,
                timings: num.timings,
            }
        }
    }
}

/// Sweep totals; `records` is sorted by (q, N, f_seed).
#[derive(Debug)]
pub struct SweepResult {
    pub records: Vec<CellRecord>,
    pub n_ok: usize,
    pub n_failed: usize,
    pub n_rejected: usize,
}

/// Run every grid cell (primes × N values × f specs). Cells with N ≥ q or N
/// outside the admissible range are rejected with a reason; everything else
/// runs, in parallel across exactly `cfg.threads` workers.
pub fn run_sweep(cfg: &Config) -> SweepResult {
    let contexts: Vec<PrimeContext> = cfg
        .primes
        .iter()
        .map(|&q| PrimeContext::new(q).expect("config validated primality"))
        .collect();
    let tables: Vec<CharacterTable<'_>> = contexts.iter().map(CharacterTable::new).collect();

    enum Planned<'a> {
        Run { table: &'a CharacterTable<'a>, n: u64, f: &'a FSpec },
        Reject { q: u64, n: u64, f: &'a FSpec, status: &'static str, reason: String },
    }

    let mut planned: Vec<Planned<'_>> = Vec::new();
    for table in &tables {
        let q = table.q();
        for n in cfg.n_rule.values_for(q) {
            for f in &cfg.f_specs {
                if n >= q {
                    planned.push(Planned::Reject {
                        q,
                        n,
                        f,
                        status: "rejected_n",
                        reason: format!("N = {n} is not below q = {q}"),
                    });
                    continue;
                }
                let range = validate_range(q, n, cfg.delta).expect("delta validated");
                if !range.ok {
                    planned.push(Planned::Reject {
                        q,
                        n,
                        f,
                        status: "rejected_range",
                        reason: format!(
                            "N = {n} outside [{}, {}]",
                            range.lower, range.upper
                        ),
                    });
                    continue;
                }
                planned.push(Planned::Run { table, n, f });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .expect("thread pool");
    let mut records: Vec<CellRecord> = pool.install(|| {
        planned
            .par_iter()
            .map(|cell| match cell {
                Planned::Run { table, n, f } => run_cell(
                    table,
                    *n,
                    f,
                    &cfg.resonator,
                    cfg.delta,
                    cfg.naive_only,
                    cfg.skip_brute_force,
                ),
                Planned::Reject { q, n, f, status, reason } => {
                    let range = validate_range(*q, *n, cfg.delta).expect("delta validated");
                    CellRecord::rejected(*q, *n, f, &cfg.resonator, status, reason, range)
                }
            })
            .collect()
    });
    records.sort_by_key(|r| (r.q, r.n, r.f_seed));

    let n_ok = records.iter().filter(|r| r.status == "ok").count();
    let n_failed = records.iter().filter(|r| r.status.starts_with("failed")).count();
    let n_rejected = records.iter().filter(|r| r.status.starts_with("rejected")).count();
    SweepResult {
        records,
        n_ok,
        n_failed,
        n_rejected,
    }
}
