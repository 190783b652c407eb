//! The acceptance gate: eight criteria, one test each, every tolerance
//! pinned. Each test prints a `criterion N … PASS` line (visible with
//! `--nocapture`); the harness line itself is the per-criterion verdict.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

use charsum_cli::config::{BandEnd, FSpec, NormRule, ResonatorMode};
use charsum_cli::engine::{run_cell, CellRecord};
use charsum_core::characters::{CharacterTable, SumAlgorithm};
use charsum_core::coefficients::{CoefficientFunction, CoefficientKind, SplitMix64};
use charsum_core::moments::{
    m1_direct, m1_identity, m2_direct, m2_identity, resonator_coefficients,
};
use charsum_core::ntcore::{is_prime, sieve_primes, PrimeContext};
use charsum_core::resonator::{
    brute_quadruple_sum, pair_quadruple_sum, support_l2, Resonator, ResonatorSpec,
};
use charsum_core::Complex64;

const THEOREM_SLACK: f64 = 1e-9;

fn ones() -> FSpec {
    FSpec {
        kind: CoefficientKind::Ones,
        seed: 0,
    }
}

fn band(lo: u64, hi: u64) -> ResonatorMode {
    ResonatorMode::Override {
        lo: BandEnd::Fixed(lo),
        hi: BandEnd::Fixed(hi),
        normalization: NormRule::SqrtP,
    }
}

/// The three resonator configurations exercised by criteria 2 and 3.
fn criterion2_modes() -> [ResonatorMode; 3] {
    [ResonatorMode::Canonical, band(2, 7), band(3, 13)]
}

fn criterion2_fs() -> [FSpec; 3] {
    [
        ones(),
        FSpec {
            kind: CoefficientKind::RandomUnimodular,
            seed: 1,
        },
        FSpec {
            kind: CoefficientKind::RandomSign,
            seed: 2,
        },
    ]
}

#[test]
fn criterion_1_orthogonality() {
    let mut rng = SplitMix64::new(0xACCE55);
    let mut pairs = 0usize;
    for q in [101u64, 1009, 10007] {
        let ctx = PrimeContext::new(q).unwrap();
        let t = CharacterTable::new(&ctx);
        let mut done = 0;
        while done < 100 {
            let a = 1 + rng.next_u64() % (5 * q);
            // every third pair forced congruent to exercise the (q−1) case
            let b = if done % 3 == 0 {
                a + q * (1 + rng.next_u64() % 3)
            } else {
                1 + rng.next_u64() % (5 * q)
            };
            if a.is_multiple_of(q) || b.is_multiple_of(q) {
                continue;
            }
            let sum = t.orthogonality_sum(a, b).unwrap();
            let target = if a % q == b % q { (q - 1) as f64 } else { 0.0 };
            let err = (sum - Complex64::new(target, 0.0)).norm();
            assert!(
                err <= 1e-6 * (q - 1) as f64,
                "q={q} a={a} b={b}: |sum − {target}| = {err}"
            );
            done += 1;
            pairs += 1;
        }
    }
    println!("criterion 1 (orthogonality, 300 pairs over 3 moduli): PASS — {pairs} pairs");
}

#[test]
fn criterion_2_moment_identity_equivalence() {
    let mut worst_m1 = 0.0f64;
    let mut worst_m2 = 0.0f64;
    for q in [1009u64, 10007] {
        let ctx = PrimeContext::new(q).unwrap();
        let table = CharacterTable::new(&ctx);
        let n = q.isqrt();
        for mode in criterion2_modes() {
            for f in criterion2_fs() {
                let rec = run_cell(&table, n, &f, &mode, 0.005, false, false);
                assert_eq!(
                    rec.status,
                    "ok",
                    "q={q} N={n} f={} mode={}: {:?}",
                    f.label(),
                    mode.label(),
                    rec.error
                );
                let m1_rel = (rec.m1_direct.unwrap() - rec.m1_identity.unwrap()).abs()
                    / rec.m1_identity.unwrap();
                let m2_rel = (rec.m2_direct.unwrap() - rec.m2_identity.unwrap()).abs()
                    / rec.m2_identity.unwrap();
                assert!(
                    m1_rel <= 1e-8,
                    "M1 rel err {m1_rel:e} at q={q} f={} mode={}",
                    f.label(),
                    mode.label()
                );
                assert!(
                    m2_rel <= 1e-6,
                    "M2 rel err {m2_rel:e} at q={q} f={} mode={}",
                    f.label(),
                    mode.label()
                );
                worst_m1 = worst_m1.max(m1_rel);
                worst_m2 = worst_m2.max(m2_rel);
            }
        }
    }
    println!(
        "criterion 2 (moment identity equivalence, 18 cells): PASS — worst M1 rel {worst_m1:.2e}, worst M2 rel {worst_m2:.2e}"
    );
}

fn assert_theorem(rec: &CellRecord, what: &str) {
    assert_eq!(rec.status, "ok", "{what}: {:?}", rec.error);
    let lower = rec.lower_bound.unwrap();
    let brute = rec.brute_max.unwrap();
    assert!(
        brute >= lower * (1.0 - THEOREM_SLACK),
        "{what}: brute {brute} < lower bound {lower}"
    );
}

#[test]
fn criterion_3_theorem_finite_core() {
    let mut cells = 0usize;
    let mut min_gap = f64::INFINITY;

    // every configuration of criterion 2
    for q in [1009u64, 10007] {
        let ctx = PrimeContext::new(q).unwrap();
        let table = CharacterTable::new(&ctx);
        let n = q.isqrt();
        for mode in criterion2_modes() {
            for f in criterion2_fs() {
                let rec = run_cell(&table, n, &f, &mode, 0.005, false, false);
                assert_theorem(&rec, &format!("q={q} N={n} f={}", f.label()));
                min_gap = min_gap.min(rec.brute_max.unwrap() - rec.lower_bound.unwrap());
                cells += 1;
            }
        }
    }

    // exhaustive small-prime grid
    let fs = [
        ones(),
        FSpec {
            kind: CoefficientKind::RandomUnimodular,
            seed: 0xC3,
        },
    ];
    for q in sieve_primes(500) {
        if q < 5 {
            continue;
        }
        let ctx = PrimeContext::new(q).unwrap();
        let table = CharacterTable::new(&ctx);
        for n in 1..=q.isqrt() {
            for f in fs {
                let rec = run_cell(&table, n, &f, &ResonatorMode::Canonical, 0.005, false, false);
                assert_theorem(&rec, &format!("q={q} N={n} f={}", f.label()));
                min_gap = min_gap.min(rec.brute_max.unwrap() - rec.lower_bound.unwrap());
                cells += 1;
            }
        }
    }
    assert!(cells > 2500, "grid unexpectedly small: {cells}");
    println!(
        "criterion 3 (theorem finite core): PASS — {cells} cells, zero violations, smallest brute−bound gap {min_gap:.3e}"
    );
}

#[test]
fn criterion_4_closed_form_oracle() {
    let mut checked = 0usize;
    for q in [13u64, 101, 1009] {
        let ctx = PrimeContext::new(q).unwrap();
        let table = CharacterTable::new(&ctx);
        let f = CoefficientFunction::new(CoefficientKind::Ones, 0, q).unwrap();
        for n in [1u64, 3, q.isqrt()] {
            let x = q / n;
            let r = Resonator::build(ResonatorSpec::trivial(x)).unwrap();
            assert_eq!(r.support, vec![(1, 1.0)]);

            let m1_expect = (q - 2) as f64;
            let m2_expect = (q - 1) as f64 * n as f64 - (n * n) as f64;

            let m1i = m1_identity(q, &r, &f).unwrap();
            let m2i = m2_identity(q, &r, &f, n).unwrap();
            assert!((m1i - m1_expect).abs() <= 1e-8 * m1_expect, "q={q} n={n}: {m1i}");
            assert!(
                (m2i - m2_expect).abs() <= 1e-8 * m2_expect.abs().max(1.0),
                "q={q} n={n}: {m2i} vs {m2_expect}"
            );

            // independent route: direct character summation, per-character path
            let rf = resonator_coefficients(&r, &f).unwrap();
            let take = rf.len().min(q as usize - 1);
            let r_sums = table.all_sums(&rf[..take], SumAlgorithm::Naive).unwrap();
            let d_sums = table
                .all_sums(&f.vector(n).unwrap(), SumAlgorithm::Naive)
                .unwrap();
            let m1d = m1_direct(&r_sums);
            let m2d = m2_direct(&d_sums, &r_sums);
            assert!((m1d - m1_expect).abs() <= 1e-8 * m1_expect);
            assert!((m2d - m2_expect).abs() <= 1e-8 * m2_expect.abs().max(1.0));
            checked += 1;
        }
    }
    println!(
        "criterion 4 (closed forms M1 = q−2, M2 = (q−1)N − N²): PASS — {checked} (q, N) pairs, both routes"
    );
}

#[test]
fn criterion_5_quadruple_sum_oracle() {
    let mut rng = SplitMix64::new(0x5EED5);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let x = 1 + rng.next_u64() % 50;
        let mut support: Vec<(u64, f64)> = Vec::new();
        for v in 1..=x {
            if v == 1 || rng.next_u64().is_multiple_of(2) {
                let w = (1.0 - rng.next_f64()).max(1e-3); // in (0, 1]
                support.push((v, w));
            }
        }
        let n = 1 + rng.next_u64() % 50;

        let pair = pair_quadruple_sum(&support, n);
        let brute = brute_quadruple_sum(&support, n);
        let rel = (pair - brute).abs() / brute.max(1e-300);
        assert!(rel <= 1e-12, "trial {trial}: pair {pair} vs brute {brute}");
        worst = worst.max(rel);

        let floor = n as f64 * support_l2(&support);
        assert!(
            pair >= floor * (1.0 - 1e-12),
            "trial {trial}: {pair} below diagonal floor {floor}"
        );
    }
    println!(
        "criterion 5 (pair formula vs quadruple enumeration, 200 resonators): PASS — worst rel {worst:.2e}"
    );
}

#[test]
fn criterion_6_bulk_naive_agreement() {
    let mut rng = SplitMix64::new(0xB17);
    let mut worst = 0.0f64;
    for q in [101u64, 10007] {
        let ctx = PrimeContext::new(q).unwrap();
        let t = CharacterTable::new(&ctx);
        let len = ((q - 1) as usize).min(5000);
        for _ in 0..10 {
            let coeffs: Vec<Complex64> = (0..len)
                .map(|_| {
                    Complex64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0)
                })
                .collect();
            let naive = t.all_sums(&coeffs, SumAlgorithm::Naive).unwrap();
            let bulk = t.all_sums(&coeffs, SumAlgorithm::Bulk).unwrap();
            // the l1 mass bounds every sum, so it is the scale the 1e−6
            // relative tolerance refers to
            let mass: f64 = coeffs.iter().map(|c| c.norm()).sum();
            for (j, (a, b)) in naive.iter().zip(&bulk).enumerate() {
                let rel = (a - b).norm() / mass;
                assert!(rel <= 1e-6, "q={q} j={j}: {a} vs {b} (rel {rel:e})");
                worst = worst.max(rel);
            }
        }
    }
    println!(
        "criterion 6 (transform vs per-character sums, 20 vectors): PASS — worst rel {worst:.2e}"
    );
}

#[test]
fn criterion_7_f_invariance_of_m2() {
    let q = 1009u64;
    let n = 31u64;
    let ctx = PrimeContext::new(q).unwrap();
    let table = CharacterTable::new(&ctx);
    let mode = ResonatorMode::Override {
        lo: BandEnd::Fixed(2),
        hi: BandEnd::X,
        normalization: NormRule::SqrtP,
    };
    let records: Vec<CellRecord> = (1..=5)
        .map(|seed| {
            let f = FSpec {
                kind: CoefficientKind::RandomUnimodular,
                seed,
            };
            let rec = run_cell(&table, n, &f, &mode, 0.005, false, false);
            assert_eq!(rec.status, "ok", "seed {seed}: {:?}", rec.error);
            rec
        })
        .collect();

    // the f-free closed form never evaluates f: identical to the bit
    let first = records[0].m2_all_identity.unwrap();
    for rec in &records {
        assert_eq!(
            rec.m2_all_identity.unwrap().to_bits(),
            first.to_bits(),
            "all-character identity M2 must be bit-identical across seeds"
        );
    }
    // and the all-character direct sums agree across seeds numerically
    let first_direct = records[0].m2_all_direct.unwrap();
    let mut worst = 0.0f64;
    for rec in &records {
        let d = rec.m2_all_direct.unwrap();
        let rel = (d - first_direct).abs() / first_direct;
        assert!(rel <= 1e-6, "direct all-character M2 drifts across seeds: {rel:e}");
        assert!((d - first).abs() / first <= 1e-6, "direct vs identity: {d} vs {first}");
        worst = worst.max(rel);
    }
    println!(
        "criterion 7 (f-invariance of the all-character M2, 5 seeds): PASS — identity bit-identical, direct spread {worst:.2e}"
    );
}

/// Independent recomputation of the condition / range flags for one row.
fn recompute_flags(q: u64, n: u64) -> (String, bool) {
    let x = q / n;
    let lx = (x as f64).ln();
    let lambda = (lx * lx.ln()).sqrt();
    let condition = if n < 3 || lambda <= std::f64::consts::E {
        "indeterminate".to_string()
    } else {
        let lhs = (n as f64).ln();
        let rhs = 3.0 * lambda * lambda.ln().ln();
        if lhs > rhs { "true".into() } else { "false".into() }
    };
    let lower = ((q as f64).ln().powf(0.505)).exp();
    let upper = (q as f64).sqrt();
    let range_ok = (n as f64) >= lower && (n as f64) <= upper;
    (condition, range_ok)
}

#[test]
fn criterion_8_growth_report() {
    // ten primes geometrically spaced from 10³ to 10⁵
    let primes: Vec<u64> = (0..10)
        .map(|k| {
            let target = 10f64.powf(3.0 + 2.0 * k as f64 / 9.0).ceil() as u64;
            (target..).find(|&p| is_prime(p)).unwrap()
        })
        .collect();
    assert_eq!(primes[0], 1009);
    assert_eq!(primes[9], 100003);

    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-growth");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let out_dir = dir.join("out");
    let mut cfg = String::new();
    let _ = writeln!(cfg, "[primes]\nlist = {primes:?}\n");
    let _ = writeln!(cfg, "[n]\nalpha = 0.4\n");
    let _ = writeln!(cfg, "[[f]]\nkind = \"ones\"\n");
    let _ = writeln!(cfg, "[output]\ndir = \"{}\"", out_dir.display());
    let cfg_path = dir.join("growth.toml");
    fs::write(&cfg_path, cfg).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_charsum"))
        .args(["run", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = fs::read_to_string(out_dir.join("cells.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 10, "one row per prime");

    for row in &rows {
        assert_eq!(row[17], "ok", "row {row:?}");
        // criteria-3 ordering on every row
        let lower: f64 = row[11].parse().unwrap();
        let brute: f64 = row[12].parse().unwrap();
        assert!(brute >= lower * (1.0 - THEOREM_SLACK), "row {row:?}");
    }

    // normalized columns against the cell table
    let growth = fs::read_to_string(out_dir.join("growth.csv")).unwrap();
    let grows: Vec<Vec<String>> = growth
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(grows.len(), 10);
    for (row, grow) in rows.iter().zip(&grows) {
        assert_eq!(row[0], grow[0]);
        let n: f64 = row[1].parse().unwrap();
        let root = n.sqrt();
        for (cell_col, grow_col) in [(11, 1), (12, 2), (14, 3)] {
            let raw: f64 = row[cell_col].parse().unwrap();
            let norm: f64 = grow[grow_col + 1].parse().unwrap();
            assert!(
                (norm - raw / root).abs() <= 1e-12 * (1.0 + norm.abs()),
                "growth col {grow_col} row {row:?}"
            );
        }
    }

    // flag spot-check on three rows by independent recomputation
    for &i in &[0usize, 4, 9] {
        let q: u64 = rows[i][0].parse().unwrap();
        let n: u64 = rows[i][1].parse().unwrap();
        let (condition, range_ok) = recompute_flags(q, n);
        assert_eq!(rows[i][15], condition, "condition_ok at q={q}");
        assert_eq!(rows[i][16], range_ok.to_string(), "range_ok at q={q}");
    }

    println!(
        "criterion 8 (growth report over {:?}): PASS — 10 rows, ordering + flags verified",
        (primes[0], primes[9])
    );
}
