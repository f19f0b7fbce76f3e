use kurepa_core::scanner::{
    self, bell_one_scan, kurepa_det_table_scan, kurepa_prime_scan, prime_power_scan,
    residue_table_scan, run_scan, strong_kurepa_scan, ScanError, ScanKind,
};
use kurepa_core::sequences::subfactorial_mod;
use kurepa_core::{ScanConfig, ScanRecord};

fn cfg(lo: u64, hi: u64, bound: u64) -> ScanConfig {
    ScanConfig {
        lo,
        hi,
        residue_bound: bound,
        ..Default::default()
    }
}

#[test]
fn prime_scan_near_misses_to_400() {
    let records = kurepa_prime_scan(&cfg(3, 400, 2)).unwrap();
    let ns: Vec<u64> = records.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![3, 5, 7, 11, 23, 31, 67, 227, 373]);
}

#[test]
fn prime_scan_no_counterexamples_small() {
    let records = kurepa_prime_scan(&cfg(3, 2000, 0)).unwrap();
    assert!(records.is_empty());
}

#[test]
fn strong_scan_finds_the_counterexample() {
    let records = strong_kurepa_scan(&cfg(9, 12000, 0)).unwrap();
    let ns: Vec<u64> = records.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![11563]);
    assert_eq!(records[0].r_signed, 2);
    assert_eq!(records[0].s_signed, Some(0));
    assert_eq!(records[0].factorization.to_string(), "31*373");

    let outcome = run_scan(ScanKind::StrongKurepa, &cfg(9, 12000, 0)).unwrap();
    assert_eq!(outcome.findings, 1);
}

#[test]
fn strong_scan_empty_below_the_counterexample() {
    let records = strong_kurepa_scan(&cfg(9, 11563, 0)).unwrap();
    assert!(records.is_empty());
}

#[test]
fn strong_scan_square_gates() {
    // the two residue-2 primes do not extend to their squares
    assert_eq!(subfactorial_mod(31 * 31 - 1, 31 * 31).value(), 467);
    assert_eq!(subfactorial_mod(373 * 373 - 1, 373 * 373).value(), 2613);
}

#[test]
fn residue_table_first_rows() {
    let records = residue_table_scan(&cfg(2, 10, 2)).unwrap();
    let rows: Vec<(u64, i64)> = records.iter().map(|r| (r.n, r.r_signed)).collect();
    assert_eq!(
        rows,
        vec![
            (2, 0),
            (3, 1),
            (4, 2),
            (5, -1),
            (6, 2),
            (7, -1),
            (8, -2),
            (9, 1),
        ]
    );
}

#[test]
fn residue_table_single_record_range() {
    let records = residue_table_scan(&cfg(2, 3, 5)).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].n, 2);
    assert_eq!(records[0].r_signed, 0);
    assert_eq!(records[0].near_miss, 0);
}

#[test]
fn residue_table_ratio_clause() {
    // 2724 = 2^2*3*227 has r = 2 and ratio 2/2724 < 1e-3
    let mut c = cfg(2700, 2750, 0);
    c.ratio_bound = Some(1e-3);
    let records = residue_table_scan(&c).unwrap();
    let rows: Vec<(u64, i64)> = records.iter().map(|r| (r.n, r.r_signed)).collect();
    assert_eq!(rows, vec![(2724, 2)]);
    // without the clause nothing passes bound 0 here
    let records = residue_table_scan(&cfg(2700, 2750, 0)).unwrap();
    assert!(records.is_empty());
}

#[test]
fn det_table_rows_to_50() {
    let records = kurepa_det_table_scan(&cfg(7, 50, 10)).unwrap();
    // the published table keeps every odd composite within the bound
    // but lists only the primes whose residue is within 2
    let rows: Vec<(u64, i64, i64)> = records
        .iter()
        .filter(|r| !r.factorization.is_prime() || r.s_signed.unwrap().unsigned_abs() <= 2)
        .map(|r| (r.n, r.s_signed.unwrap(), r.r_signed))
        .collect();
    assert_eq!(
        rows,
        vec![
            (7, -1, -1),
            (9, -1, 1),
            (11, 1, 1),
            (15, 2, 4),
            (21, -10, -8),
            (23, -2, -2),
            (27, 8, 10),
            (31, 2, 2),
            (33, -1, 1),
            (35, -3, -1),
            (39, 8, 10),
            (49, -3, -1),
        ]
    );
    // primes within the wider bound are still emitted by the scan itself
    assert!(records.iter().any(|r| r.n == 13 && r.s_signed == Some(-3)));
}

#[test]
fn det_table_larger_rows() {
    let records = kurepa_det_table_scan(&cfg(1740, 1750, 10)).unwrap();
    let rows: Vec<(u64, i64, i64)> = records
        .iter()
        .map(|r| (r.n, r.s_signed.unwrap(), r.r_signed))
        .collect();
    assert_eq!(rows, vec![(1745, -8, -6)]);
}

#[test]
fn prime_power_scan_small() {
    let records = prime_power_scan(&cfg(4, 200, 2)).unwrap();
    let rows: Vec<(u64, i64)> = records.iter().map(|r| (r.n, r.r_signed)).collect();
    assert_eq!(rows, vec![(4, 2), (8, -2), (9, 1), (49, -1)]);
    // lower bound excludes 9 and the rest stay out of range
    let records = prime_power_scan(&cfg(10, 48, 2)).unwrap();
    assert!(records.is_empty());
}

#[test]
fn bell_scan_small_hits() {
    let records = bell_one_scan(&cfg(2, 600, 0)).unwrap();
    let rows: Vec<(u64, i64)> = records.iter().map(|r| (r.n, r.r_signed)).collect();
    assert_eq!(
        rows,
        vec![
            (2, 0),
            (4, 2),
            (16, 6),
            (28, -6),
            (46, 2),
            (134, 2),
            (454, 2),
        ]
    );
    assert!(bell_one_scan(&cfg(3, 4, 0)).unwrap().is_empty());
}

#[test]
fn bell_scan_ceiling() {
    assert!(matches!(
        bell_one_scan(&cfg(2, 30000, 0)),
        Err(ScanError::BellCeiling { .. })
    ));
}

#[test]
fn invalid_ranges() {
    assert!(matches!(
        kurepa_prime_scan(&cfg(5, 5, 0)),
        Err(ScanError::InvalidRange { .. })
    ));
    assert!(matches!(
        kurepa_prime_scan(&cfg(1, 5, 0)),
        Err(ScanError::InvalidRange { .. })
    ));
    assert!(matches!(
        kurepa_det_table_scan(&cfg(3, 50, 10)),
        Err(ScanError::InvalidRange { .. })
    ));
}

#[test]
fn partition_determinism() {
    let whole = residue_table_scan(&cfg(2, 3000, 2)).unwrap();
    for split in [3, 500, 1499, 2998] {
        let mut left = residue_table_scan(&cfg(2, split, 2)).unwrap();
        let right = residue_table_scan(&cfg(split, 3000, 2)).unwrap();
        left.extend(right);
        assert_eq!(left, whole, "split at {split}");
    }
}

#[test]
fn block_size_and_jobs_do_not_change_records() {
    let base = residue_table_scan(&cfg(2, 2000, 2)).unwrap();
    for bs in [7, 100, 1 << 20] {
        let mut c = cfg(2, 2000, 2);
        c.block_size = bs;
        assert_eq!(residue_table_scan(&c).unwrap(), base, "block size {bs}");
    }
    for jobs in [1, 4] {
        let mut c = cfg(2, 2000, 2);
        c.jobs = jobs;
        assert_eq!(residue_table_scan(&c).unwrap(), base, "jobs {jobs}");
    }
}

#[test]
fn csv_output_is_stable() {
    let records = residue_table_scan(&cfg(2, 500, 2)).unwrap();
    let lines: Vec<String> = records.iter().map(scanner::to_csv_line).collect();
    let again = residue_table_scan(&cfg(2, 500, 2)).unwrap();
    let lines2: Vec<String> = again.iter().map(scanner::to_csv_line).collect();
    assert_eq!(lines, lines2);
    assert_eq!(scanner::csv_header(), "n,factorization,r_signed,s_signed,near_miss,ratio");
}

fn scan_with_checkpoint(path: &std::path::Path, resume: bool) -> Vec<ScanRecord> {
    let mut c = cfg(2, 1200, 2);
    c.block_size = 100;
    c.checkpoint = Some(path.to_path_buf());
    c.resume = resume;
    residue_table_scan(&c).unwrap()
}

#[test]
fn checkpoint_resume_reproduces_the_scan() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ckpt");
    let full = scan_with_checkpoint(&path, false);

    // cut the file after the 4th committed block, keeping the header
    let text = std::fs::read_to_string(&path).unwrap();
    let mut kept = String::new();
    let mut done = 0;
    for line in text.lines() {
        kept.push_str(line);
        kept.push('\n');
        if line.contains("\"status\":\"done\"") {
            done += 1;
            if done == 4 {
                break;
            }
        }
    }
    assert!(done >= 4, "expected at least 4 committed blocks");
    std::fs::write(&path, &kept).unwrap();

    let resumed = scan_with_checkpoint(&path, true);
    assert_eq!(resumed, full);

    // resuming a completed checkpoint recomputes nothing
    let mut c = cfg(2, 1200, 2);
    c.block_size = 100;
    c.checkpoint = Some(path.clone());
    c.resume = true;
    let outcome = run_scan(ScanKind::ResidueTable, &c).unwrap();
    assert_eq!(outcome.computed_blocks, 0);
    assert_eq!(outcome.resumed_blocks, 12);
    let records = outcome.records;
    assert_eq!(records, full);
}

#[test]
fn checkpoint_interrupted_mid_block_is_safe() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ckpt");
    let full = scan_with_checkpoint(&path, false);

    // keep two committed blocks plus dangling records of the third
    let text = std::fs::read_to_string(&path).unwrap();
    let mut kept = String::new();
    let mut done = 0;
    for line in text.lines() {
        let is_marker = line.contains("\"status\":\"done\"");
        if is_marker {
            done += 1;
        }
        if done < 2 || (done == 2 && is_marker) || (done == 2 && !is_marker) {
            kept.push_str(line);
            kept.push('\n');
        }
        if done > 2 {
            break;
        }
    }
    std::fs::write(&path, &kept).unwrap();

    let resumed = scan_with_checkpoint(&path, true);
    assert_eq!(resumed, full);
}

#[test]
fn corrupt_checkpoint_refuses_to_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ckpt");
    scan_with_checkpoint(&path, false);
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str("{this is not json\n");
    std::fs::write(&path, &text).unwrap();

    let mut c = cfg(2, 1200, 2);
    c.block_size = 100;
    c.checkpoint = Some(path.clone());
    c.resume = true;
    match residue_table_scan(&c) {
        Err(ScanError::CorruptCheckpoint { hint, .. }) => {
            assert!(hint.contains("truncate") || hint.contains("delete"));
        }
        other => panic!("expected corrupt-checkpoint error, got {other:?}"),
    }
}

#[test]
fn mismatched_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.ckpt");
    scan_with_checkpoint(&path, false);

    let mut c = cfg(2, 1200, 1);
    c.block_size = 100;
    c.checkpoint = Some(path.clone());
    c.resume = true;
    assert!(matches!(
        residue_table_scan(&c),
        Err(ScanError::CheckpointMismatch { .. })
    ));
}

#[test]
fn streaming_matches_collected_records() {
    let mut streamed: Vec<ScanRecord> = Vec::new();
    let c = cfg(2, 800, 2);
    let outcome = scanner::run_scan_with(ScanKind::ResidueTable, &c, |r| {
        streamed.push(r.clone());
    })
    .unwrap();
    assert_eq!(streamed, outcome.records);
    let ns: Vec<u64> = streamed.iter().map(|r| r.n).collect();
    let mut sorted = ns.clone();
    sorted.sort_unstable();
    assert_eq!(ns, sorted, "records stream in ascending order");
}

#[test]
fn even_residues_follow_the_even_composition_rule() {
    // even n = 2^e * m: the 2-part keeps its sign, odd parts flip
    let records = residue_table_scan(&cfg(2, 1500, 2)).unwrap();
    for r in records.iter().filter(|r| r.n % 2 == 0) {
        let direct = subfactorial_mod(r.n - 1, r.n);
        assert_eq!(direct.signed(), r.r_signed, "n={}", r.n);
    }
}
