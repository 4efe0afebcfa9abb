use wigner_asym::geometry::Allowedness;
use wigner_asym::harness::{
    panel_a, panel_c, read_csv, reference_tetrahedra, run_sweep, summarize, write_csv, Formula, SweepConfig,
    SweepSpec, SymbolKind,
};
use wigner_asym::HalfInt;

fn csv_bytes(cfg: &SweepConfig, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let out = pool.install(|| run_sweep(cfg));
    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).unwrap();
    buf
}

#[test]
fn csv_is_identical_across_runs_and_thread_counts() {
    let cfg = panel_a();
    let one = csv_bytes(&cfg, 1);
    assert_eq!(one, csv_bytes(&cfg, 4));
    assert_eq!(one, csv_bytes(&cfg, 4));
}

/// `288 V²` as the 5×5 bordered determinant, by Gaussian elimination.
fn cayley_menger_det(l: [f64; 6]) -> f64 {
    // edge order A..F joins vertex pairs (0,1) (0,2) (1,2) (2,3) (1,3) (0,3)
    let pairs = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];
    let mut m = [[0.0f64; 5]; 5];
    for i in 1..5 {
        m[0][i] = 1.0;
        m[i][0] = 1.0;
    }
    for (e, &(p, q)) in pairs.iter().enumerate() {
        m[p + 1][q + 1] = l[e] * l[e];
        m[q + 1][p + 1] = l[e] * l[e];
    }
    let mut det = 1.0;
    for c in 0..5 {
        let piv = (c..5).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..5 {
            let f = m[r][c] / m[c][c];
            for k in c..5 {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

#[test]
fn flags_match_an_independent_determinant() {
    for cfg in [panel_a(), panel_c()] {
        let out = run_sweep(&cfg);
        assert!(out.rows.iter().any(|r| r.flag == Allowedness::Forbidden));
        assert!(out.rows.iter().any(|r| r.flag == Allowedness::Allowed));
        for row in &out.rows {
            let tets = reference_tetrahedra(&cfg, &cfg.spins_at(row.sweep_twice));
            assert_eq!(tets.len(), row.volumes.len());
            for (spins, vol) in tets.iter().zip(&row.volumes) {
                let edges = spins.map(HalfInt::length);
                let det = cayley_menger_det(edges);
                let mean = edges.iter().sum::<f64>() / 6.0;
                let thr = cfg.caustic_eps * mean.powi(6);
                let expect = if det > thr {
                    Allowedness::Allowed
                } else if det >= -thr {
                    Allowedness::NearCaustic
                } else {
                    Allowedness::Forbidden
                };
                assert_eq!(row.flag, expect, "row {}", row.sweep_twice);
                assert!((vol.abs() - (det.abs() / 288.0).sqrt()).abs() < 1e-6 * vol.abs().max(1.0));
                assert_eq!(vol.signum(), det.signum());
            }
        }
    }
}

#[test]
fn summary_recomputed_from_csv_is_equal() {
    let cfg = panel_a();
    let out = run_sweep(&cfg);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    wigner_asym::harness::write_csv_file(&out.rows, &path).unwrap();
    let rows = read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    let again = summarize(&rows, cfg.trim);
    assert_eq!(again, out.summary);
    assert!(out.summary.correlation > 0.99);
}

#[test]
fn rows_carry_their_own_failures() {
    let out = run_sweep(&panel_c());
    let failed: Vec<_> = out.rows.iter().filter(|r| r.error.is_some()).collect();
    assert!(!failed.is_empty());
    for r in &out.rows {
        assert!(r.exact.is_finite());
        match (r.asym, r.abs_err) {
            (Some(a), Some(e)) => assert_eq!(e, (r.exact - a).abs()),
            (None, None) => assert!(r.error.is_some()),
            other => panic!("inconsistent row {other:?}"),
        }
    }
    assert_eq!(out.failed(), failed.len());
}

fn six_j_sweep(from: i64, to: i64, spins: [i64; 6]) -> SweepConfig {
    SweepConfig::from_json(
        &serde_json::json!({
            "kind": "6j",
            "spins": spins,
            "sweep": {"var": "f", "from": from, "to": to},
            "formula": "pr",
        })
        .to_string(),
    )
    .unwrap()
}

#[test]
fn single_point_sweep_has_one_row() {
    let cfg = six_j_sweep(100, 100, [100, 100, 100, 100, 100, 0]);
    let out = run_sweep(&cfg);
    assert_eq!(out.rows.len(), 1);
    assert_eq!(out.rows[0].flag, Allowedness::Allowed);
    assert!(out.rows[0].abs_err.unwrap() < 0.1 * out.rows[0].exact.abs());
}

#[test]
fn all_forbidden_sweep_reports_no_interior() {
    // edges c = 40.5 and a, b, d, e = 20.5 pin the ends of f within 6.4 of each other
    let cfg = six_j_sweep(30, 80, [40, 40, 80, 40, 40, 0]);
    let out = run_sweep(&cfg);
    assert_eq!(out.rows.len(), 26);
    assert!(out.rows.iter().all(|r| r.flag == Allowedness::Forbidden && r.asym.is_none()));
    assert_eq!(out.summary.interior, 0);
    assert_eq!(out.summary.allowed, 0);
}

#[test]
fn fifteen_j_sweep_uses_the_wrapper() {
    let cfg = SweepConfig {
        kind: SymbolKind::FifteenJ,
        spins: [[2, 160, 160, 160, 160], [158, 150, 0, 156, 160], [160; 5]].concat(),
        sweep: SweepSpec { var: "l3".into(), from: 150, to: 170, step: 2, linked: vec![] },
        formula: Formula::FifteenOne,
        ..panel_a()
    };
    cfg.validate().unwrap();
    let out = run_sweep(&cfg);
    assert_eq!(out.rows.len(), 11);
    for r in &out.rows {
        assert_eq!(r.volumes.len(), 3);
        assert_eq!(r.sign_cases.len(), 4);
    }
}
