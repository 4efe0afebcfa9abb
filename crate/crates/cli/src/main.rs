//! `wigner-asym`: exact symbols, asymptotic formulas, sweeps and checks.
//!
//! Spins are given as twice-values everywhere: `3` means 3/2.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wigner_asym::asym::{
    asym_15j_four_small, asym_15j_one_small, asym_15j_three_small, asym_15j_two_small, asym_3nj, asym_9j_one_small,
    edmonds_6j, pr_6j, AsymError, AsymOptions, AsymValue, EdmondsLengths, Slot, SmallSpinMarking, Violation,
};
use wigner_asym::exact::{bits_for_digits, wigner3nj, wigner6j, wigner9j, Pivot, Symbol3nj, Symbol9j};
use wigner_asym::geometry::{Allowedness, GeometryError, Tetrahedron, DEFAULT_CAUSTIC_EPS};
use wigner_asym::harness::{
    fig4_suite, plot_script, run_sweep, verify_identities, write_csv, write_csv_file, SweepConfig,
};
use wigner_asym::HalfInt;

const EXIT_INVALID: u8 = 2;
const EXIT_NOT_ALLOWED: u8 = 3;
const EXIT_ACCEPTANCE: u8 = 4;

#[derive(Parser)]
#[command(name = "wigner-asym", version, about = "Exact and asymptotic Wigner 6j/9j/15j/3nj symbols")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Decimal digits for exact sums.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    /// 9j summation pivot: j24, j2, j12 or j5.
    #[arg(long, global = true, default_value = "j24")]
    pivot: Pivot,
    /// Edmonds edge lengths: `half` for j + 1/2, `sqrt` for √(j(j+1)).
    #[arg(long, global = true, default_value = "half")]
    edmonds_lengths: EdmondsLengths,
    /// Relative Cayley-Menger threshold for the near-caustic flag.
    #[arg(long, global = true, default_value_t = DEFAULT_CAUSTIC_EPS)]
    caustic_eps: f64,
    /// Exit with status 3 unless the tetrahedra involved are classically allowed.
    #[arg(long, global = true)]
    strict_allowed: bool,
    /// Dump tetrahedra, angles and sign configurations as JSON.
    #[arg(long, global = true)]
    diagnostics: bool,
    /// Output file (sweep CSV, JSON result) or directory (verify fig4).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value of a symbol.
    Exact {
        kind: Kind,
        /// twice-values; 9j row by row, 15j/3nj as the j row, l row, k row
        #[arg(required = true, allow_negative_numbers = true)]
        spins: Vec<i64>,
    },
    /// Asymptotic formula, printed next to the exact value.
    Asym {
        formula: AsymKind,
        #[arg(required = true, allow_negative_numbers = true)]
        spins: Vec<i64>,
        /// Small spins for the 3nj formula, e.g. `--small j1,l2`.
        #[arg(long, value_delimiter = ',')]
        small: Vec<Slot>,
    },
    /// Exact versus asymptotic over a range, from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Built-in checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// The four-panel 9j study.
    Fig4,
    /// Biedenharn-Elliott and orthogonality of the exact 6j.
    Identities {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// largest twice-spin
        #[arg(long, default_value_t = 20)]
        max_twice: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "6j")]
    SixJ,
    #[value(name = "9j")]
    NineJ,
    #[value(name = "15j")]
    FifteenJ,
    #[value(name = "3nj")]
    ThreeNJ,
}

#[derive(Clone, Copy, ValueEnum)]
enum AsymKind {
    Pr6j,
    Edmonds,
    #[value(name = "9j")]
    NineJ,
    #[value(name = "3nj")]
    ThreeNJ,
    #[value(name = "15j-1")]
    Fifteen1,
    #[value(name = "15j-2")]
    Fifteen2,
    #[value(name = "15j-3")]
    Fifteen3,
    #[value(name = "15j-4")]
    Fifteen4,
}

/// Failure with its exit status.
struct Failure(u8, String);

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INVALID, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Exact { kind, ref spins } => exact(&cli.opts, kind, spins),
        Command::Asym { formula, ref spins, ref small } => asym(&cli.opts, formula, spins, small),
        Command::Sweep { ref config } => sweep(&cli.opts, config),
        Command::Verify { what: Verify::Fig4 } => fig4(&cli.opts),
        Command::Verify { what: Verify::Identities { instances, max_twice, seed } } => {
            identities(&cli.opts, instances, max_twice, seed)
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            if code == EXIT_INVALID {
                eprintln!("usage: wigner-asym <exact|asym|sweep|verify> --help");
            }
            ExitCode::from(code)
        }
    }
}

fn halves(t: &[i64]) -> Vec<HalfInt> {
    t.iter().map(|&x| HalfInt::from_twice(x)).collect()
}

fn check_spins(spins: &[i64], want: Option<usize>, what: &str) -> Result<(), Failure> {
    if let Some(n) = want {
        if spins.len() != n {
            return Err(invalid(format!("{what} needs {n} twice-valued spins, got {}", spins.len())));
        }
    } else if spins.len() < 9 || !spins.len().is_multiple_of(3) {
        return Err(invalid(format!("{what} needs 3n twice-valued spins with n >= 3, got {}", spins.len())));
    }
    if let Some(x) = spins.iter().find(|&&x| x < 0) {
        return Err(invalid(format!("spin {x} is negative")));
    }
    Ok(())
}

fn six(t: &[i64]) -> [HalfInt; 6] {
    let h = halves(t);
    [h[0], h[1], h[2], h[3], h[4], h[5]]
}

fn nine(t: &[i64]) -> Symbol9j {
    Symbol9j::from_twice([t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8]])
}

fn chain(t: &[i64]) -> Result<Symbol3nj, Failure> {
    let n = t.len() / 3;
    Symbol3nj::from_twice(&t[..n], &t[n..2 * n], &t[2 * n..]).map_err(|e| invalid(e.to_string()))
}

fn strict_tet(opts: &GlobalOpts, spins: [HalfInt; 6]) -> Result<(), Failure> {
    let flag = Tetrahedron::from_spins(spins).classify(opts.caustic_eps);
    if opts.strict_allowed && flag != Allowedness::Allowed {
        return Err(Failure(EXIT_NOT_ALLOWED, format!("tetrahedron is {}", flag.as_str())));
    }
    Ok(())
}

fn write_json(opts: &GlobalOpts, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = &opts.out {
        let text = serde_json::to_string_pretty(value).expect("serializable");
        std::fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn exact(opts: &GlobalOpts, kind: Kind, spins: &[i64]) -> Result<(), Failure> {
    let digits = opts.precision.max(1);
    let bits = bits_for_digits(digits);
    let (decimal, radical) = match kind {
        Kind::SixJ => {
            check_spins(spins, Some(6), "a 6j symbol")?;
            let s = six(spins);
            if wigner_asym::exact::six_j_admissible(s) {
                strict_tet(opts, s)?;
            }
            let v = wigner6j(s[0], s[1], s[2], s[3], s[4], s[5]);
            (v.to_float(bits).to_string_radix(10, Some(digits as usize)), Some(v.to_string()))
        }
        Kind::NineJ => {
            check_spins(spins, Some(9), "a 9j symbol")?;
            let sym = nine(spins);
            let [j1, j2, j12, _, _, j34, _, j24, j5] = sym.entries();
            if sym.is_admissible() {
                strict_tet(opts, [j1, j2, j12, j34, j5, j24])?;
            }
            (wigner9j(&sym, opts.pivot, digits).value.to_string_radix(10, Some(digits as usize)), None)
        }
        Kind::FifteenJ | Kind::ThreeNJ => {
            let want = matches!(kind, Kind::FifteenJ).then_some(15);
            check_spins(spins, want, "a 3nj symbol")?;
            let v = wigner3nj(&chain(spins)?, digits).map_err(|e| invalid(e.to_string()))?;
            (v.to_string_radix(10, Some(digits as usize)), None)
        }
    };
    println!("{decimal}");
    if let Some(r) = &radical {
        println!("{r}");
    }
    write_json(opts, &json!({ "spins_twice": spins, "decimal": decimal, "sqrt_rational": radical }))
}

fn classify_error(opts: &GlobalOpts, e: AsymError) -> Failure {
    let geometric = match &e {
        AsymError::Geometry(GeometryError::NotClassicallyAllowed { .. }) => true,
        AsymError::HypothesisViolation(v) => v.iter().all(|x| matches!(x, Violation::NearCaustic { .. })),
        _ => false,
    };
    if geometric && opts.strict_allowed {
        Failure(EXIT_NOT_ALLOWED, e.to_string())
    } else if geometric {
        Failure(0, e.to_string())
    } else {
        invalid(e.to_string())
    }
}

fn asym(opts: &GlobalOpts, formula: AsymKind, spins: &[i64], small: &[Slot]) -> Result<(), Failure> {
    let aopts = AsymOptions { caustic_eps: opts.caustic_eps, edmonds_lengths: opts.edmonds_lengths, ..Default::default() };
    let (want, what) = match formula {
        AsymKind::Pr6j | AsymKind::Edmonds => (Some(6), "a 6j symbol"),
        AsymKind::NineJ => (Some(9), "a 9j symbol"),
        AsymKind::ThreeNJ => (None, "a 3nj symbol"),
        _ => (Some(15), "a 15j symbol"),
    };
    check_spins(spins, want, what)?;
    let digits = opts.precision.max(1);
    let exact_value = match formula {
        AsymKind::Pr6j | AsymKind::Edmonds => {
            let s = six(spins);
            wigner6j(s[0], s[1], s[2], s[3], s[4], s[5]).to_f64()
        }
        AsymKind::NineJ => wigner9j(&nine(spins), opts.pivot, digits).value.to_f64(),
        _ => wigner3nj(&chain(spins)?, digits).map_err(|e| invalid(e.to_string()))?.to_f64(),
    };
    let result: Result<AsymValue, AsymError> = match formula {
        AsymKind::Pr6j => pr_6j(six(spins), &aopts),
        AsymKind::Edmonds => {
            let [a, b, c, d, e, f] = six(spins);
            edmonds_6j(a, b, c, d - b, e - a, f, opts.edmonds_lengths)
                .map(|value| AsymValue { value, diagnostics: Default::default() })
        }
        AsymKind::NineJ => asym_9j_one_small(&nine(spins), &aopts),
        AsymKind::ThreeNJ => {
            let mark = if small.is_empty() {
                SmallSpinMarking::j1_with_l(&[])
            } else {
                SmallSpinMarking::new(small.to_vec())
            };
            asym_3nj(&chain(spins)?, &mark, &aopts)
        }
        AsymKind::Fifteen1 => asym_15j_one_small(&chain(spins)?, &aopts),
        AsymKind::Fifteen2 => asym_15j_two_small(&chain(spins)?, &aopts),
        AsymKind::Fifteen3 => asym_15j_three_small(&chain(spins)?, &aopts),
        AsymKind::Fifteen4 => asym_15j_four_small(&chain(spins)?, &aopts),
    };
    let value = match result {
        Ok(v) => v,
        Err(e) => match classify_error(opts, e) {
            Failure(0, msg) => {
                println!("exact {exact_value:.16e}");
                println!("asym  unavailable: {msg}");
                return write_json(opts, &json!({ "exact": exact_value, "asym": null, "error": msg }));
            }
            f => return Err(f),
        },
    };
    if opts.strict_allowed && value.diagnostics.flag() != Allowedness::Allowed {
        return Err(Failure(EXIT_NOT_ALLOWED, format!("tetrahedra are {}", value.diagnostics.flag().as_str())));
    }
    println!("exact {exact_value:.16e}");
    println!("asym  {:.16e}", value.value);
    println!("error {:.3e}", (exact_value - value.value).abs());
    for w in &value.diagnostics.warnings {
        eprintln!("warning: {w}");
    }
    if opts.diagnostics {
        println!("{}", serde_json::to_string_pretty(&value.diagnostics).expect("serializable"));
    }
    write_json(opts, &json!({ "exact": exact_value, "asym": value.value, "diagnostics": value.diagnostics }))
}

fn sweep(opts: &GlobalOpts, path: &Path) -> Result<(), Failure> {
    let cfg = SweepConfig::load(path).map_err(|e| invalid(e.to_string()))?;
    let out = run_sweep(&cfg);
    if opts.strict_allowed {
        if let Some(r) = out.rows.iter().find(|r| r.flag != Allowedness::Allowed) {
            return Err(Failure(EXIT_NOT_ALLOWED, format!("sweep value {} is {}", r.sweep_twice, r.flag.as_str())));
        }
    }
    match opts.out.as_ref().or(cfg.out.as_ref()) {
        Some(csv) => {
            write_csv_file(&out.rows, csv).map_err(|e| invalid(format!("{}: {e}", csv.display())))?;
            let name = csv.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let script = plot_script(&name, &format!("{} sweep of {}", cfg.kind, cfg.sweep.var), &cfg.sweep.var);
            std::fs::write(csv.with_extension("gp"), script).map_err(|e| invalid(e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&out.summary).expect("serializable"));
        }
        None => {
            write_csv(&out.rows, std::io::stdout()).map_err(|e| invalid(e.to_string()))?;
            eprintln!("{}", serde_json::to_string_pretty(&out.summary).expect("serializable"));
        }
    }
    if opts.diagnostics {
        for r in out.rows.iter().filter(|r| r.error.is_some() || !r.sign_cases.is_empty()) {
            eprintln!("{}: cases [{}] {}", r.sweep_twice, r.sign_cases.join(" "), r.error.as_deref().unwrap_or(""));
        }
    }
    Ok(())
}

fn fig4(opts: &GlobalOpts) -> Result<(), Failure> {
    let report = fig4_suite(opts.out.as_deref()).map_err(|e| invalid(e.to_string()))?;
    for p in &report.panels {
        for c in &p.checks {
            println!("[{}] panel ({}) {}: {}", if c.passed { "PASS" } else { "FAIL" }, p.panel, c.name, c.detail);
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure(EXIT_ACCEPTANCE, "four-panel study failed".into()))
    }
}

fn identities(opts: &GlobalOpts, instances: usize, max_twice: i64, seed: u64) -> Result<(), Failure> {
    let r = verify_identities(instances, max_twice, opts.precision, seed);
    let tol = 10f64.powi(-(opts.precision as i32) * 3 / 5);
    println!(
        "[{}] {} instances, Biedenharn-Elliott {:.3e}, orthogonality {:.3e}, {:.2} s",
        if r.passed(tol) { "PASS" } else { "FAIL" },
        r.instances,
        r.biedenharn_elliott_max_err,
        r.orthogonality_max_err,
        r.seconds
    );
    if r.passed(tol) {
        Ok(())
    } else {
        Err(Failure(EXIT_ACCEPTANCE, format!("identities exceed {tol:.1e}")))
    }
}
