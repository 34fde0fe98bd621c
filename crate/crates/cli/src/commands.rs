//! Subcommand implementations. Each returns the process exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use franel::algebra::Rational;
use franel::franel::{apery_zeta3, coefficient_table};
use franel::hyperterm::{binom_power_term, HyperTerm};
use franel::limits::{
    agreeing_digits, apery_zeta3_limit, asymptotic_ratio, limit_report, limit_report_exploratory, max_limit_index,
    sci, zeta3_reference, BigFloat, LimitKind, LimitReport,
};
use franel::operator::RecurrenceOperator;
use franel::telescoper::{
    analyze_structure, certificate_residual, verify_certificate, zeilberger, Certificate, StructureReport,
    TelescopeError,
};

use crate::cache::{Cache, Lookup, TOOL_VERSION};
use crate::document::{OperatorDocument, Provenance};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "franel", version, about = "Creative telescoping and Apéry limits for sums of powers of binomials")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cache directory for telescoping results (overrides FRANEL_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Working precision for numeric reports.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..=1_000_000))]
    pub precision_bits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of A_j^(s)(n), the even coefficients of the deformed sums.
    Compute {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long = "J", default_value_t = 0)]
        j: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find, verify and audit the telescoping recurrence for binom(n,k)^s.
    Telescope {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        r_max: u64,
    },
    /// Check the certificate identity of a saved operator document.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Compare A_j/A_0 with phi_j pi^(2j).
    Limits {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long = "J", default_value_t = 1)]
        j: usize,
        /// Allow J beyond floor((s-1)/2).
        #[arg(long = "J-force")]
        j_force: bool,
    },
    /// A^(s)(n) sqrt(s (pi n/2)^(s-1)) / 2^(ns), which tends to 1.
    Asym {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Apéry's zeta(3) sequences and the limit 6B(n)/A(n).
    DemoApery {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
    },
}

pub fn run(cli: Cli) -> u8 {
    let g = &cli.global;
    match cli.command {
        Command::Compute { s, n_max, j, format } => compute(g, s, n_max, j, format),
        Command::Telescope { s, r_max } => telescope(g, s, r_max as usize),
        Command::Verify { input } => verify(g, &input),
        Command::Limits { s, n_max, j, j_force } => limits(g, s, n_max, j, j_force),
        Command::Asym { s, n } => asym(g, s, n as usize),
        Command::DemoApery { n_max } => demo_apery(g, n_max as usize),
    }
}

fn emit(g: &GlobalOpts, text: &str) -> u8 {
    match &g.out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

fn emit_json(g: &GlobalOpts, v: &Value) -> u8 {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    emit(g, &s)
}

fn rat(q: &Rational) -> String {
    q.to_string()
}

/// Fixed-width, right-aligned columns.
fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header, &mut out);
    for r in rows {
        line(r, &mut out);
    }
    out
}

fn compute(g: &GlobalOpts, s: u32, n_max: usize, j_max: usize, format: Format) -> u8 {
    let table = match coefficient_table(s, n_max, j_max) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if g.json || format == Format::Json {
        let rows: Vec<Value> = table
            .rows
            .iter()
            .enumerate()
            .map(|(n, r)| json!({ "n": n, "A": r.iter().map(rat).collect::<Vec<_>>() }))
            .collect();
        return emit_json(g, &json!({ "s": s, "J": j_max, "rows": rows }));
    }
    let mut header = vec!["n".to_string()];
    header.extend((0..=j_max).map(|j| format!("A_{j}")));
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .enumerate()
        .map(|(n, r)| std::iter::once(n.to_string()).chain(r.iter().map(rat)).collect())
        .collect();
    emit(g, &render_table(&header, &rows))
}

fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .unwrap_or_else(|| chrono::Utc::now().timestamp());
    chrono::DateTime::from_timestamp(secs, 0)
        .unwrap_or_default()
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn structure_text(r: &StructureReport) -> String {
    let roots = if r.integer_roots_of_denominator_in_n.is_empty() {
        "none".to_string()
    } else {
        format!("{:?}", r.integer_roots_of_denominator_in_n)
    };
    let den = if r.denominator_matches {
        "equals (n-k+1)_m^s"
    } else if r.denominator_divides {
        "strictly divides (n-k+1)_m^s"
    } else {
        "differs from (n-k+1)_m^s"
    };
    format!(
        "order               {} (expected {})\n\
         coefficient degree  {} (expected {})\n\
         certificate den     {den}\n\
         numerator deg in k  {} (expected {})\n\
         numerator deg in n  {} (expected {})\n\
         integer roots in n  {roots}\n",
        r.order,
        r.expected_order,
        r.coeff_degree,
        r.expected_degree,
        r.numerator_k_degree,
        r.expected_numerator_k_degree,
        r.numerator_n_degree,
        r.expected_numerator_n_degree,
    )
}

/// Exit code for a freshly produced pair: `EXIT_INTERNAL` when the
/// certificate identity fails.
pub fn check_produced(term: &HyperTerm, op: &RecurrenceOperator, cert: &Certificate) -> u8 {
    if verify_certificate(term, op, cert) {
        EXIT_OK
    } else {
        eprintln!("internal error: produced certificate does not verify");
        EXIT_INTERNAL
    }
}

fn telescope(g: &GlobalOpts, s: u32, r_max: usize) -> u8 {
    let term = binom_power_term(s).expect("s >= 1");
    let cache = Cache::resolve(g.cache_dir.as_deref());
    let provenance = Provenance { tool_version: TOOL_VERSION.into(), timestamp: timestamp(), r_max };

    let cached = match cache.as_ref().map(|c| c.load(s)) {
        Some(Lookup::Hit(doc)) => Some(doc),
        Some(Lookup::Corrupt(why)) => {
            eprintln!("warning: ignoring cache entry ({why}); recomputing");
            None
        }
        _ => None,
    };

    let (doc, attempts) = if let Some(mut doc) = cached {
        // The cached order is minimal, so a smaller r_max cannot succeed.
        if doc.order > r_max {
            eprintln!("no telescoper of order <= {r_max} (minimal order is {})", doc.order);
            return EXIT_NOT_FOUND;
        }
        doc.provenance = provenance;
        (doc, None)
    } else {
        let found = match zeilberger(&term, r_max) {
            Ok(f) => f,
            Err(TelescopeError::NotFound { attempted }) => {
                eprintln!("no telescoper found; orders tried: {attempted:?}");
                return EXIT_NOT_FOUND;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INTERNAL;
            }
        };
        let code = check_produced(&term, &found.operator, &found.certificate);
        if code != EXIT_OK {
            return code;
        }
        let doc = OperatorDocument::new(s, &found.operator, &found.certificate, provenance);
        if let Some(c) = &cache {
            if let Err(e) = c.store(&doc) {
                eprintln!("warning: cannot write cache in {}: {e}", c.dir().display());
            }
        }
        (doc, Some(found.attempts))
    };

    let (op, cert) = match doc.to_pair() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let json = doc.to_json();
    if let Some(path) = &g.out {
        if let Err(e) = fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    if g.json {
        if g.out.is_none() {
            print!("{json}");
        }
        return EXIT_OK;
    }
    let report = analyze_structure(&op, &cert, s);
    let mut text = format!("telescoping recurrence for sum_k binom(n,k)^{s}\n");
    match &attempts {
        Some(a) => {
            let tried: Vec<String> = a
                .iter()
                .map(|a| format!("{}:{}", a.order, if a.solvable { "solvable" } else { "unsolvable" }))
                .collect();
            let _ = writeln!(text, "orders tried        {}", tried.join(" "));
        }
        None => text.push_str("orders tried        (loaded from cache)\n"),
    }
    let _ = writeln!(text, "operator            {op}");
    let _ = writeln!(text, "certificate den     {}", cert.r().den());
    text.push_str(&structure_text(&report));
    text.push_str("certificate         verified\n");
    print!("{text}");
    EXIT_OK
}

fn verify(g: &GlobalOpts, input: &Path) -> u8 {
    let text = match fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    let pair = OperatorDocument::from_json(&text).and_then(|d| Ok((d.s, d.to_pair()?)));
    let (s, (op, cert)) = match pair {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let term = binom_power_term(s).expect("s >= 1");
    let residual = certificate_residual(&term, &op, &cert);
    let ok = residual.is_zero();
    if g.json {
        let code = emit_json(g, &json!({ "s": s, "verified": ok, "residual": residual.to_string() }));
        return if code != EXIT_OK { code } else if ok { EXIT_OK } else { EXIT_MISMATCH };
    }
    if ok {
        emit(g, &format!("certificate verifies for s = {s}, order {}\n", op.order()))
    } else {
        emit(g, &format!("certificate MISMATCH for s = {s}\nresidual: {residual}\n"));
        EXIT_MISMATCH
    }
}

fn kind_label(r: &LimitReport) -> String {
    match r.kind {
        LimitKind::Ratio => format!("A_{}/A_0", r.j),
        LimitKind::NormalizedB => "B/A".into(),
        LimitKind::NormalizedC => "C/A".into(),
    }
}

fn limits(g: &GlobalOpts, s: u32, n_max: usize, j_max: usize, force: bool) -> u8 {
    if j_max > max_limit_index(s) && !force {
        eprintln!("error: --J {j_max} exceeds floor((s-1)/2) = {}; pass --J-force to explore", max_limit_index(s));
        return EXIT_USAGE;
    }
    let prec = g.precision_bits;
    let res = if force { limit_report_exploratory(s, n_max, j_max, prec) } else { limit_report(s, n_max, j_max, prec) };
    let reports = match res {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let digits = 30;
    if g.json {
        let items: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "s": r.s,
                    "j": r.j,
                    "kind": kind_label(r),
                    "n_used": r.n_used,
                    "estimate": r.estimate.to_decimal(digits),
                    "target": r.target.to_decimal(digits),
                    "abs_error_bound": sci(&r.abs_error.abs_upper_bound()),
                    "successive_diff_ratio": r.successive_diff_ratio.as_ref().map(|x| x.to_decimal(6)),
                })
            })
            .collect();
        return emit_json(g, &Value::Array(items));
    }
    let header: Vec<String> =
        ["quantity", "n", "estimate", "target", "|error| <=", "diff ratio"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                kind_label(r),
                r.n_used.to_string(),
                r.estimate.to_decimal(digits),
                r.target.to_decimal(digits),
                sci(&r.abs_error.abs_upper_bound()),
                r.successive_diff_ratio.as_ref().map_or("-".into(), |x| x.to_decimal(6)),
            ]
        })
        .collect();
    emit(g, &format!("s = {s}, precision {prec} bits\n{}", render_table(&header, &rows)))
}

fn asym(g: &GlobalOpts, s: u32, n: usize) -> u8 {
    let r = match asymptotic_ratio(s, n, g.precision_bits) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let err = r.sub(&BigFloat::from_int(1, g.precision_bits)).abs_upper_bound();
    if g.json {
        return emit_json(
            g,
            &json!({ "s": s, "n": n, "ratio": r.to_decimal(30), "exact": r.is_exact(), "abs_error_bound": sci(&err) }),
        );
    }
    let exact = if r.is_exact() { " (exact)" } else { "" };
    emit(g, &format!("s = {s}, n = {n}\nratio      {}{exact}\n|ratio - 1| <= {}\n", r.to_decimal(30), sci(&err)))
}

fn demo_apery(g: &GlobalOpts, n_max: usize) -> u8 {
    let prec = g.precision_bits;
    let pairs = match apery_zeta3(n_max) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let limit = apery_zeta3_limit(n_max, prec).expect("n_max >= 1");
    let reference = zeta3_reference(prec);
    let digits = agreeing_digits(&limit, &reference);
    if g.json {
        let rows: Vec<Value> = pairs
            .iter()
            .map(|p| json!({ "n": p.n, "A": p.a.to_string(), "B": rat(&p.b) }))
            .collect();
        return emit_json(
            g,
            &json!({ "rows": rows, "six_b_over_a": limit.to_decimal(40), "zeta3": reference.to_decimal(40), "agreeing_digits": digits }),
        );
    }
    let header: Vec<String> = ["n", "A(n)", "B(n)"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = pairs.iter().map(|p| vec![p.n.to_string(), p.a.to_string(), rat(&p.b)]).collect();
    let mut text = render_table(&header, &rows);
    let label = format!("6B({n_max})/A({n_max})");
    let _ = writeln!(text, "{label:<16}{}", limit.to_decimal(40));
    let _ = writeln!(text, "{:<16}{}", "zeta(3)", reference.to_decimal(40));
    let _ = writeln!(text, "{:<16}{digits} decimal digits", "agreement");
    emit(g, &text)
}
