//! Command-line interface: load algebra files, compute Hochschild /
//! Tate-Hochschild dimension tables, evaluate chain-level operations, run
//! the identity suites, and manage the window cache.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sghh_core::algebra::{
    compute_a_dual, frobenius_dual_bases, load_algebra, make_family, save_algebra, Family,
};
use sghh_core::cohomology::{
    compare_th_sg, h_dims, sg_dims, th_dims, CohomologyReport, LadderContext,
};
use sghh_core::complexes::{
    build_cochain_window, build_dstar, build_sg_ladder, Cochain, DElem, DStarDump, DStarWindow,
    LadderDump, SgLadder, DEFAULT_DIM_CAP,
};
use sghh_core::ops;
use sghh_core::scalar::{FieldSpec, Scalar};
use sghh_core::tensor::{SparseVec, Word};
use sghh_core::verify::{run_suite, SuiteName, SuiteSpec};
use sghh_core::{AlgebraPresentation, Error, SignConventions};

const EXIT_PARSE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_FROBENIUS: u8 = 4;
const EXIT_OPERAND: u8 = 5;

#[derive(Parser)]
#[command(
    name = "sghh",
    about = "Hochschild and Tate-Hochschild cohomology of finite-dimensional algebras, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// algebra file (JSON)
    #[arg(long)]
    algebra: PathBuf,
    /// override the ground field: a prime p, or `Q`
    #[arg(long)]
    field: Option<String>,
    /// degree range `lo..hi` (inclusive)
    #[arg(long, default_value = "0..4", allow_hyphen_values = true)]
    degrees: String,
    /// output format
    #[arg(long, value_enum, default_value = "text")]
    out: OutFormat,
    /// cache directory (default: $SGHH_CACHE_DIR)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild cohomology dimension table
    Hh {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// singular Hochschild ladder: level dimensions, connecting ranks,
    /// stabilization verdicts
    Hhsg {
        #[command(flatten)]
        common: CommonArgs,
        /// highest form degree of the ladder
        #[arg(long, default_value_t = 5)]
        pmax: u32,
        /// trailing connecting maps that must be bijective
        #[arg(long, default_value_t = 2)]
        confirm_span: u32,
    },
    /// Tate-Hochschild dimension table from the generalized complex
    Th {
        #[command(flatten)]
        common: CommonArgs,
        /// use the transported complex (requires a trace in the file)
        #[arg(long)]
        symmetric: bool,
        /// append the dimension comparison against the stabilized ladder
        #[arg(long)]
        compare: bool,
        /// ladder height for the comparison
        #[arg(long, default_value_t = 6)]
        pmax: u32,
        #[arg(long, default_value_t = 2)]
        confirm_span: u32,
    },
    /// evaluate a chain-level operation on element files
    Ops {
        /// one of: cup, bracket, brace, star, b, delta, delta-tilde
        op: String,
        #[command(flatten)]
        common: CommonArgs,
        /// operand element files
        operands: Vec<PathBuf>,
        /// for `delta`: also verify against the bracket with the multiplication
        #[arg(long)]
        check_delta: bool,
    },
    /// run an identity suite
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// suite name (dg, theta, gerstenhaber, binfinity, star, dstar, bv,
        /// comparison) or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// caps `max_arity,max_form`
        #[arg(long, default_value = "3,2")]
        caps: String,
        #[arg(long, default_value_t = 50)]
        samples: u32,
    },
    /// print a built-in algebra presentation as an algebra file
    Families {
        /// `truncated-poly` or `radical-square-zero`
        kind: String,
        /// truncated-poly: n; radical-square-zero: vertex count
        param: u32,
        /// radical-square-zero: arrows as `s->t,s->t,...`
        #[arg(long)]
        arrows: Option<String>,
        #[arg(long, default_value = "101")]
        field: String,
        /// include the standard trace (truncated-poly: dual of the top power)
        #[arg(long)]
        with_trace: bool,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, Error> {
    if s == "Q" || s == "q" {
        return Ok(FieldSpec::Rational);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad field `{s}`")))?;
    FieldSpec::prime(p)
}

fn parse_degrees(s: &str) -> Result<(i64, i64), Error> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("bad degree range `{s}`")))?;
    let lo: i64 = lo.trim().parse().map_err(|_| Error::Parse("bad degree".into()))?;
    let hi: i64 = hi.trim().parse().map_err(|_| Error::Parse("bad degree".into()))?;
    if lo > hi {
        return Err(Error::Parse("empty degree range".into()));
    }
    Ok((lo, hi))
}

struct Loaded {
    alg: AlgebraPresentation,
    trace: Option<Vec<Scalar>>,
    cache_dir: Option<PathBuf>,
    content_hash: String,
}

fn load_common(common: &CommonArgs) -> Result<Loaded, (u8, String)> {
    let text = std::fs::read_to_string(&common.algebra)
        .map_err(|e| (EXIT_PARSE, format!("cannot read {}: {e}", common.algebra.display())))?;
    let field = match &common.field {
        None => None,
        Some(f) => Some(parse_field(f).map_err(|e| (EXIT_PARSE, e.to_string()))?),
    };
    let (alg, trace) = load_algebra(&text, field).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let report = alg.validate();
    if !report.is_valid() {
        let mut msg = String::from("algebra file is not a unital associative presentation:");
        for f in report.failures.iter().take(8) {
            msg.push_str(&format!(" {f:?}"));
        }
        return Err((EXIT_PARSE, msg));
    }
    let cache_dir = common
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("SGHH_CACHE_DIR").map(PathBuf::from));
    let content_hash = alg.content_hash();
    Ok(Loaded { alg, trace, cache_dir, content_hash })
}

fn err_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::MissingFrobeniusData | Error::NotSymmetric | Error::DegeneratePairing => {
            EXIT_FROBENIUS
        }
        Error::DegreeOutOfWindow(_) | Error::IndexOutOfRange(_) | Error::BasisMismatch(_) => {
            EXIT_OPERAND
        }
        _ => EXIT_PARSE,
    }
}

/// Atomic cache write: temp file then rename.
fn cache_store(dir: &Path, key: &str, payload: &str) {
    if std::fs::create_dir_all(dir).is_err() {
        return;
    }
    let tmp = dir.join(format!(".{key}.tmp"));
    let dst = dir.join(format!("{key}.json"));
    if let Ok(mut f) = std::fs::File::create(&tmp) {
        if f.write_all(payload.as_bytes()).is_ok() {
            let _ = std::fs::rename(&tmp, &dst);
        }
    }
}

fn cache_load(dir: &Path, key: &str) -> Option<String> {
    std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()
}

fn cache_key(parts: &[&str]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn emit_report(report: &CohomologyReport, out: OutFormat) {
    match out {
        OutFormat::Text => print!("{}", report.to_text()),
        OutFormat::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("serialize"))
        }
    }
}

fn build_ladder_cached(
    loaded: &Loaded,
    arity_hi: u32,
    p_max: u32,
) -> Result<SgLadder, Error> {
    let conv = SignConventions::default();
    let key = cache_key(&[
        "ladder",
        &loaded.content_hash,
        &format!("0,{arity_hi},{p_max},{:?}", conv.koszul),
    ]);
    if let Some(dir) = &loaded.cache_dir {
        if let Some(text) = cache_load(dir, &key) {
            if let Ok(dump) = serde_json::from_str::<LadderDump>(&text) {
                if let Ok(l) = SgLadder::from_dump(loaded.alg.field, &dump) {
                    return Ok(l);
                }
            }
        }
    }
    let ladder = build_sg_ladder(&loaded.alg, 0, arity_hi, p_max, conv.koszul, DEFAULT_DIM_CAP)?;
    if let Some(dir) = &loaded.cache_dir {
        let payload = serde_json::to_string(&ladder.dump()).expect("serialize");
        cache_store(dir, &key, &payload);
    }
    Ok(ladder)
}

fn build_dstar_cached(loaded: &Loaded, sym: bool, lo: i64, hi: i64) -> Result<DStarWindow, Error> {
    let adual = compute_a_dual(&loaded.alg);
    let fd = match (sym, &loaded.trace) {
        (true, Some(t)) => Some(frobenius_dual_bases(&loaded.alg, t)?),
        (true, None) => return Err(Error::MissingFrobeniusData),
        _ => None,
    };
    let key = cache_key(&["dstar", &loaded.content_hash, &format!("{sym},{lo},{hi}")]);
    if let Some(dir) = &loaded.cache_dir {
        if let Some(text) = cache_load(dir, &key) {
            if let Ok(dump) = serde_json::from_str::<DStarDump>(&text) {
                if let Ok(w) = DStarWindow::from_dump(loaded.alg.field, &dump) {
                    return Ok(w);
                }
            }
        }
    }
    let window = build_dstar(&loaded.alg, &adual, fd.as_ref(), lo, hi, DEFAULT_DIM_CAP)?;
    if let Some(dir) = &loaded.cache_dir {
        let payload = serde_json::to_string(&window.dump()).expect("serialize");
        cache_store(dir, &key, &payload);
    }
    Ok(window)
}

fn cmd_hh(common: &CommonArgs) -> Result<(), (u8, String)> {
    let loaded = load_common(common)?;
    let (lo, hi) = parse_degrees(&common.degrees).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    if lo < 0 {
        return Err((EXIT_PARSE, "hh degrees start at 0".into()));
    }
    let window = build_cochain_window(&loaded.alg, 0, 0, hi as u32 + 1, DEFAULT_DIM_CAP)
        .map_err(|e| (err_code(&e), e.to_string()))?;
    let dims =
        h_dims(loaded.alg.field, &window, lo, hi).map_err(|e| (err_code(&e), e.to_string()))?;
    let report = CohomologyReport { hh: Some(dims), ..Default::default() };
    emit_report(&report, common.out);
    Ok(())
}

fn cmd_hhsg(common: &CommonArgs, pmax: u32, confirm_span: u32) -> Result<(), (u8, String)> {
    let loaded = load_common(common)?;
    let (lo, hi) = parse_degrees(&common.degrees).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    if confirm_span < 2 {
        return Err((EXIT_PARSE, "confirm-span must be at least 2".into()));
    }
    let arity_hi = (hi + pmax as i64 + 1).max(1) as u32;
    let ladder =
        build_ladder_cached(&loaded, arity_hi, pmax).map_err(|e| (err_code(&e), e.to_string()))?;
    let rows = sg_dims(&loaded.alg, &ladder, lo, hi, confirm_span)
        .map_err(|e| (err_code(&e), e.to_string()))?;
    let report = CohomologyReport {
        sg: Some(rows),
        confirm_span: Some(confirm_span),
        ..Default::default()
    };
    emit_report(&report, common.out);
    Ok(())
}

fn cmd_th(
    common: &CommonArgs,
    symmetric: bool,
    compare: bool,
    pmax: u32,
    confirm_span: u32,
) -> Result<(), (u8, String)> {
    let loaded = load_common(common)?;
    let (lo, hi) = parse_degrees(&common.degrees).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let window = build_dstar_cached(&loaded, symmetric, lo - 1, hi + 1)
        .map_err(|e| (err_code(&e), e.to_string()))?;
    let th =
        th_dims(loaded.alg.field, &window, lo, hi).map_err(|e| (err_code(&e), e.to_string()))?;
    let mut report = CohomologyReport { th: Some(th), ..Default::default() };
    if compare {
        let arity_hi = (hi + pmax as i64 + 1).max(1) as u32;
        let ladder = build_ladder_cached(&loaded, arity_hi, pmax)
            .map_err(|e| (err_code(&e), e.to_string()))?;
        let rows = sg_dims(&loaded.alg, &ladder, lo, hi, confirm_span)
            .map_err(|e| (err_code(&e), e.to_string()))?;
        let adual = compute_a_dual(&loaded.alg);
        let fd = match (&loaded.trace, symmetric) {
            (Some(t), true) => Some(
                frobenius_dual_bases(&loaded.alg, t)
                    .map_err(|e| (err_code(&e), e.to_string()))?,
            ),
            _ => None,
        };
        let ctx = LadderContext {
            alg: &loaded.alg,
            ladder: &ladder,
            adual: &adual,
            fd: fd.as_ref(),
            dstar: Some(&window),
            conv: SignConventions::default().koszul,
        };
        let (cmp, verdict) =
            compare_th_sg(&ctx, &rows, lo, hi).map_err(|e| (err_code(&e), e.to_string()))?;
        report.sg = Some(rows);
        report.confirm_span = Some(confirm_span);
        report.comparison = Some(cmp);
        report.quasi_iso = Some(verdict);
    }
    emit_report(&report, common.out);
    Ok(())
}

// --- element files ----------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct ElementFile {
    /// `cochain` or `chain`
    kind: String,
    #[serde(default)]
    arity: u32,
    #[serde(default)]
    form: u32,
    /// chain length for `chain`
    #[serde(default)]
    n: u32,
    entries: Vec<ElementEntry>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ElementEntry {
    /// cochain input letters
    #[serde(default, rename = "in", skip_serializing_if = "Vec::is_empty")]
    input: Vec<u32>,
    /// output (cochain) or leading (chain) coefficient index
    coeff: u32,
    /// cochain form-output letters
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    out: Vec<u32>,
    /// chain word letters
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    word: Vec<u32>,
    c: String,
}

fn load_element(alg: &AlgebraPresentation, path: &Path) -> Result<DElem, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_OPERAND, format!("cannot read {}: {e}", path.display())))?;
    let file: ElementFile = serde_json::from_str(&text)
        .map_err(|e| (EXIT_OPERAND, format!("{}: {e}", path.display())))?;
    match file.kind.as_str() {
        "cochain" => {
            let mut c = Cochain::zero(alg, file.arity, file.form);
            for e in &file.entries {
                if e.input.len() != file.arity as usize || e.out.len() != file.form as usize {
                    return Err((EXIT_OPERAND, "entry shape mismatch".into()));
                }
                let col = alg
                    .inputs_basis(file.arity)
                    .encode(&Word { coeff: None, letters: e.input.clone() });
                let row = alg
                    .bar_basis(file.form)
                    .encode(&Word { coeff: Some(e.coeff), letters: e.out.clone() });
                let s = alg
                    .field
                    .parse_scalar(&e.c)
                    .map_err(|er| (EXIT_OPERAND, er.to_string()))?;
                c.map.add_entry(col, row, s);
            }
            Ok(DElem::Cochain(c))
        }
        "chain" => {
            let basis = alg.bar_basis(file.n);
            let mut v = SparseVec::zero(basis);
            for e in &file.entries {
                if e.word.len() != file.n as usize {
                    return Err((EXIT_OPERAND, "entry shape mismatch".into()));
                }
                let idx = basis.encode(&Word { coeff: Some(e.coeff), letters: e.word.clone() });
                let s = alg
                    .field
                    .parse_scalar(&e.c)
                    .map_err(|er| (EXIT_OPERAND, er.to_string()))?;
                v.add_term(idx, s);
            }
            Ok(DElem::ChainSym(v))
        }
        other => Err((EXIT_OPERAND, format!("unknown element kind `{other}`"))),
    }
}

fn dump_element(alg: &AlgebraPresentation, x: &DElem) -> String {
    let file = match x {
        DElem::Cochain(c) => {
            let dom = alg.inputs_basis(c.arity());
            let cod = alg.bar_basis(c.form());
            ElementFile {
                kind: "cochain".into(),
                arity: c.arity(),
                form: c.form(),
                n: 0,
                entries: c
                    .map
                    .triplets()
                    .map(|(row, col, s)| {
                        let iw = dom.decode(col);
                        let ow = cod.decode(row);
                        ElementEntry {
                            input: iw.letters,
                            coeff: ow.coeff.unwrap(),
                            out: ow.letters,
                            word: vec![],
                            c: s.to_string(),
                        }
                    })
                    .collect(),
            }
        }
        DElem::ChainSym(v) | DElem::ChainRaw(v) => ElementFile {
            kind: "chain".into(),
            arity: 0,
            form: 0,
            n: v.basis.letter_count(),
            entries: v
                .entries
                .iter()
                .map(|(i, s)| {
                    let w = v.basis.decode(*i);
                    ElementEntry {
                        input: vec![],
                        coeff: w.coeff.unwrap(),
                        out: vec![],
                        word: w.letters,
                        c: s.to_string(),
                    }
                })
                .collect(),
        },
    };
    serde_json::to_string_pretty(&file).expect("serialize element")
}

fn cmd_ops(
    common: &CommonArgs,
    op: &str,
    operands: &[PathBuf],
    check_delta: bool,
) -> Result<(), (u8, String)> {
    let loaded = load_common(common)?;
    let alg = &loaded.alg;
    let (lo, hi) = parse_degrees(&common.degrees).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let want = |n: usize| -> Result<(), (u8, String)> {
        if operands.len() != n {
            Err((EXIT_OPERAND, format!("`{op}` takes {n} operand file(s)")))
        } else {
            Ok(())
        }
    };
    let as_cochain = |x: DElem| -> Result<Cochain, (u8, String)> {
        match x {
            DElem::Cochain(c) => Ok(c),
            _ => Err((EXIT_OPERAND, format!("`{op}` takes cochain operands"))),
        }
    };
    let fd = || -> Result<sghh_core::FrobeniusData, (u8, String)> {
        match &loaded.trace {
            Some(t) => frobenius_dual_bases(alg, t).map_err(|e| (err_code(&e), e.to_string())),
            None => Err((
                EXIT_FROBENIUS,
                "this operation needs a trace in the algebra file".into(),
            )),
        }
    };
    let result: DElem = match op {
        "cup" => {
            want(2)?;
            let f = as_cochain(load_element(alg, &operands[0])?)?;
            let g = as_cochain(load_element(alg, &operands[1])?)?;
            DElem::Cochain(ops::cup(alg, &f, &g))
        }
        "bracket" => {
            want(2)?;
            let f = as_cochain(load_element(alg, &operands[0])?)?;
            let g = as_cochain(load_element(alg, &operands[1])?)?;
            DElem::Cochain(ops::bracket(alg, &f, &g))
        }
        "brace" => {
            if operands.len() < 2 {
                return Err((EXIT_OPERAND, "`brace` takes f and at least one g".into()));
            }
            let f = as_cochain(load_element(alg, &operands[0])?)?;
            let gs: Vec<Cochain> = operands[1..]
                .iter()
                .map(|p| as_cochain(load_element(alg, p)?))
                .collect::<Result<_, _>>()?;
            let out =
                ops::brace_sg(alg, &f, &gs, false).map_err(|e| (EXIT_OPERAND, e.to_string()))?;
            DElem::Cochain(out)
        }
        "star" => {
            want(2)?;
            let frob = fd()?;
            let adual = compute_a_dual(alg);
            let x = load_element(alg, &operands[0])?;
            let y = load_element(alg, &operands[1])?;
            for z in [&x, &y] {
                if z.degree() < lo || z.degree() > hi {
                    return Err((
                        EXIT_OPERAND,
                        format!("operand degree {} outside the window {lo}..{hi}", z.degree()),
                    ));
                }
            }
            ops::star_sym(alg, &adual, &frob, &x, &y)
        }
        "b" => {
            want(1)?;
            match load_element(alg, &operands[0])? {
                DElem::ChainSym(v) => DElem::ChainSym(ops::connes_b(alg, &v)),
                _ => return Err((EXIT_OPERAND, "`b` takes a chain operand".into())),
            }
        }
        "delta" => {
            want(1)?;
            let f = as_cochain(load_element(alg, &operands[0])?)?;
            let out = sghh_core::complexes::cochain_delta(alg, &f);
            if check_delta {
                let eq = ops::delta_is_bracket_with_mu(alg, &f);
                println!("{}", if eq { "equal" } else { "differ" });
            }
            DElem::Cochain(out)
        }
        "delta-tilde" => {
            want(1)?;
            let frob = fd()?;
            let x = load_element(alg, &operands[0])?;
            if x.degree() < lo || x.degree() > hi {
                return Err((
                    EXIT_OPERAND,
                    format!("operand degree {} outside the window {lo}..{hi}", x.degree()),
                ));
            }
            ops::tilde_delta(alg, &frob, &x, SignConventions::default().bv_exponent)
                .map_err(|e| (err_code(&e), e.to_string()))?
        }
        other => return Err((EXIT_OPERAND, format!("unknown operation `{other}`"))),
    };
    println!("{}", dump_element(alg, &result));
    Ok(())
}

fn cmd_verify(
    common: &CommonArgs,
    suite: &str,
    seed: u64,
    caps: &str,
    samples: u32,
) -> Result<bool, (u8, String)> {
    let loaded = load_common(common)?;
    let (ma, mf) = caps
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or((EXIT_PARSE, format!("bad caps `{caps}` (want `arity,form`)")))?;
    let suites: Vec<SuiteName> = if suite == "all" {
        SuiteName::all().to_vec()
    } else {
        vec![suite.parse().map_err(|e: Error| (EXIT_PARSE, e.to_string()))?]
    };
    let mut results = Vec::new();
    let mut all_passed = true;
    for s in suites {
        let spec = SuiteSpec { suite: s, max_arity: ma, max_form: mf, samples, seed };
        match run_suite(&loaded.alg, loaded.trace.as_deref(), spec, SignConventions::default()) {
            Ok(r) => {
                all_passed &= r.passed;
                results.push(r);
            }
            Err(Error::MissingFrobeniusData) if suite == "all" => {
                // suites needing a trace are skipped in the `all` sweep
            }
            Err(e) => return Err((err_code(&e), e.to_string())),
        }
    }
    match common.out {
        OutFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&results).expect("serialize"))
        }
        OutFormat::Text => {
            for r in &results {
                for c in &r.checks {
                    println!(
                        "{} {} {}",
                        if c.passed { "pass" } else { "FAIL" },
                        c.name,
                        c.counterexample.as_deref().unwrap_or("")
                    );
                }
            }
            println!("{}", if all_passed { "all checks passed" } else { "FAILURES" });
        }
    }
    Ok(all_passed)
}

fn cmd_families(
    kind: &str,
    param: u32,
    arrows: Option<&str>,
    field: &str,
    with_trace: bool,
) -> Result<(), (u8, String)> {
    let field = parse_field(field).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let fam = match kind {
        "truncated-poly" => Family::TruncatedPoly { n: param },
        "radical-square-zero" => {
            let arrows: Vec<(u32, u32)> = match arrows {
                None => Vec::new(),
                Some(a) => a
                    .split(',')
                    .map(|s| {
                        s.split_once("->")
                            .and_then(|(x, y)| {
                                Some((x.trim().parse().ok()?, y.trim().parse().ok()?))
                            })
                            .ok_or((EXIT_PARSE, format!("bad arrow `{s}`")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            Family::RadicalSquareZero { vertices: param, arrows }
        }
        other => return Err((EXIT_PARSE, format!("unknown family `{other}`"))),
    };
    let alg = make_family(&fam, field).map_err(|e| (EXIT_PARSE, e.to_string()))?;
    let trace = if with_trace {
        match &fam {
            Family::TruncatedPoly { n } => {
                let mut t = vec![field.zero(); *n as usize];
                t[*n as usize - 1] = field.one();
                Some(t)
            }
            Family::RadicalSquareZero { .. } => None,
        }
    } else {
        None
    };
    println!("{}", save_algebra(&alg, trace.as_deref()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, (u8, String)> = match &cli.command {
        Command::Hh { common } => cmd_hh(common).map(|_| true),
        Command::Hhsg { common, pmax, confirm_span } => {
            cmd_hhsg(common, *pmax, *confirm_span).map(|_| true)
        }
        Command::Th { common, symmetric, compare, pmax, confirm_span } => {
            cmd_th(common, *symmetric, *compare, *pmax, *confirm_span).map(|_| true)
        }
        Command::Ops { op, common, operands, check_delta } => {
            cmd_ops(common, op, operands, *check_delta).map(|_| true)
        }
        Command::Verify { common, suite, seed, caps, samples } => {
            cmd_verify(common, suite, *seed, caps, *samples)
        }
        Command::Families { kind, param, arrows, field, with_trace } => {
            cmd_families(kind, *param, arrows.as_deref(), field, *with_trace).map(|_| true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
