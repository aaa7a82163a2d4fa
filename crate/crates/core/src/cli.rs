//! Command-line front end.
//!
//! Subcommands: `stats`, `enumerate`, `poly`, `series`, `verify`,
//! `list-identities`. Output is canonical text by default and JSON with
//! `--json`; every integer in JSON that can exceed 64 bits is a decimal
//! string. Identical invocations produce identical output (`verify` reports
//! additionally carry wall-clock `millis`, the one field that varies).
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
//! The environment variable `CYCLEFRAC_MAX_N` overrides the desk-scale
//! family-size caps.

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use num_bigint::BigInt;

use crate::families::{self, Caps, Family, FamilyKind, Substitution, WeightScheme};
use crate::permstat::Permutation;
use crate::polyring::{Monomial, Polynomial, VarId};
use crate::verifier::{self, VerifyMode, VerifyReport};

#[derive(Parser)]
#[command(name = "cyclefrac", version)]
#[command(
    about = "Permutation statistics, generating polynomials, and continued-fraction identities, in exact arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Full statistic profile of one permutation
    Stats {
        /// One-line word, e.g. "9,3,7,4,6,11,2,8,10,1,5"
        word: String,
        #[arg(long, conflicts_with = "tsv")]
        json: bool,
        /// Tab-separated "name<TAB>value" lines
        #[arg(long)]
        tsv: bool,
    },
    /// List every member of a family
    Enumerate {
        /// perm, dperm, or cyclealt
        #[arg(long)]
        family: String,
        /// Family size (even for dperm and cyclealt)
        #[arg(long)]
        size: usize,
        /// Print cycle form instead of one-line words
        #[arg(long)]
        cycles: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generating polynomial of a family at one size
    Poly {
        #[arg(long)]
        family: String,
        /// Weight scheme name (see list in the docs, e.g. master-perm)
        #[arg(long)]
        scheme: String,
        /// 1, -1, or symbolic
        #[arg(long, default_value = "symbolic", allow_hyphen_values = true)]
        lambda: String,
        /// Family size
        #[arg(long)]
        n: usize,
        /// Substitutions var=integer; "all=1" sets every variable except lambda
        #[arg(long = "set", value_name = "VAR=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Generating series of a family up to an order
    Series {
        #[arg(long)]
        family: String,
        #[arg(long)]
        scheme: String,
        /// 1, -1, or symbolic
        #[arg(long, default_value = "symbolic", allow_hyphen_values = true)]
        lambda: String,
        /// Truncation order (series in t)
        #[arg(long)]
        order: usize,
        #[arg(long = "set", value_name = "VAR=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Verify registered identities
    Verify {
        /// Identity id (see list-identities)
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// Verify every registered identity
        #[arg(long)]
        all: bool,
        /// Series order or maximum family size (defaults per identity)
        #[arg(long)]
        order: Option<usize>,
        /// symbolic, modular, or predicate (defaults per identity)
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// List the registered identities
    ListIdentities {
        #[arg(long)]
        json: bool,
    },
}

/// Rendered output plus process exit code.
pub struct CmdResult {
    pub stdout: String,
    pub code: i32,
}

impl CmdResult {
    fn ok(stdout: String) -> Self {
        CmdResult { stdout, code: 0 }
    }
}

/// Desk-scale caps, overridable through `CYCLEFRAC_MAX_N`.
pub fn caps_from_env() -> Result<Caps, String> {
    match std::env::var("CYCLEFRAC_MAX_N") {
        Ok(raw) => {
            let max: usize = raw
                .parse()
                .map_err(|_| format!("CYCLEFRAC_MAX_N must be an integer, got \"{raw}\""))?;
            Ok(Caps::uniform(max))
        }
        Err(_) => Ok(Caps::default()),
    }
}

/// Run one parsed command. `Err` is a usage error (exit 2).
pub fn execute(cli: Cli) -> Result<CmdResult, String> {
    let caps = caps_from_env()?;
    match cli.command {
        Command::Stats { word, json, tsv } => cmd_stats(&word, json, tsv),
        Command::Enumerate {
            family,
            size,
            cycles,
            json,
        } => cmd_enumerate(&family, size, cycles, json, &caps),
        Command::Poly {
            family,
            scheme,
            lambda,
            n,
            set,
            json,
        } => cmd_poly(&family, &scheme, &lambda, n, &set, json, &caps),
        Command::Series {
            family,
            scheme,
            lambda,
            order,
            set,
            json,
        } => cmd_series(&family, &scheme, &lambda, order, &set, json, &caps),
        Command::Verify {
            id,
            all,
            order,
            mode,
            seed,
            json,
        } => cmd_verify(
            id.as_deref(),
            all,
            order,
            mode.as_deref(),
            seed,
            json,
            &caps,
        ),
        Command::ListIdentities { json } => cmd_list_identities(json),
    }
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

fn cmd_stats(word: &str, json: bool, tsv: bool) -> Result<CmdResult, String> {
    let p: Permutation = word.parse().map_err(|e| format!("{e}"))?;
    let profile = p.profile();
    let lemma_1_1 = p.check_lemma_1_1();
    let inv_formula = p.check_inv_formula();

    if json {
        #[derive(Serialize)]
        struct StatsOut<'a> {
            word: &'a [u32],
            n: usize,
            cycles: String,
            stats: &'a crate::permstat::StatProfile,
            lemma_1_1: bool,
            inv_formula: bool,
        }
        let out = StatsOut {
            word: p.word(),
            n: p.n(),
            cycles: p.cycles_string(),
            stats: &profile,
            lemma_1_1,
            inv_formula,
        };
        return Ok(CmdResult::ok(to_json_line(&out)?));
    }

    let mut lines = Vec::new();
    if tsv {
        lines.push(format!("n\t{}", p.n()));
        for (name, value) in profile.fields() {
            lines.push(format!("{name}\t{value}"));
        }
        lines.push(format!("lemma_1_1\t{lemma_1_1}"));
        lines.push(format!("inv_formula\t{inv_formula}"));
    } else {
        lines.push(format!("word:   {p}"));
        lines.push(format!("cycles: {}", p.cycles_string()));
        lines.push(format!("n:      {}", p.n()));
        for (name, value) in profile.fields() {
            lines.push(format!("{name}: {value}"));
        }
        lines.push(format!("lemma_1_1: {lemma_1_1}"));
        lines.push(format!("inv_formula: {inv_formula}"));
    }
    lines.push(String::new());
    Ok(CmdResult::ok(lines.join("\n")))
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

fn cmd_enumerate(
    family: &str,
    size: usize,
    cycles: bool,
    json: bool,
    caps: &Caps,
) -> Result<CmdResult, String> {
    let kind: FamilyKind = family.parse().map_err(|e| format!("{e}"))?;
    let fam = Family::new(kind, size).map_err(|e| format!("{e}"))?;
    let members = families::enumerate(fam, caps).map_err(|e| format!("{e}"))?;

    if json {
        let words: Vec<&[u32]> = members.iter().map(|p| p.word()).collect();
        let out = json!({
            "family": kind.to_string(),
            "size": size,
            "count": members.len(),
            "members": words,
        });
        return Ok(CmdResult::ok(format!("{out}\n")));
    }
    let mut lines: Vec<String> = members
        .iter()
        .map(|p| {
            if cycles {
                p.cycles_string()
            } else {
                p.to_string()
            }
        })
        .collect();
    lines.push(String::new());
    Ok(CmdResult::ok(lines.join("\n")))
}

// ---------------------------------------------------------------------------
// poly and series
// ---------------------------------------------------------------------------

/// `fam[i,j]` / `fam[i]` / `fam` in the canonical variable syntax.
pub fn parse_var(s: &str) -> Result<VarId, String> {
    let s = s.trim();
    if let Some(open) = s.find('[') {
        let name = &s[..open];
        let close = s
            .strip_suffix(']')
            .ok_or_else(|| format!("malformed variable \"{s}\""))?;
        let subs = &close[open + 1..];
        if name.is_empty() {
            return Err(format!("malformed variable \"{s}\""));
        }
        let parts: Vec<&str> = subs.split(',').collect();
        let parse_u32 = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("malformed subscript \"{t}\" in \"{s}\""))
        };
        match parts.as_slice() {
            [i] => Ok(VarId::indexed(name.to_string(), parse_u32(i)?)),
            [i, j] => Ok(VarId::indexed2(
                name.to_string(),
                parse_u32(i)?,
                parse_u32(j)?,
            )),
            _ => Err(format!("variable \"{s}\" has more than two subscripts")),
        }
    } else if s.is_empty() {
        Err("empty variable name".to_string())
    } else {
        Ok(VarId::plain(s.to_string()))
    }
}

fn parse_lambda(s: &str) -> Result<Option<i64>, String> {
    match s {
        "symbolic" => Ok(None),
        "1" | "+1" => Ok(Some(1)),
        "-1" => Ok(Some(-1)),
        other => Err(format!(
            "--lambda must be 1, -1, or symbolic, got \"{other}\""
        )),
    }
}

fn parse_substitution(set: &[String], lambda: &str) -> Result<Substitution, String> {
    let mut subst = Substitution::symbolic();
    if let Some(v) = parse_lambda(lambda)? {
        subst = subst.lambda(v);
    }
    for item in set {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| format!("--set expects VAR=VALUE, got \"{item}\""))?;
        if name.trim() == "all" {
            if value.trim() != "1" {
                return Err(format!("--set all only supports all=1, got \"{item}\""));
            }
            subst.all_one = true;
            continue;
        }
        let var = parse_var(name)?;
        if var.family() == "lambda" {
            return Err("set lambda with --lambda, not --set".to_string());
        }
        let coeff: BigInt = value
            .trim()
            .parse()
            .map_err(|_| format!("--set value must be an integer, got \"{item}\""))?;
        subst = subst.set(var, Polynomial::constant(coeff));
    }
    Ok(subst)
}

/// JSON form of a polynomial: canonically ordered terms with decimal-string
/// coefficients, `[{"coeff": "-2", "monomial": [["x1", 2]]}, ...]`.
pub fn polynomial_to_json(p: &Polynomial) -> Value {
    let mut terms: Vec<(&Monomial, &BigInt)> = p.terms().collect();
    terms.sort_by(|a, b| {
        a.0.total_degree()
            .cmp(&b.0.total_degree())
            .then_with(|| a.0.cmp(b.0))
    });
    Value::Array(
        terms
            .into_iter()
            .map(|(m, c)| {
                let vars: Vec<Value> = m.iter().map(|(v, e)| json!([v.to_string(), e])).collect();
                json!({ "coeff": c.to_string(), "monomial": vars })
            })
            .collect(),
    )
}

/// Inverse of [`polynomial_to_json`].
pub fn polynomial_from_json(v: &Value) -> Result<Polynomial, String> {
    let terms = v.as_array().ok_or("polynomial JSON must be an array")?;
    let mut out = Polynomial::zero();
    for term in terms {
        let coeff: BigInt = term["coeff"]
            .as_str()
            .ok_or("coeff must be a decimal string")?
            .parse()
            .map_err(|_| "coeff must be a decimal string".to_string())?;
        let mut m = Monomial::unit();
        for pair in term["monomial"]
            .as_array()
            .ok_or("monomial must be an array")?
        {
            let var = parse_var(pair[0].as_str().ok_or("variable must be a string")?)?;
            let exp = pair[1].as_u64().ok_or("exponent must be an integer")? as u32;
            m.push(var, exp);
        }
        out.add_term(m, coeff);
    }
    Ok(out)
}

fn cmd_poly(
    family: &str,
    scheme: &str,
    lambda: &str,
    n: usize,
    set: &[String],
    json: bool,
    caps: &Caps,
) -> Result<CmdResult, String> {
    let kind: FamilyKind = family.parse().map_err(|e| format!("{e}"))?;
    let scheme = WeightScheme::by_name(scheme).map_err(|e| format!("{e}"))?;
    let subst = parse_substitution(set, lambda)?;
    let fam = Family::new(kind, n).map_err(|e| format!("{e}"))?;
    let poly =
        families::generating_polynomial(fam, scheme, &subst, caps).map_err(|e| format!("{e}"))?;
    if json {
        let out = json!({
            "family": kind.to_string(),
            "scheme": scheme.name,
            "size": n,
            "polynomial": polynomial_to_json(&poly),
            "text": poly.to_string(),
        });
        return Ok(CmdResult::ok(format!("{out}\n")));
    }
    Ok(CmdResult::ok(format!("{poly}\n")))
}

fn cmd_series(
    family: &str,
    scheme: &str,
    lambda: &str,
    order: usize,
    set: &[String],
    json: bool,
    caps: &Caps,
) -> Result<CmdResult, String> {
    let kind: FamilyKind = family.parse().map_err(|e| format!("{e}"))?;
    let scheme = WeightScheme::by_name(scheme).map_err(|e| format!("{e}"))?;
    let subst = parse_substitution(set, lambda)?;
    let series = families::series_of_family(kind, scheme, &subst, order, caps)
        .map_err(|e| format!("{e}"))?;
    if json {
        let coeffs: Vec<Value> = series.coeffs().iter().map(polynomial_to_json).collect();
        let out = json!({
            "family": kind.to_string(),
            "scheme": scheme.name,
            "order": order,
            "coeffs": coeffs,
            "text": series.to_string(),
        });
        return Ok(CmdResult::ok(format!("{out}\n")));
    }
    Ok(CmdResult::ok(format!("{series}\n")))
}

// ---------------------------------------------------------------------------
// verify and list-identities
// ---------------------------------------------------------------------------

fn cmd_verify(
    id: Option<&str>,
    all: bool,
    order: Option<usize>,
    mode: Option<&str>,
    seed: u64,
    json: bool,
    caps: &Caps,
) -> Result<CmdResult, String> {
    let mode: Option<VerifyMode> = match mode {
        Some(m) => Some(m.parse()?),
        None => None,
    };
    let ids: Vec<&str> = match (id, all) {
        (Some(id), false) => {
            verifier::find(id).map_err(|e| format!("{e}"))?;
            vec![verifier::find(id).unwrap().id]
        }
        (None, true) => verifier::registry().iter().map(|c| c.id).collect(),
        _ => return Err("pass exactly one of --id or --all".to_string()),
    };

    let mut reports: Vec<VerifyReport> = Vec::new();
    for case_id in ids {
        // respect per-identity default modes when sweeping with --all
        let case_mode = match (mode, all) {
            (Some(m), false) => Some(m),
            (Some(m), true) => {
                let case = verifier::find(case_id).unwrap();
                match (m, &case.payload) {
                    (VerifyMode::Predicate, verifier::Payload::Series { .. })
                    | (VerifyMode::Symbolic, verifier::Payload::Predicate { .. })
                    | (VerifyMode::Modular, verifier::Payload::Predicate { .. }) => None,
                    _ => Some(m),
                }
            }
            (None, _) => None,
        };
        let report =
            verifier::verify(case_id, order, case_mode, seed, caps).map_err(|e| format!("{e}"))?;
        reports.push(report);
    }

    let pass = reports.iter().all(|r| r.pass);
    let stdout = if json {
        let out = json!({ "pass": pass, "reports": reports });
        format!("{out}\n")
    } else {
        let mut lines: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
        lines.push(format!("overall: {}", if pass { "PASS" } else { "FAIL" }));
        lines.push(String::new());
        lines.join("\n")
    };
    Ok(CmdResult {
        stdout,
        code: if pass { 0 } else { 1 },
    })
}

fn cmd_list_identities(json: bool) -> Result<CmdResult, String> {
    if json {
        let items: Vec<Value> = verifier::registry()
            .iter()
            .map(|c| {
                let kind = match c.payload {
                    verifier::Payload::Series { .. } => "series",
                    verifier::Payload::Predicate { .. } => "predicate",
                };
                json!({ "id": c.id, "kind": kind, "description": c.description })
            })
            .collect();
        return Ok(CmdResult::ok(format!("{}\n", Value::Array(items))));
    }
    let mut lines = Vec::new();
    for c in verifier::registry() {
        let kind = match c.payload {
            verifier::Payload::Series { .. } => "series",
            verifier::Payload::Predicate { .. } => "predicate",
        };
        lines.push(format!("{:<20} {:<9} {}", c.id, kind, c.description));
    }
    lines.push(String::new());
    Ok(CmdResult::ok(lines.join("\n")))
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value)
        .map(|s| format!("{s}\n"))
        .map_err(|e| format!("JSON encoding failed: {e}"))
}
