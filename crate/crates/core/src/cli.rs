//! Command-line front end.
//!
//! Indices are given inline as `[0,1,1]` or `0,1,1`, or through `--file`
//! holding the same value as a JSON document. Eventually periodic indices
//! are written as `{"pre":[..],"per":[..]}` or as a bare list meaning a
//! purely periodic index. Exit codes: 0 success, 1 domain error, 2 usage.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::extension;
use crate::hilbert;
use crate::index::{self, FiniteIndex};
use crate::monoid;
use crate::nomid::{self, PositiveSequence};
use crate::periodic::EventuallyPeriodicIndex;
use crate::ukp::{self, UkpInstance};

/// Default verification bound for `hilbert`.
pub const DEFAULT_HILBERT_BOUND: u64 = 10;

#[derive(Debug, Parser)]
#[command(name = "binomid", version, about = "Lex-minimal extensions of binomid indices")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Read the main input from a JSON file instead of the command line.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check δ(i,j) ≥ 0 and list every violation.
    Validate { index: Option<String> },
    /// Prefix of the lex-minimal extension.
    Extend {
        index: Option<String>,
        /// Output length; defaults to the preperiod bound plus two periods.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: Option<u64>,
    },
    /// Minimal period of the extension.
    Period { index: Option<String> },
    /// Canonical eventually periodic form of the extension.
    Canon { index: Option<String> },
    /// Knapsack multiplicities realizing S_k of the extension.
    Witness {
        index: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Solve an unbounded knapsack instance.
    Ukp {
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        cap: u64,
    },
    /// Compare φ with the extension of its increment index.
    Bridge {
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: u64,
    },
    /// f-nomid coefficient [n k]_f.
    Nomid {
        seq: Option<String>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Prime exponent indices of a positive sequence.
    Factor { seq: Option<String> },
    /// Decide atomicity of the extension.
    Atomic { index: Option<String> },
    /// Split the extension into atoms.
    Decompose { index: Option<String> },
    /// Hilbert basis of the monoid of binomid indices of length k.
    Hilbert {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_HILBERT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Span membership of an eventually periodic index.
    Span {
        #[arg(long)]
        target: Option<String>,
        /// One generator per flag, or a JSON list of generators.
        #[arg(long, num_args = 1..)]
        gens: Vec<String>,
    },
    /// Split assignments π on (k, l(k)].
    Path { index: Option<String> },
    /// Atoms with prefixes of length k and entries up to a bound.
    Atoms {
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Report {
    json: Value,
    text: String,
    code: u8,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, code: 0 }
    }
}

type Step<T> = std::result::Result<T, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => usage_outcome(json_requested, rendered),
            };
        }
    };
    let json = cli.json;
    match dispatch(&cli) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if json {
                format!("{}\n", r.json)
            } else {
                r.text
            },
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => usage_outcome(json, format!("error: {msg}\n")),
        Err(Failure::Domain(err)) => {
            if json {
                let mut obj = json!({"kind": err.kind(), "message": err.to_string()});
                if let Error::NotBinomid(v) = &err {
                    obj["violations"] = json!(v);
                }
                Outcome {
                    code: 1,
                    stdout: format!("{}\n", json!({ "error": obj })),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: format!("error: {err}\n"),
                }
            }
        }
    }
}

fn usage_outcome(json: bool, message: String) -> Outcome {
    if json {
        let msg = message.trim_end().to_string();
        Outcome {
            code: 2,
            stdout: format!("{}\n", json!({"error": {"kind": "usage", "message": msg}})),
            stderr: String::new(),
        }
    } else {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: message,
        }
    }
}

fn dispatch(cli: &Cli) -> Step<Report> {
    let input = Input { file: cli.file.as_ref() };
    match &cli.command {
        Command::Validate { index } => validate(input.index(index)?),
        Command::Extend { index, horizon } => {
            let e = input.index(index)?;
            let h = match horizon {
                Some(h) => to_usize(*h, "horizon")?,
                None => extension::certification_horizon(&e)?,
            };
            let ext = extension::extend(&e, h)?;
            Ok(Report::ok(json!({ "index": ext }), format!("index: {ext}\n")))
        }
        Command::Period { index } => {
            let e = input.index(index)?;
            index::require_binomid(&e)?;
            let p = extension::minimal_period(&e)?;
            Ok(Report::ok(json!({ "minimal_period": p }), format!("minimal period: {p}\n")))
        }
        Command::Canon { index } => {
            let e = input.index(index)?;
            let c = extension::canonical_form(&e)?;
            let text = aligned(&[
                ("canonical", c.to_string()),
                ("preperiod", c.preperiod().len().to_string()),
                ("period", c.period().len().to_string()),
            ]);
            Ok(Report::ok(json!(c), text))
        }
        Command::Witness { index, k } => {
            let e = input.index(index)?;
            let w = extension::witness(&e, to_usize(*k, "k")?)?;
            let (weight, value) = w.evaluate(&e).expect("witness matches the prefix length");
            let text = aligned(&[
                ("target", w.target.to_string()),
                ("counts", list(&w.counts)),
                ("weight", weight.to_string()),
                ("value", value.to_string()),
            ]);
            Ok(Report::ok(json!(w), text))
        }
        Command::Ukp { values, weights, cap } => {
            let inst = input.instance(values, weights)?;
            let (_, sol) = ukp::solve(&inst, to_usize(*cap, "cap")?)?;
            let text = aligned(&[
                ("capacity", sol.capacity.to_string()),
                ("value", sol.value.to_string()),
                ("counts", list(&sol.counts)),
            ]);
            Ok(Report::ok(json!(sol), text))
        }
        Command::Bridge { values, weights, horizon } => {
            let inst = input.instance(values, weights)?;
            let h = to_usize(*horizon, "horizon")?;
            let e = ukp::index_from_ukp(&inst)?;
            let matches = ukp::phi_matches_extension(&inst, h)?;
            let text = aligned(&[
                ("index", e.to_string()),
                ("horizon", h.to_string()),
                ("matches", matches.to_string()),
            ]);
            Ok(Report::ok(json!({"index": e, "horizon": h, "matches": matches}), text))
        }
        Command::Nomid { seq, n, k } => {
            let f: PositiveSequence = input.value(seq, "sequence")?;
            let c = nomid::nomid_coefficient(&f, to_usize(*n, "n")?, to_usize(*k, "k")?)?;
            let integer = nomid::is_integer(&c);
            let value = c.to_string();
            let text = aligned(&[("value", value.clone()), ("integer", integer.to_string())]);
            Ok(Report::ok(json!({"n": n, "k": k, "value": value, "integer": integer}), text))
        }
        Command::Factor { seq } => {
            let f: PositiveSequence = input.value(seq, "sequence")?;
            let map = nomid::prime_indices(&f);
            let binomid = nomid::is_binomid_sequence(&f);
            let mut rows: Vec<(&str, String)> = vec![("binomid", binomid.to_string())];
            let keys: Vec<String> = map.0.keys().map(u64::to_string).collect();
            for (key, e) in keys.iter().zip(map.0.values()) {
                rows.push((key, e.to_string()));
            }
            Ok(Report::ok(json!({"primes": map, "binomid": binomid}), aligned(&rows)))
        }
        Command::Atomic { index } => {
            let e = input.index(index)?;
            let r = monoid::is_atomic(&e)?;
            let mut rows = vec![("atomic", r.atomic.to_string())];
            if let Some((a, b)) = &r.witness {
                rows.push(("witness", format!("{a} + {b}")));
            }
            Ok(Report::ok(json!(r), aligned(&rows)))
        }
        Command::Decompose { index } => {
            let e = input.index(index)?;
            let atoms = monoid::atomic_decomposition(&e)?;
            let mut text = String::new();
            for a in &atoms {
                let _ = writeln!(text, "{a}");
            }
            Ok(Report::ok(json!({ "atoms": atoms }), text))
        }
        Command::Hilbert { k, bound } => {
            let b = hilbert::hilbert_basis(to_usize(*k, "k")?, *bound)?;
            let mut text = aligned(&[
                ("k", b.k.to_string()),
                ("verified bound", b.verified_bound.to_string()),
            ]);
            for g in &b.generators {
                let _ = writeln!(text, "{g}");
            }
            Ok(Report::ok(json!(b), text))
        }
        Command::Span { target, gens } => {
            let (target, gens) = input.span(target, gens)?;
            let coeffs = monoid::span_coefficients(&target, &gens)?;
            let mut rows = vec![("in span", coeffs.is_some().to_string())];
            if let Some(c) = &coeffs {
                rows.push(("coefficients", list(c)));
            }
            Ok(Report::ok(
                json!({"in_span": coeffs.is_some(), "coefficients": coeffs}),
                aligned(&rows),
            ))
        }
        Command::Path { index } => {
            let e = input.index(index)?;
            let w = monoid::path_witness(&e)?;
            let mut text = aligned(&[("k", w.k.to_string()), ("l(k)", w.l.to_string())]);
            for (i, p) in &w.assignments {
                let _ = writeln!(text, "{i:>6} -> {p}");
            }
            Ok(Report::ok(json!(w), text))
        }
        Command::Atoms { k, bound } => {
            let cat = monoid::enumerate_atoms(to_usize(*k, "k")?, *bound)?;
            let mut text = aligned(&[
                ("k", cat.k.to_string()),
                ("entry bound", cat.entry_bound.to_string()),
                ("atoms", cat.atoms.len().to_string()),
            ]);
            for (p, a) in cat.prefixes.iter().zip(&cat.atoms) {
                let _ = writeln!(text, "{p}  {a}");
            }
            Ok(Report::ok(json!(cat), text))
        }
    }
}

fn validate(e: FiniteIndex) -> Step<Report> {
    let v = index::validate_binomid(&e);
    let ok = v.is_ok();
    let mut text = format!("binomid: {}\n", if ok { "yes" } else { "no" });
    if !ok {
        let _ = writeln!(text, "{:>6} {:>6} {:>8}", "i", "j", "delta");
        for x in &v.violations {
            let _ = writeln!(text, "{:>6} {:>6} {:>8}", x.i, x.j, x.value);
        }
    }
    Ok(Report {
        json: json!({"binomid": ok, "violations": v.violations}),
        text,
        code: if ok { 0 } else { 1 },
    })
}

struct Input<'a> {
    file: Option<&'a PathBuf>,
}

impl Input<'_> {
    fn read_file(&self) -> Step<Option<String>> {
        match self.file {
            None => Ok(None),
            Some(p) => std::fs::read_to_string(p)
                .map(Some)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        }
    }

    /// The positional value, or the whole `--file` document.
    fn value<T: DeserializeOwned>(&self, inline: &Option<String>, what: &str) -> Step<T> {
        match (inline, self.read_file()?) {
            (Some(_), Some(_)) => Err(Failure::Usage(format!("give the {what} inline or with --file, not both"))),
            (Some(s), None) => parse_inline(s, what),
            (None, Some(doc)) => parse_json(&doc, what),
            (None, None) => Err(Failure::Usage(format!("missing {what}"))),
        }
    }

    fn index(&self, inline: &Option<String>) -> Step<FiniteIndex> {
        self.value(inline, "index")
    }

    fn instance(&self, values: &Option<String>, weights: &Option<String>) -> Step<UkpInstance> {
        match (values, weights, self.read_file()?) {
            (Some(v), Some(w), None) => {
                UkpInstance::new(parse_inline(v, "values")?, parse_inline(w, "weights")?).map_err(Failure::from)
            }
            (None, None, Some(doc)) => parse_json(&doc, "instance"),
            _ => Err(Failure::Usage(
                "give both --values and --weights, or an instance with --file".into(),
            )),
        }
    }

    fn span(&self, target: &Option<String>, gens: &[String]) -> Step<(EventuallyPeriodicIndex, Vec<EventuallyPeriodicIndex>)> {
        #[derive(Deserialize)]
        struct Doc {
            target: PeriodicArg,
            generators: Vec<PeriodicArg>,
        }
        if let Some(doc) = self.read_file()? {
            if target.is_some() || !gens.is_empty() {
                return Err(Failure::Usage("give the span problem inline or with --file, not both".into()));
            }
            let d: Doc = parse_json(&doc, "span problem")?;
            let gens = d.generators.into_iter().map(PeriodicArg::build).collect::<Step<_>>()?;
            return Ok((d.target.build()?, gens));
        }
        let target = target
            .as_ref()
            .ok_or_else(|| Failure::Usage("missing --target".into()))?;
        let target = parse_json::<PeriodicArg>(target, "target")?.build()?;
        let mut out = Vec::new();
        for g in gens {
            match serde_json::from_str::<Vec<PeriodicArg>>(g) {
                Ok(list) if g.trim_start().starts_with("[{") || g.trim_start().starts_with("[[") => {
                    for a in list {
                        out.push(a.build()?);
                    }
                }
                _ => out.push(parse_json::<PeriodicArg>(g, "generator")?.build()?),
            }
        }
        if out.is_empty() {
            return Err(Failure::Usage("missing --gens".into()));
        }
        Ok((target, out))
    }
}

/// `{"pre":[..],"per":[..]}` or a bare list for `(list)^∞`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PeriodicArg {
    Full(EventuallyPeriodicIndex),
    Periodic(Vec<u64>),
}

impl PeriodicArg {
    fn build(self) -> Step<EventuallyPeriodicIndex> {
        match self {
            PeriodicArg::Full(x) => Ok(x),
            PeriodicArg::Periodic(per) => Ok(EventuallyPeriodicIndex::periodic(per)?),
        }
    }
}

fn parse_json<T: DeserializeOwned>(s: &str, what: &str) -> Step<T> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

/// Accepts `[1,2,3]`, `1,2,3` or `1 2 3`.
fn parse_inline<T: DeserializeOwned>(s: &str, what: &str) -> Step<T> {
    let t = s.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return parse_json(t, what);
    }
    let items: Vec<&str> = t
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .collect();
    parse_json(&format!("[{}]", items.join(",")), what)
}

fn to_usize(v: u64, what: &str) -> Step<usize> {
    usize::try_from(v).map_err(|_| Failure::Usage(format!("{what} is too large")))
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{:<width$}  {v}", format!("{k}:"), width = width + 1);
    }
    out
}
