//! Command-line front end.
//!
//! Every command reads its parameters from `--key value` flags, an optional
//! flat `key = value` config file (`--config`), and built-in defaults, in that
//! order of precedence. Results go to stdout and, with `--output`, to a file.
//! Exit codes: 0 when every check passes, 1 when one fails or a computation
//! errors, 2 on usage errors.

mod commands;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::{Arg, ArgAction, Command};

use crate::error::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub(crate) struct Key {
    pub name: &'static str,
    pub help: &'static str,
    pub default: Option<&'static str>,
}

const fn key(name: &'static str, help: &'static str, default: Option<&'static str>) -> Key {
    Key { name, help, default }
}

pub(crate) struct Spec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
}

const SEED: Key = key("seed", "RNG seed", Some("0"));

pub(crate) const COMMANDS: &[Spec] = &[
    Spec {
        name: "group",
        about: "Build a finite group and print its summary or full table",
        keys: &[key("group", "group descriptor, e.g. dihedral:6", None), key("table", "emit the multiplication table", Some("false"))],
    },
    Spec {
        name: "norm",
        about: "Estimate the L_p operator norm of a multiplier",
        keys: &[
            key("group", "group descriptor", None),
            key("symbol", "symbol family (random:S, gaussian:W, indicator:SET, constant:C) or file:PATH.csv", None),
            key("arity", "number of arguments", Some("1")),
            key("p", "input exponents, comma separated; one value is repeated", Some("2")),
            key("restarts", "optimiser restarts", Some("16")),
            key("iterations", "iterations per restart", Some("300")),
            SEED,
        ],
    },
    Spec {
        name: "identity-check",
        about: "Consummation, translation and nesting identities on random inputs",
        keys: &[
            key("group", "group descriptor", None),
            key("identity", "consummation, translation, nested or all", Some("all")),
            key("arity", "symbol arity", Some("2")),
            key("trials", "random trials per identity", Some("20")),
            SEED,
        ],
    },
    Spec {
        name: "restrict",
        about: "Restriction to a subgroup with witness transport",
        keys: &[
            key("group", "ambient group descriptor", None),
            key("sub", "subgroup as a subset spec, e.g. indices:0,2", None),
            key("symbol", "symbol on the ambient group", Some("random:0")),
            key("p", "input exponents", None),
            key("restarts", "optimiser restarts", Some("200")),
            SEED,
        ],
    },
    Spec {
        name: "periodize",
        about: "Periodization by a finite normal subgroup",
        keys: &[
            key("group", "group descriptor", None),
            key("normal", "normal subgroup as a subset spec", None),
            key("symbol", "symbol on the quotient", Some("random:0")),
            key("p", "input exponents; the arity is their count", Some("4")),
            key("trials", "random trials", Some("20")),
            SEED,
        ],
    },
    Spec {
        name: "lattice-maps",
        about: "Contraction residuals and pairing deviations of the lattice maps on a cyclic group",
        keys: &[
            key("group", "cyclic group descriptor", None),
            key("step", "lattice step(s); several give a refining family", None),
            key("symbol", "symbol family", Some("gaussian:6")),
            key("p", "input exponents; the arity is their count", Some("3,6")),
            key("trials", "random trials", Some("5")),
            SEED,
        ],
    },
    Spec {
        name: "delta-exact",
        about: "Exact delta_F(V) and its Gram matrix on a finite group",
        keys: &[key("group", "group descriptor", None), key("F", "subset spec for F", None), key("V", "subset spec for V", None)],
    },
    Spec {
        name: "delta-mc",
        about: "Monte Carlo delta on a finite group (group, F, V) or on sl:2 (model, F, W or rho)",
        keys: &[
            key("group", "finite group descriptor", Some("")),
            key("model", "Lie model, e.g. sl:2", Some("")),
            key("F", "subset spec; matrices a,b,c,d;...; or random:K with rho", None),
            key("V", "subset spec for V (finite mode)", Some("")),
            key("W", "ball:r or tube:eps,R (Lie mode)", Some("")),
            key("rho", "adjoint-ball radius for random F", Some("")),
            key("eps", "tube widths for random F, decreasing", Some("0.1,0.05,0.025")),
            key("R", "tube radius for random F", Some("0.5")),
            key("samples", "samples per estimate", Some("100000")),
            key("batch", "samples per batch; must divide samples", Some("")),
            SEED,
        ],
    },
    Spec {
        name: "key-lemma",
        about: "Volume ratios of nilpotent-cone tubes in sl:2",
        keys: &[
            key("rho", "dilation", Some("2")),
            key("R", "tube radius", Some("0.5")),
            key("eps", "tube widths, decreasing", Some("0.1,0.05,0.025")),
            key("samples", "samples per volume", Some("1000000")),
            key("batch", "samples per batch; must divide samples", Some("")),
            SEED,
        ],
    },
    Spec {
        name: "orbit-dim",
        about: "Nilpotent orbit dimension of an element, or the maximum over the model",
        keys: &[
            key("model", "Lie model, e.g. sl:3", None),
            key("x", "row-major matrix entries of a nilpotent element", Some("")),
            key("samples", "random nilpotents in the sweep", Some("50")),
            SEED,
        ],
    },
    Spec {
        name: "lattice-count",
        about: "Points of SL(2,Z) in adjoint-norm balls",
        keys: &[key("rho", "radii, comma separated", Some("100,250,500,1000,2500"))],
    },
    Spec {
        name: "density",
        about: "Haar density in exponential coordinates",
        keys: &[
            key("model", "Lie model", None),
            key("x", "coordinates in the model basis", Some("")),
            key("points", "random points when x is absent", Some("100")),
            key("radius", "bound on the operator norm of ad_x for random points", Some("2")),
            key("terms", "series terms", Some("40")),
            SEED,
        ],
    },
    Spec {
        name: "transference",
        about: "Compressed Schur pairing against the Fourier pairing on Z_L",
        keys: &[
            key("L", "cyclic group order", Some("256")),
            key("alpha", "Følner radii, comma separated", Some("8,16,32")),
            key("p1", "first exponent", Some("3")),
            key("p2", "second exponent", Some("3")),
            key("support", "inputs supported in -support..support", Some("4")),
            key("symbol", "bilinear symbol family", Some("random:13")),
            SEED,
        ],
    },
];

pub(crate) fn spec(name: &str) -> Option<&'static Spec> {
    COMMANDS.iter().find(|s| s.name == name)
}

fn cli() -> Command {
    let mut cmd = Command::new("ncmult")
        .about("Multilinear Fourier multipliers on finite groups and Lie-group neighbourhood geometry")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for s in COMMANDS {
        let mut sub = Command::new(s.name)
            .about(s.about)
            .arg(Arg::new("config").long("config").value_name("FILE").help("flat key = value file"))
            .arg(Arg::new("output").long("output").value_name("PATH").help("also write results here"));
        for k in s.keys {
            let help = match k.default {
                Some("") | None => k.help.to_string(),
                Some(d) => format!("{} [default: {d}]", k.help),
            };
            sub = sub.arg(
                Arg::new(k.name)
                    .long(k.name)
                    .value_name("VALUE")
                    .help(help)
                    .allow_hyphen_values(true)
                    .action(ArgAction::Set),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd.subcommand(
        Command::new("suite")
            .about("Run an acceptance bundle with pinned seeds")
            .arg(Arg::new("name").required(true).value_parser(["lemmas", "theoremA", "theoremB", "all"]))
            .arg(Arg::new("output").long("output").value_name("PATH")),
    )
}

/// Resolved parameters of one command.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub command: String,
    pub values: BTreeMap<String, String>,
}

impl Params {
    pub fn str(&self, k: &str) -> Result<&str> {
        self.values
            .get(k)
            .map(String::as_str)
            .ok_or_else(|| Error::Invalid(format!("missing required key `{k}`")))
    }

    /// `None` for keys resolved to the empty string.
    pub fn opt(&self, k: &str) -> Option<&str> {
        self.values.get(k).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn parse<T: std::str::FromStr>(&self, k: &str) -> Result<T> {
        let v = self.str(k)?;
        v.trim().parse().map_err(|_| Error::Invalid(format!("cannot parse `{k}` = `{v}`")))
    }

    pub fn f64(&self, k: &str) -> Result<f64> {
        self.parse(k)
    }

    pub fn usize(&self, k: &str) -> Result<usize> {
        self.parse(k)
    }

    pub fn u64(&self, k: &str) -> Result<u64> {
        self.parse(k)
    }

    pub fn bool(&self, k: &str) -> Result<bool> {
        self.parse(k)
    }

    pub fn f64_list(&self, k: &str) -> Result<Vec<f64>> {
        parse_list(self.str(k)?, k)
    }

    pub fn usize_list(&self, k: &str) -> Result<Vec<usize>> {
        parse_list(self.str(k)?, k)
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, k: &str) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Error::Invalid(format!("cannot parse `{k}` entry `{s}`"))))
        .collect()
}

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("config line {}: expected key = value", n + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Defaults, then the config file, then flags. Unknown config keys and missing
/// required keys are errors.
pub(crate) fn resolve(
    spec: &Spec,
    config: Option<&BTreeMap<String, String>>,
    flags: &BTreeMap<String, String>,
) -> Result<Params> {
    let mut values = BTreeMap::new();
    for k in spec.keys {
        if let Some(d) = k.default {
            values.insert(k.name.to_string(), d.to_string());
        }
    }
    if let Some(cfg) = config {
        for (k, v) in cfg {
            match k.as_str() {
                "command" if v == spec.name => {}
                "command" => return Err(Error::Invalid(format!("config is for `{v}`, not `{}`", spec.name))),
                "output" => {}
                _ if spec.keys.iter().any(|s| s.name == k) => {
                    values.insert(k.clone(), v.clone());
                }
                _ => return Err(Error::Invalid(format!("unknown key `{k}` for `{}`", spec.name))),
            }
        }
    }
    values.extend(flags.iter().map(|(k, v)| (k.clone(), v.clone())));
    for k in spec.keys {
        if !values.contains_key(k.name) {
            return Err(Error::Invalid(format!("`{}` needs --{}", spec.name, k.name)));
        }
    }
    Ok(Params { command: spec.name.to_string(), values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Result of one command: the text written to stdout and `--output`.
pub struct Outcome {
    pub body: String,
    pub format: Format,
    pub pass: bool,
    /// Already printed while running.
    pub streamed: bool,
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Descriptor(_) | Error::Invalid(_) | Error::Arity { .. })
}

fn write_output(path: &str, outcome: &Outcome, params: Option<&Params>) -> Result<()> {
    fs::write(path, &outcome.body)?;
    if let (Format::Csv, Some(p)) = (outcome.format, params) {
        let meta = serde_json::json!({ "command": p.command, "params": p.values });
        fs::write(format!("{path}.meta.json"), format!("{meta}\n"))?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let output = sub.get_one::<String>("output").cloned();

    if name == "suite" {
        let which = sub.get_one::<String>("name").expect("required");
        let outcome = match commands::suite(which) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        return finish(outcome, output.as_deref(), None);
    }

    let spec = spec(name).expect("subcommands mirror the table");
    let config = match sub.get_one::<String>("config").map(|p| fs::read_to_string(p).map_err(Error::from).and_then(|t| parse_config(&t))) {
        Some(Ok(c)) => Some(c),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        None => None,
    };
    let flags: BTreeMap<String, String> = spec
        .keys
        .iter()
        .filter_map(|k| sub.get_one::<String>(k.name).map(|v| (k.name.to_string(), v.clone())))
        .collect();
    let params = match resolve(spec, config.as_ref(), &flags) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("see `ncmult {name} --help`");
            return EXIT_USAGE;
        }
    };
    let output = output.or_else(|| config.as_ref().and_then(|c| c.get("output").cloned()));
    log::info!("{} {:?}", params.command, params.values);
    match commands::dispatch(&params) {
        Ok(outcome) => finish(outcome, output.as_deref(), Some(&params)),
        Err(e) if usage_error(&e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn finish(outcome: Outcome, output: Option<&str>, params: Option<&Params>) -> i32 {
    if !outcome.streamed {
        print!("{}", outcome.body);
    }
    if let Some(path) = output {
        if let Some(dir) = Path::new(path).parent().filter(|d| !d.as_os_str().is_empty()) {
            if let Err(e) = fs::create_dir_all(dir) {
                eprintln!("error: {e}");
                return EXIT_FAIL;
            }
        }
        if let Err(e) = write_output(path, &outcome, params) {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    }
    if outcome.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_table_builds() {
        cli().debug_assert();
    }

    #[test]
    fn precedence_and_unknown_keys() {
        let s = spec("key-lemma").unwrap();
        let cfg = parse_config("# tube\nrho = 4\nsamples=20000\n").unwrap();
        let flags = BTreeMap::from([("rho".to_string(), "3".to_string())]);
        let p = resolve(s, Some(&cfg), &flags).unwrap();
        assert_eq!(p.str("rho").unwrap(), "3");
        assert_eq!(p.usize("samples").unwrap(), 20_000);
        assert_eq!(p.str("R").unwrap(), "0.5");
        let bad = parse_config("radius = 1").unwrap();
        assert!(resolve(s, Some(&bad), &BTreeMap::new()).is_err());
        assert!(parse_config("no equals sign").is_err());
        assert!(resolve(spec("delta-exact").unwrap(), None, &BTreeMap::new()).is_err());
    }
}
