use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bracketdim::resolving::{
    check_universal, construct_favorites, dim_lower_bound, dim_upper_bound,
    estimate_resolution_probability, is_resolving, metric_dimension_exact,
    necessary_condition_violations, resolving_number_bounds, resolving_number_by_subsets,
    resolving_number_exact, score_vector, Decoder,
};
use bracketdim::scoring::{
    compute_probabilities, compute_probabilities_exhaustive, constant_scoring,
    distinct_subset_sum_scoring, random_scoring,
};
use bracketdim::tournament::{enumerate_shapes, random_tournament, standard_tournament};
use bracketdim::{Bracket, BracketSpace, Limits, Rational, ScoringSystem, Tournament};

#[derive(Parser)]
#[command(name = "bracketdim", version, about = "Resolving sets of tournament brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel scans; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_brackets: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_subsets: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_search: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Check a tournament, and optionally a bracket and scoring system for it.
    Validate {
        #[command(flatten)]
        t: TournamentArg,
        #[arg(long)]
        bracket: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Generate tournaments.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Lower and upper bounds on the metric dimension.
    Dim {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        /// Also find the exact dimension for each scoring system.
        #[arg(long)]
        exact: bool,
    },
    /// A resolving set valid for every scoring system.
    Construct {
        #[command(flatten)]
        t: TournamentArg,
        /// One bracket per player, each forcing that player to win.
        #[arg(long)]
        favorites: bool,
        /// Base bracket for --favorites (default: the first bracket).
        #[arg(long)]
        bracket: Option<PathBuf>,
    },
    /// Test whether a set of brackets resolves.
    Check {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        set: PathBuf,
        /// Include every bracket's score vector (small tournaments only).
        #[arg(long)]
        table: bool,
    },
    /// Bounds on the resolving number.
    Resnum {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        exact: bool,
        /// Cross-check the exact value by scanning subsets.
        #[arg(long, requires = "exact")]
        subsets: bool,
    },
    /// Win probabilities of a uniformly random bracket.
    Probs {
        #[command(flatten)]
        t: TournamentArg,
        /// Count over all brackets instead of using path products.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Recover a bracket from its scores against a set.
    Decode {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        scores: PathBuf,
    },
    /// Monte Carlo estimate of how often a set pins down a random bracket.
    Estimate {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scores of a bracket against each member of a set.
    Score {
        #[command(flatten)]
        t: TournamentArg,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        bracket: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete binary tournament.
    Standard {
        #[arg(long)]
        n: usize,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every tournament shape up to a player count.
    Shapes {
        #[arg(long)]
        max_players: usize,
    },
}

#[derive(Args)]
struct TournamentArg {
    #[arg(long)]
    tournament: PathBuf,
}

#[derive(Args)]
struct SigmaArg {
    /// A scoring file, `dss`, `const`, or `rand:SEED:K` for K random systems.
    #[arg(long, default_value = "dss")]
    sigma: String,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<bracketdim::Error> for Failure {
    fn from(e: bracketdim::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// A report in both output forms.
struct Report {
    json: Value,
    header: &'static str,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.json).unwrap()),
            Format::Tsv => {
                let mut out = format!("{}\n", self.header);
                for row in &self.rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Outcome<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_tournament(arg: &TournamentArg) -> Outcome<Tournament> {
    Ok(Tournament::parse(&read(&arg.tournament)?)?)
}

fn load_bracket(t: &Tournament, path: &Path) -> Outcome<Bracket> {
    Ok(Bracket::from_json(t, &read_json(path)?)?)
}

fn load_set(t: &Tournament, path: &Path) -> Outcome<Vec<Bracket>> {
    let value = read_json(path)?;
    let items = value
        .get("set")
        .unwrap_or(&value)
        .as_array()
        .ok_or_else(|| Failure::Domain(format!("{}: expected an array of brackets", path.display())))?;
    Ok(items.iter().map(|v| Bracket::from_json(t, v)).collect::<Result<_, _>>()?)
}

fn load_scores(path: &Path) -> Outcome<Vec<Rational>> {
    let value = read_json(path)?;
    let items = value
        .get("scores")
        .unwrap_or(&value)
        .as_array()
        .ok_or_else(|| Failure::Domain(format!("{}: expected an array of scores", path.display())))?
        .clone();
    items
        .iter()
        .map(|v| {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => return Err(Failure::Domain(format!("bad score {other}"))),
            };
            text.parse::<Rational>().map_err(|e| Failure::Domain(e.to_string()))
        })
        .collect()
}

fn sigmas(t: &Tournament, spec: &str) -> Outcome<Vec<(String, ScoringSystem)>> {
    match spec {
        "dss" => Ok(vec![("dss".into(), distinct_subset_sum_scoring(t))]),
        "const" => Ok(vec![("const".into(), constant_scoring(t, Rational::one())?)]),
        _ if spec.starts_with("rand:") => {
            let parts: Vec<&str> = spec.split(':').collect();
            let parsed = match parts.as_slice() {
                [_, seed, k] => seed.parse::<u64>().ok().zip(k.parse::<u64>().ok()),
                _ => None,
            };
            let (seed, k) = parsed
                .filter(|&(_, k)| k > 0)
                .ok_or_else(|| Failure::Usage(format!("--sigma {spec:?}: expected rand:SEED:K with K ≥ 1")))?;
            Ok((0..k)
                .map(|i| (format!("rand:{}", seed + i), random_scoring(t, seed + i)))
                .collect())
        }
        path => {
            let s = ScoringSystem::from_json(t, &read_json(Path::new(path))?)?;
            Ok(vec![(path.to_string(), s)])
        }
    }
}

fn one_sigma(t: &Tournament, spec: &str) -> Outcome<(String, ScoringSystem)> {
    let mut all = sigmas(t, spec)?;
    if all.len() != 1 {
        return Err(Failure::Usage("this command takes exactly one scoring system".into()));
    }
    Ok(all.remove(0))
}

fn brackets_json(t: &Tournament, set: &[Bracket]) -> Value {
    Value::Array(set.iter().map(|b| b.to_json(t)).collect())
}

fn compact(v: &Value) -> String {
    v.to_string()
}

fn summary(t: &Tournament) -> Value {
    json!({
        "players": t.player_count(),
        "matches": t.matches().len(),
        "brackets": t.bracket_count().to_string(),
        "shape": t.shape_id().0,
        "standard": t.is_standard(),
    })
}

fn run(cli: &Cli, limits: &Limits) -> Outcome<Report> {
    match &cli.command {
        Command::Validate { t, bracket, sigma } => {
            let t = load_tournament(t)?;
            if let Some(p) = bracket {
                load_bracket(&t, p)?;
            }
            if let Some(s) = sigma {
                sigmas(&t, s)?;
            }
            let mut json = summary(&t);
            json["valid"] = json!(true);
            let row = vec![
                t.player_count().to_string(),
                t.matches().len().to_string(),
                t.bracket_count().to_string(),
                t.shape_id().0,
                t.is_standard().to_string(),
            ];
            Ok(Report { json, header: "players\tmatches\tbrackets\tshape\tstandard", rows: vec![row] })
        }
        Command::Gen { kind } => {
            let ts = match kind {
                GenKind::Standard { n } => vec![standard_tournament(*n)?],
                GenKind::Random { n, seed } => vec![random_tournament(*n, *seed)?],
                GenKind::Shapes { max_players } => enumerate_shapes(*max_players)?,
            };
            let rows = ts
                .iter()
                .map(|t| {
                    vec![
                        t.player_count().to_string(),
                        t.bracket_count().to_string(),
                        t.shape_id().0,
                        t.serialize(),
                    ]
                })
                .collect();
            let json = match kind {
                GenKind::Shapes { .. } => Value::Array(ts.iter().map(Tournament::to_json).collect()),
                _ => ts[0].to_json(),
            };
            Ok(Report { json, header: "players\tbrackets\tshape\ttournament", rows })
        }
        Command::Dim { t, sigma, exact } => {
            let t = load_tournament(t)?;
            let lower = dim_lower_bound(&t)?;
            let bounds = dim_upper_bound(&t);
            let systems = sigmas(&t, &sigma.sigma)?;
            let mut json = bounds.to_json(&t);
            let mut rows = Vec::new();
            if *exact {
                let mut found = Vec::new();
                for (name, s) in systems {
                    let e = metric_dimension_exact(&t, &s, limits)?;
                    rows.push(vec![name.clone(), lower.to_string(), bounds.upper.to_string(), e.dim.to_string()]);
                    found.push(json!({"sigma": name, "dim": e.dim, "witness": brackets_json(&t, &e.witness)}));
                }
                json["exact"] = Value::Array(found);
            } else {
                json.as_object_mut().unwrap().remove("exact");
                rows.push(vec!["-".into(), lower.to_string(), bounds.upper.to_string(), "-".into()]);
            }
            Ok(Report { json, header: "sigma\tlower\tupper\texact", rows })
        }
        Command::Construct { t, favorites, bracket } => {
            let t = load_tournament(t)?;
            let (set, via) = if *favorites {
                let base = match bracket {
                    Some(p) => load_bracket(&t, p)?,
                    None => BracketSpace::new(&t, u64::MAX)?.bracket(0),
                };
                (construct_favorites(&t, &base)?, None)
            } else {
                let b = dim_upper_bound(&t);
                (b.construction, b.via.map(|u| t.label(u).to_string()))
            };
            let rows = set.iter().enumerate().map(|(i, b)| vec![i.to_string(), compact(&b.to_json(&t))]).collect();
            let json = json!({"size": set.len(), "via": via, "set": brackets_json(&t, &set)});
            Ok(Report { json, header: "index\tbracket", rows })
        }
        Command::Check { t, sigma, set, table } => {
            let t = load_tournament(t)?;
            let set = load_set(&t, set)?;
            let violations = necessary_condition_violations(&t, &set)?;
            let universal = check_universal(&t, &set, limits)?;
            let mut per_sigma = Vec::new();
            let mut rows = Vec::new();
            for (name, s) in sigmas(&t, &sigma.sigma)? {
                let mut report = is_resolving(&t, &s, &set, limits)?;
                if !*table {
                    report.score_table = None;
                }
                rows.push(vec![
                    name.clone(),
                    report.is_resolving.to_string(),
                    universal.verdict.as_str().to_string(),
                    violations.len().to_string(),
                ]);
                let mut j = report.to_json(&t);
                if !*table {
                    j.as_object_mut().unwrap().remove("score_table");
                }
                per_sigma.push(json!({"sigma": name, "report": j}));
            }
            let json = json!({
                "set_size": set.len(),
                "necessary_condition_violations": violations
                    .iter()
                    .map(|&(a, b)| json!([t.label(a), t.label(b)]))
                    .collect::<Vec<_>>(),
                "universal": universal.to_json(&t),
                "sigmas": per_sigma,
            });
            Ok(Report { json, header: "sigma\tresolving\tuniversal\tviolations", rows })
        }
        Command::Resnum { t, sigma, exact, subsets } => {
            let t = load_tournament(t)?;
            let bounds = resolving_number_bounds(&t)?;
            let systems = sigmas(&t, &sigma.sigma)?;
            let mut json = bounds.to_json();
            json.as_object_mut().unwrap().remove("exact");
            let row = |name: &str, value: Option<usize>| {
                vec![
                    name.to_string(),
                    bounds.bracket_count.to_string(),
                    bounds.lower_qpair.to_string(),
                    bounds.lower_qmax.to_string(),
                    bounds.upper_qmax.to_string(),
                    bounds.upper_counting.to_string(),
                    bounds.prediction.to_string(),
                    value.map_or("-".into(), |v| v.to_string()),
                ]
            };
            let mut rows = Vec::new();
            if *exact {
                let mut found = Vec::new();
                for (name, s) in systems {
                    let r = resolving_number_exact(&t, &s, limits)?;
                    let mut j = json!({"sigma": name, "value": r.value, "within_bounds": bounds.admits(r.value)});
                    if *subsets {
                        let scan = resolving_number_by_subsets(&t, &s, limits)?;
                        if scan != r.value {
                            return Err(Failure::Domain(format!("subset scan gives {scan}, pair formula {}", r.value)));
                        }
                        j["subset_scan"] = json!(scan);
                    }
                    rows.push(row(&name, Some(r.value)));
                    found.push(j);
                }
                json["exact"] = Value::Array(found);
            } else {
                rows.push(row("-", None));
            }
            Ok(Report {
                json,
                header: "sigma\tbrackets\tlower_qpair\tlower_qmax\tupper_qmax\tupper_counting\tprediction\texact",
                rows,
            })
        }
        Command::Probs { t, exhaustive } => {
            let t = load_tournament(t)?;
            let p = if *exhaustive {
                compute_probabilities_exhaustive(&t, limits.brackets)?
            } else {
                compute_probabilities(&t)?
            };
            let mut rows = vec![
                vec!["q_max".into(), p.q_max.to_string()],
                vec!["q_pair".into(), p.q_pair.to_string()],
            ];
            for (&a, q) in t.players().iter().zip(&p.per_player_final) {
                rows.push(vec![format!("final:{}", t.label(a)), q.to_string()]);
            }
            Ok(Report { json: p.to_json(&t), header: "quantity\tvalue", rows })
        }
        Command::Decode { t, sigma, set, scores } => {
            let t = load_tournament(t)?;
            let (_, s) = one_sigma(&t, &sigma.sigma)?;
            let set = load_set(&t, set)?;
            let scores = load_scores(scores)?;
            let b = Decoder::new(&t, &s, &set, limits)?.decode(&scores)?;
            let rows = (0..t.vertex_count())
                .map(|v| vec![t.label(v).to_string(), t.label(b.winner(v)).to_string()])
                .collect();
            Ok(Report { json: b.to_json(&t), header: "vertex\twinner", rows })
        }
        Command::Estimate { t, sigma, set, samples, seed } => {
            let t = load_tournament(t)?;
            let set = load_set(&t, set)?;
            let mut out = Vec::new();
            let mut rows = Vec::new();
            for (name, s) in sigmas(&t, &sigma.sigma)? {
                let e = estimate_resolution_probability(&t, &s, &set, *samples, *seed, limits)?;
                rows.push(vec![
                    name.clone(),
                    e.samples.to_string(),
                    e.resolved.to_string(),
                    format!("{:.6}", e.estimate),
                    e.exact.to_string(),
                ]);
                let mut j = e.to_json();
                j["sigma"] = json!(name);
                out.push(j);
            }
            Ok(Report { json: Value::Array(out), header: "sigma\tsamples\tresolved\testimate\texact", rows })
        }
        Command::Score { t, sigma, set, bracket } => {
            let t = load_tournament(t)?;
            let (name, s) = one_sigma(&t, &sigma.sigma)?;
            let set = load_set(&t, set)?;
            let b = load_bracket(&t, bracket)?;
            let scores: Vec<String> = score_vector(&s, &set, &b)?.iter().map(|q| q.to_string()).collect();
            let rows = scores.iter().enumerate().map(|(i, q)| vec![i.to_string(), q.clone()]).collect();
            Ok(Report { json: json!({"sigma": name, "scores": scores}), header: "member\tscore", rows })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .expect("thread pool is configured once");
    }
    let mut limits = Limits::from_env();
    if let Some(c) = cli.cap_brackets {
        limits.brackets = c;
    }
    if let Some(c) = cli.cap_subsets {
        limits.subsets = c;
    }
    if let Some(c) = cli.cap_search {
        limits.search = c;
    }
    match run(&cli, &limits) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
