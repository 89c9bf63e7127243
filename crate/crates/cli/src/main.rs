use clap::{Args, Parser, Subcommand, ValueEnum};
use quadalg::canon::{self, catalog, realizability, SystemId};
use quadalg::contract::{self, ContractionFamily, SearchOptions, SearchOutcome, Table6Options};
use quadalg::forms::{compose, rank_invariants, random_group_elem, group_act, SymForm};
use quadalg::poisson::{self, AbstractPoly, GeneratorQuadruple, PhasePoly, Chart, StackelMatrix};
use quadalg::{Error, FieldElem, Result};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "quadalg", version, about = "Classify and contract degenerate quadratic algebras exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

/// A quadratic form given as a JSON file, a Casimir polynomial or a system name.
#[derive(Args, Clone)]
struct FormInput {
    /// Form JSON file (`{"basis", "entries"}` or `{"casimir"}`)
    #[arg(long)]
    form: Option<String>,
    /// Casimir polynomial in L1, L2, H, X
    #[arg(long)]
    poly: Option<String>,
    /// Cataloged system name
    #[arg(long)]
    source: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical label, normalizing group element and realizability
    Classify {
        #[command(flatten)]
        input: FormInput,
        /// Also re-classify this many seeded random conjugates
        #[arg(long)]
        seed: Option<u64>,
    },
    /// (rank B, rank b)
    Ranks {
        #[command(flatten)]
        input: FormInput,
    },
    /// Whether two forms lie in one orbit; exit 1 when they do not
    Equiv {
        #[command(flatten)]
        input: FormInput,
        /// Second form: system name or form JSON file
        #[arg(long)]
        target: String,
    },
    /// Check an ε-family against a source and a target
    ContractVerify {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Monomial-ansatz search for a contraction
    ContractSearch {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i32).range(0..=16))]
        bound: i32,
        #[arg(long, default_value_t = 10)]
        max_cost: u32,
    },
    /// Rebuild the 14×14 contraction grid; exit 1 on any mismatch
    Table6 {
        #[arg(long)]
        certificates: bool,
        /// Run the ansatz search on '–' cells still lacking a certificate
        #[arg(long, value_parser = clap::value_parser!(i32).range(0..=16))]
        bound: Option<i32>,
    },
    /// Bundled systems with their Casimirs, labels and ranks
    Catalog {
        #[arg(long)]
        source: Option<String>,
    },
    /// Brackets {X,L1}, {X,L2}, {L1,L2} determined by a Casimir
    Structure {
        #[command(flatten)]
        input: FormInput,
        #[arg(long, default_value = "1")]
        k: String,
    },
    /// Check a phase-space generator quadruple against a Casimir
    Realize {
        /// Generators JSON (`{"chart", "X", "L1", "L2", "H"}`)
        #[arg(long)]
        witness: String,
        #[command(flatten)]
        input: FormInput,
    },
    /// Free equivalence-class Casimir of a parametrized Casimir
    Stackel {
        /// Parametrized Casimir in a1, a2 (defaults to the system's bundled one)
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        source: Option<String>,
        /// `symbolic`, `identity` or four entries `c11,c12,c21,c22`
        #[arg(long, default_value = "symbolic")]
        matrix: String,
    },
}

struct Report {
    value: Value,
    text: String,
    /// false maps to exit code 1
    ok: bool,
    csv: Option<String>,
}

impl Report {
    fn new(value: Value, text: String, ok: bool) -> Self {
        Report { value, text, ok, csv: None }
    }
}

fn system(name: &str) -> Result<SystemId> {
    let id: SystemId = name.parse()?;
    if let Some(n) = id.notice() {
        eprintln!("notice: {n}");
    }
    Ok(id)
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn form_from_json(text: &str) -> Result<SymForm> {
    #[derive(Deserialize)]
    struct Casimir {
        casimir: AbstractPoly,
    }
    if let Ok(f) = serde_json::from_str::<SymForm>(text) {
        return Ok(f);
    }
    match serde_json::from_str::<Casimir>(text) {
        Ok(c) => poisson::form_from_poly(&c.casimir),
        Err(_) => serde_json::from_str::<SymForm>(text).map_err(|e| Error::Parse(e.to_string())),
    }
}

/// System name, or a form JSON file when the argument names an existing file.
fn named_or_file(arg: &str) -> Result<SymForm> {
    if Path::new(arg).is_file() {
        form_from_json(&read(arg)?)
    } else {
        Ok(canon::catalog_form(system(arg)?)?.0)
    }
}

fn load_form(input: &FormInput) -> Result<SymForm> {
    match (&input.form, &input.poly, &input.source) {
        (Some(f), None, None) => form_from_json(&read(f)?),
        (None, Some(p), None) => poisson::form_from_poly(&p.parse()?),
        (None, None, Some(s)) => named_or_file(s),
        _ => Err(Error::Parse("give exactly one of --form, --poly, --source".into())),
    }
}

fn load_poly(input: &FormInput) -> Result<AbstractPoly> {
    match (&input.form, &input.poly, &input.source) {
        (None, Some(p), None) => p.parse(),
        _ => Ok(poisson::poly_from_form(&load_form(input)?)),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn classify(input: &FormInput, seed: Option<u64>) -> Result<Report> {
    use rand::SeedableRng;
    let b = load_form(input)?;
    let c = canon::classify(&b)?;
    let (rb, rs) = rank_invariants(&b);
    let real = realizability(&c.label)?;
    let mut value = json!({
        "label": c.label,
        "rank_invariants": [rb, rs],
        "witness": c.witness,
        "realizability": real,
    });
    if let Some(e) = &c.witness_error {
        value["witness_error"] = json!(e.kind());
    }
    let mut ok = true;
    if let Some(seed) = seed {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut stable = 0;
        for _ in 0..20 {
            let g = random_group_elem(&mut rng);
            if canon::classify_label(&group_act(&g, &b))? == c.label {
                stable += 1;
            }
        }
        ok = stable == 20;
        value["round_trip"] = json!({"seed": seed, "samples": 20, "stable": stable});
    }
    let text = format!("label: {}\nrank invariants: ({rb}, {rs})\n", c.label);
    Ok(Report::new(value, text, ok))
}

fn equiv(input: &FormInput, target: &str) -> Result<Report> {
    let a = load_form(input)?;
    let b = named_or_file(target)?;
    let (ca, cb) = (canon::classify(&a)?, canon::classify(&b)?);
    let same = ca.label == cb.label;
    let g = match (&ca.witness, &cb.witness) {
        (Some(wa), Some(wb)) if same => Some(compose(wa, &wb.inverse())),
        _ => None,
    };
    let value = json!({"equivalent": same, "labels": [ca.label, cb.label], "witness": g});
    let text = format!("{} vs {}: {}\n", ca.label, cb.label, if same { "equivalent" } else { "not equivalent" });
    Ok(Report::new(value, text, same))
}

fn contract_verify(witness: &str, source: &str, target: &str) -> Result<Report> {
    let f: ContractionFamily = serde_json::from_str(&read(witness)?).map_err(|e| Error::InvalidFamily(e.to_string()))?;
    let v = contract::verify_contraction(&f, &named_or_file(source)?, &named_or_file(target)?)?;
    let text = format!("{:?}\n", v.status);
    Ok(Report::new(to_value(&v), text, v.status.verified()))
}

fn contract_search(source: &str, target: &str, bound: i32, max_cost: u32) -> Result<Report> {
    let opts = SearchOptions { max_cost, ..SearchOptions::with_bound(bound) };
    let out = contract::search_contraction(&named_or_file(source)?, &named_or_file(target)?, &opts)?;
    let (ok, text) = match &out {
        SearchOutcome::Found { verdict, cost, .. } => (true, format!("Found ({:?}, cost {cost})\n", verdict.status)),
        SearchOutcome::AnsatzExhausted { certificate, .. } => (
            false,
            format!("AnsatzExhausted{}\n", certificate.as_ref().map(|c| format!(": {}", c.kind.name())).unwrap_or_default()),
        ),
        SearchOutcome::BudgetExceeded { nodes, .. } => (false, format!("BudgetExceeded after {nodes} nodes\n")),
    };
    Ok(Report::new(to_value(&out), text, ok))
}

fn table6(certificates: bool, bound: Option<i32>) -> Result<Report> {
    let opts = Table6Options { search: bound.map(SearchOptions::with_bound), ..Default::default() };
    let r = contract::reproduce_table6(&opts)?;
    let mut value = to_value(&r);
    if !certificates {
        for c in value["cells"].as_array_mut().into_iter().flatten() {
            if let Some(o) = c.as_object_mut() {
                o.remove("witnesses");
                if let Some(v) = o.get_mut("verdict").and_then(Value::as_object_mut) {
                    v.remove("certificate");
                }
            }
        }
    }
    let mut rep = Report::new(value, r.to_markdown(certificates), r.matches());
    rep.csv = Some(r.to_csv());
    if !r.matches() {
        eprintln!("table6: {} cell(s) differ from the published grid", r.mismatches);
    }
    Ok(rep)
}

fn catalog_cmd(source: Option<&str>) -> Result<Report> {
    let cat = catalog()?;
    let only = source.map(system).transpose()?;
    let mut rows = Vec::new();
    let mut text = String::from("| system | Casimir | label | ranks | class |\n|---|---|---|---|---|\n");
    for rec in cat.systems.iter().filter(|r| only.is_none_or(|id| id == r.id)) {
        let b = rec.form();
        let label = canon::classify_label(&b)?;
        let ranks = rank_invariants(&b);
        text += &format!("| {} | {} | {} | ({}, {}) | {} |\n", rec.id, rec.casimir, label, ranks.0, ranks.1, rec.class);
        let mut v = to_value(rec);
        v["label"] = json!(label);
        v["computed_ranks"] = json!([ranks.0, ranks.1]);
        rows.push(v);
    }
    Ok(Report::new(Value::Array(rows), text, true))
}

fn structure(input: &FormInput, k: &str) -> Result<Report> {
    let g = load_poly(input)?;
    let k: FieldElem = k.parse()?;
    let [a, b, c] = poisson::structure_equations(&g, &k)?;
    let value = json!({"{X,L1}": a, "{X,L2}": b, "{L1,L2}": c});
    let text = format!("{{X,L1}} = {a}\n{{X,L2}} = {b}\n{{L1,L2}} = {c}\n");
    Ok(Report::new(value, text, true))
}

fn realize(gens: &str, input: &FormInput) -> Result<Report> {
    #[derive(Deserialize)]
    struct Gens {
        chart: Chart,
        #[serde(rename = "X")]
        x: String,
        #[serde(rename = "L1")]
        l1: String,
        #[serde(rename = "L2")]
        l2: String,
        #[serde(rename = "H")]
        h: String,
    }
    let g: Gens = serde_json::from_str(&read(gens)?).map_err(|e| Error::Parse(e.to_string()))?;
    let p = |s: &str| PhasePoly::parse(g.chart, s);
    let quad = GeneratorQuadruple::new(p(&g.x)?, p(&g.l1)?, p(&g.l2)?, p(&g.h)?)?;
    let rep = poisson::verify_realization(&quad, &load_poly(input)?)?;
    let text = format!(
        "closure: {}\ncasimir: {}\nstructure: {}\nK: {}\n",
        rep.closure_ok,
        rep.casimir_ok,
        rep.structure_ok,
        rep.k.as_ref().map(|k| k.to_string()).unwrap_or_else(|| "-".into())
    );
    Ok(Report::new(to_value(&rep), text, rep.all_ok()))
}

fn stackel(poly: Option<&str>, source: Option<&str>, matrix: &str) -> Result<Report> {
    let g: AbstractPoly = match (poly, source) {
        (Some(p), None) => p.parse()?,
        (None, Some(s)) => {
            let id = system(s)?;
            let rec = catalog()?.get(id);
            rec.parametrized_casimir
                .clone()
                .ok_or_else(|| Error::Data(format!("no parametrized Casimir bundled for {id}")))?
        }
        _ => return Err(Error::Parse("give exactly one of --poly, --source".into())),
    };
    let c = match matrix {
        "symbolic" => StackelMatrix::symbolic(),
        "identity" => StackelMatrix::identity(),
        m => {
            let v: Vec<FieldElem> = m.split(',').map(|t| t.trim().parse()).collect::<Result<_>>()?;
            let [a, b, c, d]: [FieldElem; 4] =
                v.try_into().map_err(|_| Error::Parse("matrix needs four entries c11,c12,c21,c22".into()))?;
            StackelMatrix::numeric([[a, b], [c, d]])?
        }
    };
    let out = poisson::stackel_class(&g, &c)?;
    Ok(Report::new(json!({"input": g, "class_casimir": out}), format!("{out}\n"), true))
}

fn flat_csv(v: &Value) -> String {
    let mut s = String::from("key,value\n");
    if let Some(o) = v.as_object() {
        for (k, x) in o {
            let cell = match x {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            s += &format!("{k},\"{}\"\n", cell.replace('"', "\"\""));
        }
    }
    s
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::Classify { input, seed } => classify(input, *seed),
        Cmd::Ranks { input } => {
            let (rb, rs) = rank_invariants(&load_form(input)?);
            Ok(Report::new(json!({"rank_B": rb, "rank_b": rs}), format!("({rb}, {rs})\n"), true))
        }
        Cmd::Equiv { input, target } => equiv(input, target),
        Cmd::ContractVerify { witness, source, target } => contract_verify(witness, source, target),
        Cmd::ContractSearch { source, target, bound, max_cost } => contract_search(source, target, *bound, *max_cost),
        Cmd::Table6 { certificates, bound } => table6(*certificates, *bound),
        Cmd::Catalog { source } => catalog_cmd(source.as_deref()),
        Cmd::Structure { input, k } => structure(input, k),
        Cmd::Realize { witness, input } => realize(witness, input),
        Cmd::Stackel { poly, source, matrix } => stackel(poly.as_deref(), source.as_deref(), matrix),
    }
}

fn main() -> ExitCode {
    use std::io::Write;
    let cli = Cli::parse();
    let (out, code) = match dispatch(&cli) {
        Ok(r) => {
            let out = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&r.value).expect("json")),
                Format::Markdown => r.text,
                Format::Csv => r.csv.unwrap_or_else(|| flat_csv(&r.value)),
            };
            (out, if r.ok { 0 } else { 1 })
        }
        Err(e) => (format!("{}\n", json!({"error": e.kind(), "message": e.to_string()})), 2),
    };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(code)
}
