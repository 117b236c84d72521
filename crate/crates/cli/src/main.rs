//! `semiprimal` command-line front end.
//!
//! Exit codes: 0 when the command succeeds and any checked property holds,
//! 1 when a checked property fails, 2 on malformed input or flags. With
//! `--json` a failure still prints one document, `{"error", "exit_code"}`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semiprimal::algebra::{AlgebraJson, DEFAULT_CAP};
use semiprimal::boolean::FiniteBooleanAlgebra;
use semiprimal::catalog;
use semiprimal::duality::{pi_obj, roundtrip_algebra, roundtrip_space, sigma_obj, StoneLJson, StoneLObject};
use semiprimal::experiments::{murskii_sample_with, route_fuzz, SampleConfig};
use semiprimal::hom::enumerate_homomorphisms;
use semiprimal::lattice::{detect_lattice, LatticeReduct};
use semiprimal::primality::{is_primal, is_quasi_primal, is_semi_primal, PrimalityVerdict, Route, Witness};
use semiprimal::subuniverse::enumerate_subuniverses;
use semiprimal::variety::{
    boolean_power, canonicalize, quotient_functor, skeleton, skeleton_hom_bijection, transpose, unit_embedding,
    SemiprimalBase, VarietyAlgebra, VarietyJson,
};
use semiprimal::{ElemSet, Error, FiniteAlgebra};

#[derive(Parser)]
#[command(name = "semiprimal", version, about = "Semi-primal lattice-based algebras, Boolean powers and finite duality")]
struct Cli {
    /// Emit a single JSON document on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Size cap for constructed carriers.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Semiprimal,
    Primal,
    Quasiprimal,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoundTrip {
    Algebra,
    Space,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of an algebra.
    Check {
        property: Property,
        input: String,
        #[arg(long, default_value = "all")]
        route: String,
        /// Lattice operations as `MEET,JOIN` when they are not called meet and join.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// List the subuniverses of an algebra.
    Subalgebras { input: String },
    /// Enumerate homomorphisms between two algebras of the same signature.
    Homs {
        domain: String,
        codomain: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Boolean skeleton of a member of the variety of the base.
    Skeleton {
        input: String,
        #[arg(long)]
        base: String,
    },
    /// Boolean power `M[2^k]`.
    Boolpower {
        input: String,
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The dual: labelled set of an algebra, or product algebra of a labelled set.
    Dual {
        input: String,
        #[arg(long)]
        base: String,
    },
    /// Verify a duality round trip isomorphism.
    Roundtrip {
        kind: RoundTrip,
        input: String,
        #[arg(long)]
        base: String,
    },
    /// Verify the skeleton/power transposes and the skeleton/hom bijection.
    AdjointCheck {
        input: String,
        #[arg(long)]
        base: String,
        /// Largest atom count of the test Boolean algebras.
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
    },
    /// The largest quotient whose factors lie in a subuniverse `S` of the base.
    Quotient {
        input: String,
        #[arg(long)]
        base: String,
        /// Elements of `S`, comma separated names or indices.
        #[arg(long)]
        sub: String,
    },
    /// Built-in algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Sampling experiments over random chain expansions.
    Experiments {
        #[command(subcommand)]
        action: ExperimentAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Build {
        key: String,
        param: Option<String>,
        /// Write the algebra JSON here instead of printing the entry.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SampleArgs {
    #[arg(long)]
    chain: usize,
    /// Arities of the random operations, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    ops: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ExperimentAction {
    /// Fraction of semi-primal expansions with a Wilson interval.
    Murskii {
        #[command(flatten)]
        args: SampleArgs,
        /// Also run every route and count disagreements.
        #[arg(long)]
        cross_check: bool,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Run all three routes and report disagreements.
    Fuzz {
        #[command(flatten)]
        args: SampleArgs,
    },
}

/// A failed command: exit code 1 (property) or 2 (input).
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RouteDisagreement(_)
            | Error::NotSurjective(_)
            | Error::BijectionFailure(_)
            | Error::RoundTripFailure(_)
            | Error::ConstructionAmbiguous { .. }
            | Error::ConstructionInfeasible(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Report, Failure>;

/// Command output: the JSON document, its human rendering, and whether the
/// checked property holds.
struct Report {
    value: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(value: Value, text: String) -> Self {
        Report { value, text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.value).expect("report serializes"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if cli.json {
                println!("{}", json!({"error": f.message, "exit_code": f.code}));
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Check {
            property,
            input,
            route,
            lattice,
        } => check(*property, &load_algebra(input)?, route, lattice.as_deref()),
        Command::Subalgebras { input } => subalgebras(&load_algebra(input)?),
        Command::Homs {
            domain,
            codomain,
            count_only,
        } => homs(&load_algebra(domain)?, &load_algebra(codomain)?, *count_only),
        Command::Skeleton { input, base } => {
            let base = load_base(base, cli.cap)?;
            skeleton_cmd(&load_member(input, &base)?, &base)
        }
        Command::Boolpower { input, atoms, out } => boolpower(&load_algebra(input)?, *atoms, cli.cap, out.as_deref()),
        Command::Dual { input, base } => dual(input, &load_base(base, cli.cap)?),
        Command::Roundtrip { kind, input, base } => roundtrip(*kind, input, &load_base(base, cli.cap)?),
        Command::AdjointCheck { input, base, max_atoms } => {
            let base = load_base(base, cli.cap)?;
            adjoint_check(&load_member(input, &base)?, &base, *max_atoms)
        }
        Command::Quotient { input, base, sub } => {
            let base = load_base(base, cli.cap)?;
            quotient_cmd(&load_member(input, &base)?, &base, sub)
        }
        Command::Catalog { action } => catalog_cmd(action),
        Command::Experiments { action } => experiments(action),
    }
}

// ---- input ----

enum Input {
    Algebra(FiniteAlgebra),
    Member(VarietyJson),
    Space(StoneLJson),
}

/// Reads `catalog:<key>[:<param>]` or a JSON file; the kind is recognized by
/// its fields (`ops`, `factors`, `v`).
fn load(source: &str) -> Result<Input, Failure> {
    if let Some(rest) = source.strip_prefix("catalog:") {
        let (key, param) = match rest.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (rest, None),
        };
        return Ok(Input::Algebra(catalog::build(key, param)?.algebra));
    }
    let text = std::fs::read_to_string(source).map_err(|e| input_error(format!("{source}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| input_error(format!("{source}: malformed JSON: {e}")))?;
    let Some(obj) = value.as_object() else {
        return Err(input_error(format!("{source}: expected a JSON object")));
    };
    if obj.contains_key("ops") {
        let json: AlgebraJson = parse_field(source, value)?;
        let alg = FiniteAlgebra::from_json(&json).map_err(|e| input_error(format!("{source}: {e}")))?;
        Ok(Input::Algebra(alg))
    } else if obj.contains_key("factors") {
        Ok(Input::Member(parse_field(source, value)?))
    } else if obj.contains_key("v") {
        Ok(Input::Space(parse_field(source, value)?))
    } else {
        Err(input_error(format!(
            "{source}: expected an algebra (`ops`), a variety member (`factors`) or a labelled set (`v`)"
        )))
    }
}

fn parse_field<T: serde::de::DeserializeOwned>(source: &str, value: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        input_error(format!("{source}: field `{path}`: {}", e.into_inner()))
    })
}

fn load_algebra(source: &str) -> Result<FiniteAlgebra, Failure> {
    match load(source)? {
        Input::Algebra(a) => Ok(a),
        _ => Err(input_error(format!("{source}: expected an algebra with `ops`"))),
    }
}

fn load_base(source: &str, cap: usize) -> Result<SemiprimalBase, Failure> {
    let alg = load_algebra(source)?;
    SemiprimalBase::with_cap(alg, cap).map_err(|e| input_error(format!("--base {source}: {e}")))
}

fn check_base_name(source: &str, named: &str, base: &SemiprimalBase) -> Result<(), Failure> {
    if named != base.algebra.name {
        return Err(input_error(format!(
            "{source}: field `base` names `{named}` but --base is `{}`",
            base.algebra.name
        )));
    }
    Ok(())
}

/// A member of `V(L)`: given by factors, or an algebra brought to normal form.
fn load_member(source: &str, base: &SemiprimalBase) -> Result<VarietyAlgebra, Failure> {
    match load(source)? {
        Input::Member(json) => {
            check_base_name(source, &json.base, base)?;
            VarietyAlgebra::from_json(base, &json).map_err(|e| input_error(format!("{source}: {e}")))
        }
        Input::Algebra(a) => Ok(canonicalize(&a, base)?.0),
        Input::Space(_) => Err(input_error(format!("{source}: expected an algebra, found a labelled set"))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn names(a: &FiniteAlgebra, xs: impl IntoIterator<Item = usize>) -> String {
    let parts: Vec<String> = xs.into_iter().map(|x| a.element_name(x)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn pairs(a: &FiniteAlgebra, ps: &[(usize, usize)]) -> String {
    let parts: Vec<String> = ps
        .iter()
        .map(|&(x, y)| format!("({}, {})", a.element_name(x), a.element_name(y)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

// ---- check ----

fn lattice_for(alg: &FiniteAlgebra, source: Option<&str>) -> Result<LatticeReduct, Failure> {
    let hints = match source {
        None => None,
        Some(s) => Some(
            s.split_once(',')
                .ok_or_else(|| input_error(format!("--lattice: expected MEET,JOIN, found `{s}`")))?,
        ),
    };
    Ok(detect_lattice(alg, hints)?)
}

fn describe_witness(a: &FiniteAlgebra, w: &Witness) -> String {
    match w {
        Witness::TNotPreserved { ell, relation, pair } => format!(
            "T_{} sends ({}, {}) outside the subuniverse {} of A²",
            a.element_name(*ell),
            a.element_name(pair.0),
            a.element_name(pair.1),
            pairs(a, relation)
        ),
        Witness::SquareSubuniverse { relation } => {
            format!("subuniverse {} of A² is neither a product nor a diagonal", pairs(a, relation))
        }
        Witness::InternalIsomorphism { domain, codomain, pairs: ps } => format!(
            "internal isomorphism {} ≅ {} via {}",
            names(a, domain.elements()),
            names(a, codomain.elements()),
            pairs(a, ps)
        ),
        Witness::DiscriminatorNotPreserved { relation, args } => format!(
            "the discriminator leaves {} on arguments {}",
            pairs(a, relation),
            pairs(a, args)
        ),
        Witness::ProperSubuniverse { elements } => format!("not primal, proper subuniverse {}", names(a, elements.iter().copied())),
    }
}

fn verdict_text(a: &FiniteAlgebra, label: &str, holds: bool, v: &PrimalityVerdict) -> String {
    let mut s = format!("{}: {}{label} (level {})\n", a.name, if holds { "" } else { "not " }, v.level);
    if let Some(r) = &v.routes {
        let _ = writeln!(
            s,
            "routes: t-route {}, square-route {}, discriminator-route {}",
            r.t_route, r.square_route, r.discriminator_route
        );
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "witness: {}", describe_witness(a, w));
    }
    s
}

fn check(property: Property, a: &FiniteAlgebra, route: &str, lattice: Option<&str>) -> CmdResult {
    let route: Route = route.parse().map_err(|e: Error| input_error(format!("--route: {e}")))?;
    let r = lattice_for(a, lattice)?;
    let (label, holds, verdict) = match property {
        Property::Lattice => {
            let value = json!({
                "algebra": a.name,
                "property": "lattice",
                "holds": true,
                "meet": r.meet_op,
                "join": r.join_op,
                "bottom": r.bot,
                "top": r.top,
                "chain": r.is_chain(),
            });
            let text = format!(
                "{}: bounded lattice reduct ({}, {}), bottom {}, top {}{}\n",
                a.name,
                r.meet_op,
                r.join_op,
                a.element_name(r.bot),
                a.element_name(r.top),
                if r.is_chain() { ", a chain" } else { "" }
            );
            return Ok(Report::ok(value, text));
        }
        Property::Quasiprimal => {
            let w = is_quasi_primal(a, &r)?;
            let holds = w.is_none();
            let mut text = format!("{}: {}quasi-primal\n", a.name, if holds { "" } else { "not " });
            if let Some(w) = &w {
                let _ = writeln!(text, "witness: {}", describe_witness(a, w));
            }
            let value = json!({"algebra": a.name, "property": "quasi-primal", "holds": holds, "witness": w});
            return Ok(Report { value, text, ok: holds });
        }
        Property::Semiprimal => {
            let v = is_semi_primal(a, &r, route)?;
            ("semi-primal", v.level.is_semi_primal(), v)
        }
        Property::Primal => {
            let v = is_primal(a, &r)?;
            ("primal", v.level == semiprimal::primality::Level::Primal, v)
        }
    };
    let text = verdict_text(a, label, holds, &verdict);
    let mut value = to_value(&verdict);
    value["algebra"] = json!(a.name);
    value["property"] = json!(label);
    value["holds"] = json!(holds);
    Ok(Report { value, text, ok: holds })
}

// ---- structure ----

fn subalgebras(a: &FiniteAlgebra) -> CmdResult {
    let subs = enumerate_subuniverses(a);
    let mut text = format!("{}: {} subuniverses\n", a.name, subs.len());
    for s in &subs {
        let _ = writeln!(text, "  {}", names(a, s.elements()));
    }
    let value = json!({"algebra": a.name, "count": subs.len(), "subuniverses": subs});
    Ok(Report::ok(value, text))
}

fn homs(a: &FiniteAlgebra, b: &FiniteAlgebra, count_only: bool) -> CmdResult {
    let hs = enumerate_homomorphisms(a, b)?;
    let mut text = format!("{} → {}: {} homomorphisms\n", a.name, b.name, hs.len());
    let mut value = json!({"domain": a.name, "codomain": b.name, "count": hs.len()});
    if !count_only {
        for h in &hs {
            let _ = writeln!(text, "  [{}]", h.map.iter().map(|&y| b.element_name(y)).collect::<Vec<_>>().join(", "));
        }
        value["homomorphisms"] = to_value(&hs);
    }
    Ok(Report::ok(value, text))
}

// ---- functors ----

fn skeleton_cmd(a: &VarietyAlgebra, base: &SemiprimalBase) -> CmdResult {
    let s = skeleton(a, base)?;
    let alg = &a.algebra;
    let atoms: Vec<usize> = (0..s.boolean.atoms).map(|i| s.elements[1 << i]).collect();
    let text = format!(
        "skeleton of {}: 2^{} ({} elements), atoms {}\n",
        alg.name,
        s.boolean.atoms,
        s.elements.len(),
        names(alg, atoms.iter().copied())
    );
    let value = json!({
        "algebra": alg.name,
        "atoms": s.boolean.atoms,
        "elements": s.elements,
        "atom_elements": atoms,
    });
    Ok(Report::ok(value, text))
}

fn boolpower(m: &FiniteAlgebra, atoms: usize, cap: usize, out: Option<&Path>) -> CmdResult {
    let b = FiniteBooleanAlgebra::with_cap(atoms, cap)?;
    let p = boolean_power(m, &b, cap)?;
    let json = p.algebra.to_json();
    if let Some(path) = out {
        std::fs::write(path, p.algebra.to_json_string() + "\n")
            .map_err(|e| input_error(format!("--out {}: {e}", path.display())))?;
    }
    let text = format!("{}[2^{atoms}]: {} elements\n", m.name, p.algebra.size());
    Ok(Report::ok(to_value(&json), text))
}

fn dual(source: &str, base: &SemiprimalBase) -> CmdResult {
    let name = &base.algebra.name;
    match load(source)? {
        Input::Space(json) => {
            check_base_name(source, &json.base, base)?;
            let x = StoneLObject::from_json(base, &json).map_err(|e| input_error(format!("{source}: {e}")))?;
            let p = pi_obj(&x, base)?;
            let text = format!("Π of {} points: product of {:?}, {} elements\n", x.points(), p.factors, p.size());
            Ok(Report::ok(to_value(&p.to_json(name)), text))
        }
        Input::Member(json) => {
            check_base_name(source, &json.base, base)?;
            let a = VarietyAlgebra::from_json(base, &json).map_err(|e| input_error(format!("{source}: {e}")))?;
            sigma_report(&a.algebra, base)
        }
        Input::Algebra(a) => sigma_report(&a, base),
    }
}

fn sigma_report(a: &FiniteAlgebra, base: &SemiprimalBase) -> CmdResult {
    let s = sigma_obj(a, base)?;
    let mut text = format!("Σ({}): {} points\n", a.name, s.object.points());
    for (h, &l) in s.homs.iter().zip(&s.object.v) {
        let _ = writeln!(text, "  {:?} labelled {}", h.map, names(&base.algebra, base.subs[l].elements()));
    }
    let mut value = to_value(&s.object.to_json(&base.algebra.name));
    value["homomorphisms"] = to_value(&s.homs);
    Ok(Report::ok(value, text))
}

fn roundtrip(kind: RoundTrip, source: &str, base: &SemiprimalBase) -> CmdResult {
    match kind {
        RoundTrip::Algebra => {
            let a = match load(source)? {
                Input::Algebra(a) => a,
                Input::Member(json) => {
                    check_base_name(source, &json.base, base)?;
                    VarietyAlgebra::from_json(base, &json)
                        .map_err(|e| input_error(format!("{source}: {e}")))?
                        .algebra
                }
                Input::Space(_) => return Err(input_error(format!("{source}: expected an algebra"))),
            };
            let iso = roundtrip_algebra(&a, base)?;
            let value = json!({"kind": "algebra", "verified": true, "isomorphism": iso});
            Ok(Report::ok(value, format!("{}: A ≅ ΠΣ(A), iso verified\n", a.name)))
        }
        RoundTrip::Space => {
            let Input::Space(json) = load(source)? else {
                return Err(input_error(format!("{source}: expected a labelled set with `v`")));
            };
            check_base_name(source, &json.base, base)?;
            let x = StoneLObject::from_json(base, &json).map_err(|e| input_error(format!("{source}: {e}")))?;
            let iso = roundtrip_space(&x, base)?;
            let value = json!({"kind": "space", "verified": true, "isomorphism": iso});
            Ok(Report::ok(value, format!("{} points: X ≅ ΣΠ(X), iso verified\n", x.points())))
        }
    }
}

fn adjoint_check(a: &VarietyAlgebra, base: &SemiprimalBase, max_atoms: usize) -> CmdResult {
    let mut text = String::new();
    let mut transposes = Vec::new();
    for k in 0..=max_atoms {
        let b = FiniteBooleanAlgebra::new(k)?;
        let r = transpose(a, base, &b)?;
        let _ = writeln!(text, "Hom(S(A), 2^{k}) ≅ Hom(A, L[2^{k}]): {} = {}", r.left, r.right);
        transposes.push(json!({"atoms": k, "left": r.left, "right": r.right}));
    }
    let sk = skeleton_hom_bijection(a, base)?;
    let _ = writeln!(text, "atoms of S(A) ≅ Hom(A, L): {} = {}", sk.left, sk.right);
    let unit = unit_embedding(a, base)?;
    let injective = unit.map.is_injective(unit.power.algebra.size());
    let _ = writeln!(text, "unit embedding injective: {injective}");
    let value = json!({
        "algebra": a.algebra.name,
        "transposes": transposes,
        "skeleton_homs": {"left": sk.left, "right": sk.right},
        "unit_injective": injective,
    });
    Ok(Report {
        value,
        text,
        ok: injective,
    })
}

fn parse_sub(base: &SemiprimalBase, source: &str) -> Result<usize, Failure> {
    let l = &base.algebra;
    let elems = source
        .split(',')
        .map(|t| {
            let t = t.trim();
            l.element_by_name(t)
                .or_else(|| t.parse().ok().filter(|&i: &usize| i < l.size()))
                .ok_or_else(|| input_error(format!("--sub: unknown element `{t}`")))
        })
        .collect::<Result<Vec<usize>, Failure>>()?;
    base.sub_id(&ElemSet::from_elems(l.size(), elems))
        .ok_or_else(|| input_error(format!("--sub: `{source}` is not a subuniverse of {}", l.name)))
}

fn quotient_cmd(a: &VarietyAlgebra, base: &SemiprimalBase, sub: &str) -> CmdResult {
    let s = parse_sub(base, sub)?;
    let q = quotient_functor(a, base, s)?;
    let text = format!(
        "Q_S({}) with S = {}: factors {:?}, {} elements\n",
        a.algebra.name,
        names(&base.algebra, base.subs[s].elements()),
        q.algebra.factors,
        q.algebra.size()
    );
    let mut value = to_value(&q.algebra.to_json(&base.algebra.name));
    value["surjection"] = to_value(&q.surjection);
    Ok(Report::ok(value, text))
}

// ---- catalog and experiments ----

fn catalog_cmd(action: &CatalogAction) -> CmdResult {
    match action {
        CatalogAction::List => {
            let items = catalog::list();
            let mut text = String::new();
            for i in &items {
                let _ = writeln!(
                    text,
                    "{:<16} {:<12} {:<18} {}",
                    i.key,
                    i.params.as_deref().unwrap_or("-"),
                    i.level.to_string(),
                    i.note
                );
            }
            Ok(Report::ok(to_value(&items), text))
        }
        CatalogAction::Build { key, param, out } => {
            let e = catalog::build(key, param.as_deref())?;
            if let Some(path) = out {
                std::fs::write(path, e.algebra.to_json_string() + "\n")
                    .map_err(|err| input_error(format!("--out {}: {err}", path.display())))?;
            }
            let text = format!(
                "{}: {} elements, expected level {}\n",
                e.algebra.name,
                e.algebra.size(),
                e.expected.level
            );
            Ok(Report::ok(to_value(&e), text))
        }
    }
}

fn experiments(action: &ExperimentAction) -> CmdResult {
    match action {
        ExperimentAction::Murskii {
            args,
            cross_check,
            budget,
        } => {
            let mut cfg = SampleConfig::new(args.chain, args.ops.clone(), args.samples, args.seed);
            cfg.cross_check = *cross_check;
            if let Some(b) = budget {
                cfg.budget = Some(
                    Duration::try_from_secs_f64(*b).map_err(|_| input_error(format!("--budget: invalid value {b}")))?,
                );
            }
            let r = murskii_sample_with(&cfg)?;
            let mut text = format!(
                "chain {} ops {:?}: {}/{} semi-primal, fraction {:.4}, 95% Wilson [{:.4}, {:.4}]\n",
                r.base_chain_size, r.extra_ops, r.semi_primal_count, r.sample_count, r.fraction, r.wilson.0, r.wilson.1
            );
            let ok = r.route_disagreements.unwrap_or(0) == 0;
            if let Some(d) = r.route_disagreements {
                let _ = writeln!(text, "route disagreements: {d}");
            }
            Ok(Report {
                value: to_value(&r),
                text,
                ok,
            })
        }
        ExperimentAction::Fuzz { args } => {
            let r = route_fuzz(args.chain, &args.ops, args.samples, args.seed)?;
            let text = format!(
                "chain {} ops {:?}: {} samples, {} semi-primal, {} route disagreements\n",
                r.chain_size, r.extra_ops, r.samples, r.semi_primal_count, r.disagreements
            );
            Ok(Report {
                value: to_value(&r),
                ok: r.disagreements == 0,
                text,
            })
        }
    }
}
