//! Command-line front end: every analysis as a subcommand with JSON on
//! standard output. Exit codes: 0 success, 2 validation error (with a
//! machine-readable error object), 1 violated internal identity.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use wonder_core::bar::{BarSystem, TruncatedSolution};
use wonder_core::charts::{chart_profile, make_chart, retraction_maps};
use wonder_core::error::Error;
use wonder_core::field::Complex;
use wonder_core::holonomy::HolonomySystem;
use wonder_core::lattice::{
    irreducibles, minimal_building, minimal_building_with_top, IntersectionLattice,
};
use wonder_core::modularity::modularity_report;
use wonder_core::nested::{adapted_bases, first_adapted_basis, maximal_nested_sets};
use wonder_core::numeric::{associator_1d, mzv_oracle, words_of_len, OneDimNumeric};
use wonder_core::{builtin, Arrangement, Flat};

#[derive(Parser)]
#[command(
    name = "wonder",
    about = "Exact invariants of hyperplane arrangements and numeric associators",
    version
)]
struct Cli {
    /// Reserved for randomized self-checks; analyses are deterministic and
    /// ignore it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Arrangement source: a JSON file path, "builtin:NAME[:p1,p2]", or the
    /// alias "p1-0-1-inf".
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection lattice, irreducibles, and the minimal building set.
    Lattice(InputArg),
    /// Maximal nested sets of the minimal building set with adapted-basis counts.
    Nested(InputArg),
    /// Modular flats, witnesses, enough-modular tests, supersolvability.
    Modular(InputArg),
    /// Chart polynomials and retraction substitutions for one nested set.
    Charts {
        #[command(flatten)]
        input: InputArg,
        /// Index into the maximal-nested-set list.
        #[arg(long, default_value_t = 0)]
        nested_index: usize,
    },
    /// Holonomy and reduced-bar dimensions with the identity checks.
    Bar {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 2)]
        weight: usize,
    },
    /// Union of lattice, modular, and nested summaries.
    Analyze(InputArg),
    /// Numeric associator between two marked points of a one-dimensional
    /// arrangement.
    Assoc {
        /// Arrangement source (one-dimensional); defaults to ℙ¹∖{0,1,∞}.
        #[arg(long, default_value = "p1-0-1-inf")]
        arrangement: String,
        /// Finite marked points, overriding the arrangement source.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        points: Option<Vec<f64>>,
        #[arg(long, default_value = "0")]
        from: String,
        #[arg(long, default_value = "1")]
        to: String,
        #[arg(long, default_value_t = 2)]
        weight: usize,
    },
    /// Multiple zeta value by direct nested summation.
    Mzv {
        /// Indices s1 s2 …, with s1 ≥ 2.
        indices: Vec<u32>,
    },
    /// List the builtin catalog.
    BuiltinList,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable output"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            let object = json!({
                "code": err.code(),
                "message": err.to_string(),
                "context": "wonder cli",
            });
            eprintln!("{}", serde_json::to_string_pretty(&object).expect("serializable error"));
            if err.is_internal() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn parse_arrangement(spec: &str) -> Result<Arrangement, Error> {
    if spec == "p1-0-1-inf" {
        return builtin("monomial", &[1, 1]);
    }
    if let Some(rest) = spec.strip_prefix("builtin:") {
        let mut parts = rest.splitn(2, ':');
        let name = parts.next().unwrap_or_default();
        let params: Vec<u32> = match parts.next() {
            None => Vec::new(),
            Some(p) => p
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::BadParams(format!("bad builtin parameters in \"{}\"", rest)))?,
        };
        return builtin(name, &params);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::BadParams(format!("cannot read {}: {}", spec, e)))?;
    serde_json::from_str(&text).map_err(|e| Error::BadParams(format!("bad arrangement JSON: {}", e)))
}

fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    format!("{:.11e}", x).parse::<f64>().unwrap_or(x)
}

fn complex_json(c: Complex) -> Value {
    json!([round12(c.re), round12(c.im)])
}

fn flat_json(f: &Flat) -> Value {
    serde_json::to_value(f).expect("flat serializes")
}

fn lattice_json(arr: &Arrangement, lattice: &IntersectionLattice) -> Value {
    let irr = irreducibles(lattice);
    let irr_idx: Vec<usize> =
        irr.iter().map(|f| lattice.index_of(f).expect("member")).collect();
    let building = minimal_building_with_top(lattice);
    let building_idx: Vec<usize> =
        building.flats().iter().map(|f| lattice.index_of(f).expect("member")).collect();
    json!({
        "arrangement": serde_json::to_value(arr).expect("arrangement serializes"),
        "flats": lattice.flats.iter().map(flat_json).collect::<Vec<_>>(),
        "covers": lattice.covers,
        "irreducibles": irr_idx,
        "building_set": building_idx,
    })
}

fn nested_json(lattice: &IntersectionLattice) -> Result<Value, Error> {
    let arr = &lattice.arrangement;
    let g = minimal_building(lattice);
    let sets = maximal_nested_sets(lattice, &g);
    let mut out = Vec::with_capacity(sets.len());
    for s in &sets {
        let bases = adapted_bases(arr, s)?;
        out.push(json!({
            "flats": s.flats().iter().map(flat_json).collect::<Vec<_>>(),
            "adapted_basis_count": bases.len(),
        }));
    }
    Ok(json!({
        "building_set": g.flats().iter().map(flat_json).collect::<Vec<_>>(),
        "maximal_nested_sets": out,
    }))
}

fn modular_json(lattice: &IntersectionLattice) -> Result<Value, Error> {
    let g = minimal_building(lattice);
    let report = modularity_report(lattice, &g)?;
    Ok(serde_json::to_value(&report).expect("report serializes"))
}

fn charts_json(lattice: &IntersectionLattice, nested_index: usize) -> Result<Value, Error> {
    let arr = &lattice.arrangement;
    if !arr.is_essential() {
        return Err(Error::BadParams("charts need an essential arrangement".into()));
    }
    let g = minimal_building_with_top(lattice);
    let sets = maximal_nested_sets(lattice, &g);
    let s = sets
        .get(nested_index)
        .ok_or_else(|| Error::BadParams(format!("nested index {} out of range", nested_index)))?;
    let beta = first_adapted_basis(arr, s)?;
    let chart = make_chart(arr, s, &beta)?;
    let names = chart.variable_names();
    let mut polynomials = Map::new();
    for (h, p) in chart.polynomials.iter().enumerate() {
        polynomials.insert(format!("H{}", h), Value::String(format!("{}", p.display(&names))));
    }
    let profile: Vec<Value> = chart_profile(&chart)
        .into_iter()
        .map(|(h, f)| json!({"hyperplane": h, "p_S": flat_json(&f)}))
        .collect();
    // Retraction substitutions where the preconditions hold.
    let mut retractions = Vec::new();
    if wonder_core::modularity::has_enough_g_modular(lattice, &g)? {
        for x in s.flats() {
            if *x == Flat::full(arr.dim) {
                continue;
            }
            let r = retraction_maps(lattice, &g, s, x)?;
            let rnames = r.chart.variable_names();
            let sub1: Vec<String> = r
                .pi1
                .images
                .iter()
                .enumerate()
                .map(|(j, p)| format!("u1[{}] <- {}", j, p.display(&rnames)))
                .collect();
            let sub2: Vec<String> = r
                .pi2
                .images
                .iter()
                .enumerate()
                .map(|(j, p)| format!("u2[{}] <- {}", j, p.display(&rnames)))
                .collect();
            retractions.push(json!({
                "at": flat_json(x),
                "modular_complement": flat_json(&r.m),
                "pi1": sub1,
                "pi2": sub2,
            }));
        }
    }
    Ok(json!({
        "nested_set": s.flats().iter().map(flat_json).collect::<Vec<_>>(),
        "adapted_basis": beta.assignment,
        "coordinates": names,
        "polynomials": polynomials,
        "profile": profile,
        "retractions": retractions,
    }))
}

fn bar_json(lattice: &IntersectionLattice, weight: usize) -> Result<Value, Error> {
    if weight > 4 {
        return Err(Error::TruncationTooLarge(weight, 4));
    }
    let system = HolonomySystem::build(lattice, weight);
    let h0 = lattice.arrangement.len() - 1;
    let bar = BarSystem::build(lattice, &system, h0, weight)?;
    let mut dims = Vec::new();
    for n in 0..=weight {
        dims.push(json!({
            "n": n,
            "holonomy": system.dim(n),
            "bar_kernel": bar.route_dims[n].0,
            "bar_dual": bar.route_dims[n].1,
        }));
    }
    let sol = TruncatedSolution { bar: &bar, max_n: weight };
    let mut differential = true;
    let mut group_like = true;
    for n in 1..=weight {
        differential &= sol.check_differential(n);
        group_like &= sol.check_group_like(n);
    }
    Ok(json!({
        "hyperplane_at_infinity": h0,
        "dims": dims,
        "identities": {
            "kohno_duality": true, // enforced during construction
            "differential": differential,
            "group_like": group_like,
        },
    }))
}

fn run(cmd: Command) -> Result<Value, Error> {
    match cmd {
        Command::Lattice(i) => {
            let arr = parse_arrangement(&i.input)?;
            let lattice = IntersectionLattice::build(&arr);
            Ok(lattice_json(&arr, &lattice))
        }
        Command::Nested(i) => {
            let arr = parse_arrangement(&i.input)?;
            let lattice = IntersectionLattice::build(&arr);
            nested_json(&lattice)
        }
        Command::Modular(i) => {
            let arr = parse_arrangement(&i.input)?;
            let lattice = IntersectionLattice::build(&arr);
            modular_json(&lattice)
        }
        Command::Charts { input, nested_index } => {
            let arr = parse_arrangement(&input.input)?;
            let lattice = IntersectionLattice::build(&arr);
            charts_json(&lattice, nested_index)
        }
        Command::Bar { input, weight } => {
            let arr = parse_arrangement(&input.input)?;
            let lattice = IntersectionLattice::build(&arr);
            bar_json(&lattice, weight)
        }
        Command::Analyze(i) => {
            let arr = parse_arrangement(&i.input)?;
            let lattice = IntersectionLattice::build(&arr);
            Ok(json!({
                "lattice": lattice_json(&arr, &lattice),
                "modular": modular_json(&lattice)?,
                "nested": nested_json(&lattice)?,
            }))
        }
        Command::Assoc { arrangement, points, from, to, weight } => {
            let pts: Vec<Complex> = match points {
                Some(ps) => ps.into_iter().map(|x| Complex::new(x, 0.0)).collect(),
                None => one_dim_points(&arrangement)?,
            };
            let arr = OneDimNumeric::new(pts)?;
            let a = parse_basepoint(&from)?;
            let b = parse_basepoint(&to)?;
            let series = associator_1d(&arr, a, b, weight)?;
            let mut words = vec![Vec::new()];
            for len in 1..=weight {
                words.extend(words_of_len(arr.letters(), len));
            }
            let mut out = Map::new();
            for w in words {
                let key = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("")
                };
                out.insert(key, complex_json(series.get(&w)));
            }
            Ok(json!({
                "points": arr.points.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
                "from": from,
                "to": to,
                "weight": weight,
                "series": out,
            }))
        }
        Command::Mzv { indices } => {
            let value = mzv_oracle(&indices)?;
            Ok(json!({"indices": indices, "value": round12(value)}))
        }
        Command::BuiltinList => Ok(json!({
            "builtins": [
                {"name": "braid", "params": "l ≥ 1"},
                {"name": "monomial", "params": "l ≥ 1, q ≥ 1"},
                {"name": "ex_irred", "params": ""},
                {"name": "ex_ss_not_enough", "params": ""},
                {"name": "ex_only_one_modular", "params": ""},
                {"name": "ex_pred3", "params": ""},
            ],
            "aliases": {"p1-0-1-inf": "monomial:1,1"},
        })),
    }
}

/// The finite marked points of a one-dimensional arrangement (ambient dual
/// dimension 2), taking the last hyperplane as infinity.
fn one_dim_points(spec: &str) -> Result<Vec<Complex>, Error> {
    if spec == "p1-0-1-inf" {
        return Ok(vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);
    }
    let arr = parse_arrangement(spec)?;
    if arr.dim != 2 {
        return Err(Error::BadParams(
            "assoc needs a one-dimensional arrangement (ambient dual dimension 2)".into(),
        ));
    }
    let h0 = arr.len() - 1;
    let mut points = Vec::new();
    for (i, h) in arr.hyperplanes.iter().enumerate() {
        if i == h0 {
            continue;
        }
        // Covector αx + βy = 0; with t = x/y relative to the infinity
        // covector, the point is −β/α after the coordinate change that sends
        // H₀ to ∞. For the catalog one-dimensional arrangements H₀ = ⟨y⟩ and
        // t = x/y directly.
        let alpha = h[0].embed_numeric();
        let beta = h[1].embed_numeric();
        if alpha.norm() < 1e-12 {
            return Err(Error::BadParams(
                "the chosen infinity hyperplane must be the last one".into(),
            ));
        }
        points.push(-beta / alpha);
    }
    Ok(points)
}

fn parse_basepoint(s: &str) -> Result<Option<Complex>, Error> {
    if s == "inf" || s == "infinity" || s == "oo" {
        return Ok(None);
    }
    let x: f64 = s
        .parse()
        .map_err(|_| Error::BadParams(format!("bad basepoint \"{}\"", s)))?;
    Ok(Some(Complex::new(x, 0.0)))
}
