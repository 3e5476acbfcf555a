//! Command dispatch.

use serde_json::{json, Value};

use super::config::{Space, Workspace};
use super::report::{Report, Table};
use crate::causal::{prob_levels, run_experiment, fate, Level};
use crate::discrete::{
    check_diamond, check_golden, expect_xi, golden_candidate, prob_omega_is, xi_dist, zadeh_mean, zadeh_prob, Block,
    CondQuery, CondSuite,
};
use crate::dist::{DiscreteDist, Pmf};
use crate::error::{PflError, Result};
use crate::fuzzy::{check_axioms, parametric_limit_gaps, TNorm};
use crate::mixed::{expect_xi_mixed, xi_event_prob, xi_mixed, EventSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// A named scalar or distribution.
    Eval,
    /// One conditional block as a pmf.
    Table,
    /// Treatment effect estimands and an optional simulated experiment.
    Fate,
    /// Diamond, golden, t-norm axiom and properness checks.
    CheckProperties,
    /// (x, y) series for plotting.
    PlotData,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Table => "table",
            Command::Fate => "fate",
            Command::CheckProperties => "check-properties",
            Command::PlotData => "plot-data",
        }
    }
}

fn usage(text: &str) -> PflError {
    PflError::Validation(format!("usage: {text}"))
}

fn arg<'a>(args: &'a [String], i: usize, text: &str) -> Result<&'a str> {
    args.get(i).map(String::as_str).ok_or_else(|| usage(text))
}

fn number(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| PflError::Parse(format!("'{s}' is not a number")))
}

fn pmf_json(p: &Pmf) -> Value {
    json!(p.atoms())
}

fn pmf_table(atoms: &[(f64, f64)]) -> Table {
    Table::pairs(["value", "prob"], atoms)
}

/// Runs one command against a loaded workspace.
pub fn run(command: Command, args: &[String], ws: &Workspace, seed: Option<u64>) -> Result<Report> {
    match command {
        Command::Eval => eval(args, ws),
        Command::Table => table(args, ws),
        Command::Fate => run_fate(args, ws, seed),
        Command::CheckProperties => check_properties(args, ws),
        Command::PlotData => plot_data(args, ws),
    }
}

/// `B|A` and `@y` or `@y,x`.
fn conditional_args(args: &[String], text: &str) -> Result<(String, String, f64, f64)> {
    let pair = arg(args, 1, text)?;
    let (b, a) = pair.split_once('|').ok_or_else(|| usage(text))?;
    let at = arg(args, 2, text)?.strip_prefix('@').ok_or_else(|| usage(text))?;
    let (y, x) = match at.split_once(',') {
        Some((y, x)) => (number(y)?, number(x)?),
        None => (number(at)?, number(at)?),
    };
    Ok((b.trim().to_string(), a.trim().to_string(), y, x))
}

fn interval(args: &[String], from: usize, text: &str) -> Result<EventSet> {
    let lo = number(arg(args, from, text)?)?;
    let hi = number(arg(args, from + 1, text)?)?;
    Ok(EventSet::closed(lo, hi))
}

fn eval(args: &[String], ws: &Workspace) -> Result<Report> {
    const TEXT: &str = "eval <quantity> <arguments...>";
    let quantity = arg(args, 0, TEXT)?;
    let report = |results: Value| Report::new("eval", args, &ws.digest, results);
    let model = &ws.model;
    Ok(match quantity {
        "prob_omega_is" => report(json!({ "value": prob_omega_is(model, &ws.binding(arg(args, 1, "eval prob_omega_is <attribute>")?)?)? })),
        "expect_xi" => report(json!({ "value": expect_xi(model, &ws.binding(arg(args, 1, "eval expect_xi <attribute>")?)?)? })),
        "xi_dist" => {
            let d = xi_dist(model, &ws.binding(arg(args, 1, "eval xi_dist <attribute>")?)?)?;
            report(json!({
                "base": d.base(),
                "prob_selected": d.prob_selected(),
                "expectation": d.expectation(),
                "pmf": d.dist().atoms(),
            }))
            .with_table(pmf_table(d.dist().atoms()))
        }
        "select_prob" => {
            let text = "eval select_prob <attribute> <x>";
            let b = ws.binding(arg(args, 1, text)?)?;
            report(json!({ "value": model.select_prob(&b, number(arg(args, 2, text)?)?)? }))
        }
        "std_cond_prob" | "std_cond_prob_negated" => {
            let text = "eval std_cond_prob <B>|<A> @<y>[,<x>]";
            let (b, a, y, x) = conditional_args(args, text)?;
            let (bb, ab) = (ws.binding(&b)?, ws.binding(&a)?);
            let v = if quantity == "std_cond_prob" {
                model.std_cond_prob(&bb, y, &ab, x)?
            } else {
                model.std_cond_prob_negated(&bb, y, &ab, x)?
            };
            report(json!({ "value": v, "b": b, "a": a, "y": y, "x": x }))
        }
        "zadeh_prob" => report(json!({ "value": zadeh_prob(&ws.binding(arg(args, 1, "eval zadeh_prob <attribute>")?)?) })),
        "zadeh_mean" => report(json!({ "value": zadeh_mean(&ws.binding(arg(args, 1, "eval zadeh_mean <attribute>")?)?)? })),
        "xi_mixed" => {
            let name = arg(args, 1, "eval xi_mixed <attribute>")?;
            let (sel, base) = ws.field(name)?;
            let f = ws.mixed(&ws.attribute(name)?.space)?;
            let xi = xi_mixed(&f, &sel, base)?;
            report(json!({
                "base": base,
                "atom_at_base": xi.atom_mass(base),
                "atoms": xi.atoms(),
                "expectation": xi.expect()?,
                "total_mass": xi.total_mass()?,
            }))
        }
        "expect_xi_mixed" => {
            let name = arg(args, 1, "eval expect_xi_mixed <attribute>")?;
            let (sel, base) = ws.field(name)?;
            let f = ws.mixed(&ws.attribute(name)?.space)?;
            report(json!({ "value": expect_xi_mixed(&f, &sel, base)? }))
        }
        "xi_event_prob" => {
            let text = "eval xi_event_prob <attribute> <lo> <hi>";
            let name = arg(args, 1, text)?;
            let (sel, base) = ws.field(name)?;
            let f = ws.mixed(&ws.attribute(name)?.space)?;
            report(json!({ "value": xi_event_prob(&f, &sel, base, &interval(args, 2, text)?)? }))
        }
        "prob_event" => {
            let text = "eval prob_event <space> <lo> <hi>";
            let f = ws.mixed(arg(args, 1, text)?)?;
            report(json!({ "value": f.prob_event(&interval(args, 2, text)?)? }))
        }
        "cdf" => {
            let text = "eval cdf <space> <t>";
            let f = ws.mixed(arg(args, 1, text)?)?;
            report(json!({ "value": f.cdf(number(arg(args, 2, text)?)?)? }))
        }
        "expect" => report(json!({ "value": ws.mixed(arg(args, 1, "eval expect <space>")?)?.expect()? })),
        "discretize" => {
            let text = "eval discretize <space> <h>";
            let d = ws.mixed(arg(args, 1, text)?)?.discretize(number(arg(args, 2, text)?)?)?;
            report(json!({ "pmf": d.atoms(), "mean": d.mean() })).with_table(pmf_table(d.atoms()))
        }
        other => {
            return Err(PflError::Validation(format!(
                "unknown quantity '{other}' (expected prob_omega_is, expect_xi, xi_dist, select_prob, std_cond_prob, \
                 std_cond_prob_negated, zadeh_prob, zadeh_mean, xi_mixed, expect_xi_mixed, xi_event_prob, prob_event, \
                 cdf, expect or discretize)"
            )))
        }
    })
}

fn table(args: &[String], ws: &Workspace) -> Result<Report> {
    const TEXT: &str = "table <block a-i> <A> <B> <given|all> [x=<v>] [y=<v>]";
    let block: Block = arg(args, 0, TEXT)?.parse()?;
    let (a_name, b_name) = (arg(args, 1, TEXT)?, arg(args, 2, TEXT)?);
    let given = arg(args, 3, TEXT)?;
    let (mut x, mut y) = (None, None);
    for extra in &args[4.min(args.len())..] {
        match extra.split_once('=') {
            Some(("x", v)) => x = Some(number(v)?),
            Some(("y", v)) => y = Some(number(v)?),
            _ => return Err(usage(TEXT)),
        }
    }
    let (a, b) = (ws.binding(a_name)?, ws.binding(b_name)?);
    let suite = CondSuite::new(&ws.model, &a, &b, &ws.file.joint)?;
    let query = |g: f64| {
        let mut q = CondQuery::new(block, g);
        q.x = x;
        q.y = y;
        q
    };
    let givens: Vec<f64> = if given == "all" {
        let mut v: Vec<f64> = a.space.values().chain(b.space.values()).chain([a.base, b.base]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    } else {
        vec![number(given)?]
    };
    let mut rows = Vec::new();
    let mut t = Table::new(&["given", "value", "prob"]);
    for g in givens {
        let q = query(g);
        let pmf = match suite.query(&q) {
            Ok(p) => p,
            Err(PflError::ConditionImpossible(_) | PflError::ValueNotInSpace(_)) if given == "all" => continue,
            Err(e) => return Err(e),
        };
        for &(v, p) in pmf.atoms() {
            t.push(vec![g.into(), v.into(), p.into()]);
        }
        rows.push(json!({ "given": g, "pmf": pmf_json(&pmf), "expectation": suite.expectation(&q)? }));
    }
    let results = json!({
        "block": block.to_string(),
        "description": block.describe(),
        "a": a_name,
        "b": b_name,
        "x": x,
        "y": y,
        "rows": rows,
    });
    Ok(Report::new("table", args, &ws.digest, results).with_table(t))
}

fn run_fate(args: &[String], ws: &Workspace, seed: Option<u64>) -> Result<Report> {
    const TEXT: &str = "fate <experiment> [units]";
    let name = arg(args, 0, TEXT)?;
    let units = match args.get(1).map(String::as_str) {
        None => false,
        Some("units") => true,
        Some(_) => return Err(usage(TEXT)),
    };
    let (space, po, spec) = ws.experiment(name)?;
    let seed = seed.unwrap_or(spec.seed);
    let levels = prob_levels(&space)?;
    let level_json = json!({ "low": levels[0], "medium": levels[1], "high": levels[2] });
    let bases = json!({
        "low": space.base(Level::Low),
        "medium": space.base(Level::Medium),
        "high": space.base(Level::High),
    });
    if spec.n_units == 0 {
        if units {
            return Err(PflError::Validation(format!("experiment '{name}' has n_units = 0, so there are no units")));
        }
        let r = fate(&space, &po)?;
        let results = json!({ "report": r, "prob_levels": level_json, "bases": bases });
        return Ok(Report::new("fate", args, &ws.digest, results));
    }
    let (r, assignments, outcomes) = run_experiment(&space, &po, spec.n_units, seed)?;
    let results = json!({ "report": r, "prob_levels": level_json, "bases": bases });
    let mut report = Report::new("fate", args, &ws.digest, results).with_seed(seed);
    if units {
        let mut t = Table::new(&["unit", "level", "t", "y"]);
        for (a, y) in assignments.iter().zip(&outcomes) {
            t.push(vec![a.unit.into(), a.level.as_str().into(), a.t.into(), (*y as u8).into()]);
        }
        report = report.with_table(t);
    }
    if !space.is_partition()? {
        report.warn("the three levels do not partition the treatment values");
    }
    Ok(report)
}

/// A space name or a `bern(p)` literal.
fn dist_arg(ws: &Workspace, s: &str) -> Result<DiscreteDist> {
    if let Some(p) = s.strip_prefix("bern(").and_then(|r| r.strip_suffix(')')) {
        let p = number(p)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(PflError::Validation(format!("Bernoulli parameter {p} is not in [0, 1]")));
        }
        return DiscreteDist::bernoulli(p);
    }
    ws.discrete(s).cloned()
}

fn tnorm_arg(ws: &Workspace, s: Option<&String>) -> Result<TNorm> {
    match s {
        Some(s) => s.parse(),
        None => Ok(ws.model.tnorm),
    }
}

fn proper_json(ws: &Workspace, names: &[String]) -> Value {
    let mut out = serde_json::Map::new();
    for name in names {
        let entry = match ws.binding(name) {
            Ok(b) => match ws.model.check_proper(&b) {
                Ok(r) => json!(r),
                Err(e) => json!({ "error": e.to_string() }),
            },
            Err(e) => json!({ "error": e.to_string() }),
        };
        out.insert(name.clone(), entry);
    }
    Value::Object(out)
}

fn check_properties(args: &[String], ws: &Workspace) -> Result<Report> {
    const TEXT: &str = "check-properties [axioms [tnorm] | diamond <X> <Y> [tnorm] | golden <X> <Y> [tnorm] [exempt] | proper [attributes...]]";
    let report = |results: Value| Report::new("check-properties", args, &ws.digest, results);
    match args.first().map(String::as_str) {
        None => {
            let discrete: Vec<String> = ws
                .attributes
                .iter()
                .filter(|(_, a)| a.base.is_some() && matches!(ws.spaces.get(&a.space), Some(Space::Discrete(_))))
                .map(|(n, _)| n.clone())
                .collect();
            let (aa, sw) = parametric_limit_gaps();
            Ok(report(json!({
                "axioms": check_axioms(ws.model.tnorm),
                "parametric_limits": { "aczel_alsina_vs_min": aa, "sugeno_weber_vs_product": sw },
                "proper": proper_json(ws, &discrete),
            })))
        }
        Some("axioms") => {
            let t = tnorm_arg(ws, args.get(1))?;
            Ok(report(json!(check_axioms(t))))
        }
        Some("diamond") => {
            let x = dist_arg(ws, arg(args, 1, TEXT)?)?;
            let y = dist_arg(ws, arg(args, 2, TEXT)?)?;
            let t = tnorm_arg(ws, args.get(3))?;
            let r = check_diamond(&x, &y, t);
            let mut table = Table::new(&["y", "x", "mass"]);
            for row in &r.rows {
                for &(xv, m) in &row.masses {
                    table.push(vec![row.y.into(), xv.into(), m.into()]);
                }
            }
            Ok(report(json!({ "tnorm": t.name(), "diamond": r })).with_table(table))
        }
        Some("golden") => {
            let x = dist_arg(ws, arg(args, 1, TEXT)?)?;
            let y = dist_arg(ws, arg(args, 2, TEXT)?)?;
            let t = tnorm_arg(ws, args.get(3))?;
            let exempts: Vec<f64> = match args.get(4) {
                Some(e) => vec![number(e)?],
                None => x.values().collect(),
            };
            let mut table = Table::new(&["exempt", "holds"]);
            let mut found = Vec::new();
            let mut checks = Vec::new();
            for e in exempts {
                let rows = golden_candidate(&x, &y, t, e);
                let r = check_golden(&rows, &x, &y, t, e);
                table.push(vec![e.into(), r.holds.into()]);
                if r.holds {
                    found.push(e);
                }
                checks.push(json!({ "exempt": e, "report": r }));
            }
            Ok(report(json!({ "tnorm": t.name(), "golden_values": found, "checks": checks })).with_table(table))
        }
        Some("proper") => {
            let names: Vec<String> = if args.len() > 1 { args[1..].to_vec() } else { ws.attributes.keys().cloned().collect() };
            Ok(report(proper_json(ws, &names)))
        }
        Some(_) => Err(usage(TEXT)),
    }
}

fn grid(lo: f64, hi: f64, n: usize, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect();
    xs.extend(extra.into_iter().filter(|x| (lo..=hi).contains(x)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn plot_data(args: &[String], ws: &Workspace) -> Result<Report> {
    const TEXT: &str = "plot-data <attribute|space> [points=<n>] [atoms]";
    let name = arg(args, 0, TEXT)?;
    let mut points = 201usize;
    let mut atoms_only = false;
    for extra in &args[1..] {
        match extra.split_once('=') {
            Some(("points", v)) => {
                points = v.parse().map_err(|_| PflError::Parse(format!("'{v}' is not a point count")))?;
                if points < 2 {
                    return Err(PflError::Validation("points must be at least 2".into()));
                }
            }
            None if extra == "atoms" => atoms_only = true,
            _ => return Err(usage(TEXT)),
        }
    }
    let report = |kind: &str, series: Vec<(f64, f64)>| {
        Report::new("plot-data", args, &ws.digest, json!({ "name": name, "kind": kind, "series": series }))
            .with_table(Table::pairs(["x", "y"], &series))
    };
    if let Some(a) = ws.attributes.get(name) {
        let mf = a.attr.membership();
        let (lo, hi) = mf.domain();
        let xs = grid(lo, hi, points, mf.breakpoints().iter().map(|b| b.0));
        return Ok(report("membership", xs.into_iter().map(|x| (x, mf.eval(x))).collect()));
    }
    match ws.space(name)? {
        Space::Discrete(d) => Ok(report("pmf", d.atoms().to_vec())),
        Space::Mixed(m) if atoms_only => Ok(report("atoms", m.atoms().to_vec())),
        Space::Mixed(m) => {
            let d = m
                .density()
                .ok_or_else(|| PflError::Validation(format!("space '{name}' has no density; use the atoms option")))?;
            let (lo, hi) = d.support();
            let xs = grid(lo, hi, points, d.breakpoints().iter().copied());
            Ok(report("density", xs.into_iter().map(|x| (x, d.eval(x))).collect()))
        }
    }
}
