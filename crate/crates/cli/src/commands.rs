use inexact::allocation::{alpha, alpha_closed_form, oblivious_allocation, optimal_allocation, unclamped_budget};
use inexact::fourier::fourier_transform;
use inexact::function::FunctionDescriptor;
use inexact::influence::{beta_profile, expected_influence, InfluenceMode, InfluenceProfile, BETA_TOLERANCE};
use inexact::learning::{compute_k, learning_experiment};
use inexact::sort::{
    aware_row, expected_wkt_with, good_input_threshold, parse_scheme, per_instance_wkt, ratio_of_means,
    truncation_sweep, EnergyScheme, ExperimentSpec, NoiseModel, SortInstance, SweepRow,
};
use serde_json::{json, Value};

use crate::params::{Format, Mode, Noise, Params};
use crate::report::{join, num, Report};
use crate::CliError;

pub fn default_format(command: &str) -> Format {
    match command {
        "allocate" | "fourier" => Format::Json,
        _ => Format::Csv,
    }
}

pub fn dispatch(command: &str, p: &Params) -> Result<Report, CliError> {
    match command {
        "influence" => influence(p),
        "allocate" => allocate(p),
        "alpha-sweep" => alpha_sweep(p),
        "sort-sim" => sort_sim(p),
        "alpha-star" => alpha_star(p),
        "classify" => classify(p),
        "truncate-sweep" => truncate_sweep(p),
        "learn" => learn(p),
        "fourier" => fourier(p),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing --{flag}"))
}

fn bad(flag: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("--{flag}: {why}"))
}

fn single_n(p: &Params) -> Result<Option<usize>, CliError> {
    match p.n.as_deref() {
        None => Ok(None),
        Some([n]) => Ok(Some(*n)),
        Some(_) => Err(bad("n", "expects a single width for this command")),
    }
}

fn widths(p: &Params, default: &[usize]) -> Vec<usize> {
    p.n.clone().unwrap_or_else(|| default.to_vec())
}

/// The given seed, or a fresh one announced on stderr.
fn seed(p: &Params) -> u64 {
    p.seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn noise(p: &Params) -> NoiseModel {
    match p.noise {
        Some(Noise::PerElement) => NoiseModel::PerElement,
        _ => NoiseModel::FreshPerComparison,
    }
}

fn noise_name(model: NoiseModel) -> &'static str {
    match model {
        NoiseModel::FreshPerComparison => "fresh",
        NoiseModel::PerElement => "per-element",
    }
}

fn positive<T: Default + PartialOrd + Copy>(flag: &str, value: Option<T>, default: T) -> Result<T, CliError> {
    let v = value.unwrap_or(default);
    if v > T::default() {
        Ok(v)
    } else {
        Err(bad(flag, "must be at least 1"))
    }
}

fn function(p: &Params, r: &mut Report) -> Result<FunctionDescriptor, CliError> {
    let n = single_n(p)?;
    let f = match (&p.table, &p.function) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --fn or --table, not both".into())),
        (Some(path), None) => {
            let f = FunctionDescriptor::load_table(path).map_err(|e| bad("table", e))?;
            if let Some(n) = n.filter(|&n| n != f.arity()) {
                return Err(bad("n", format!("{n} disagrees with the table's n = {}", f.arity())));
            }
            r.echo("table", path.display().to_string());
            f
        }
        (None, Some(name)) => {
            let n = n.ok_or_else(|| missing("n"))?;
            r.echo("fn", name.as_str());
            FunctionDescriptor::builtin(name, n).map_err(|e| bad("fn", e))?
        }
        (None, None) => return Err(missing("fn")),
    };
    r.echo("n", f.arity());
    Ok(f)
}

fn profile(f: &FunctionDescriptor, p: &Params, r: &mut Report) -> Result<InfluenceProfile, CliError> {
    let mode = match p.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => {
            r.echo("mode", "exact");
            InfluenceMode::Exact
        }
        Mode::MonteCarlo => {
            let samples = positive("samples", p.samples, 100_000)?;
            let seed = seed(p);
            r.echo("mode", "monte-carlo");
            r.echo("samples", samples);
            r.echo("seed", seed);
            InfluenceMode::MonteCarlo { samples, seed }
        }
    };
    Ok(expected_influence(f, mode)?)
}

fn influence(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new("influence", &["bit", "mean", "std_error"]);
    let f = function(p, &mut r)?;
    let prof = profile(&f, p, &mut r)?;
    for (i, m) in prof.means.iter().enumerate() {
        let se = prof.std_errors.get(i).copied().unwrap_or(0.0);
        r.row(vec![(i + 1).to_string(), num(*m), num(se)]);
    }
    let beta = beta_profile(&prof).ok();
    r.result = json!({
        "profile": prof,
        "ascending_order": prof.ascending_order().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "beta": beta.as_ref().map(|b| &b.ratios),
        "common_beta": beta.and_then(|b| b.common),
    });
    Ok(r)
}

fn allocate(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new(
        "allocate",
        &[
            "kind",
            "budget",
            "total_impact",
            "alpha",
            "energy",
            "probs",
            "saturated",
        ],
    );
    let f = function(p, &mut r)?;
    let budget = p.budget.ok_or_else(|| missing("budget"))?;
    if !budget.is_finite() || budget < 0.0 {
        return Err(bad("budget", format!("{budget} must be a finite non-negative number")));
    }
    r.echo("budget", budget);
    let prof = profile(&f, p, &mut r)?;
    let obl = oblivious_allocation(&prof, budget)?;
    let opt = optimal_allocation(&prof, budget)?;
    let a = alpha(&prof, budget).ok();
    let alpha_cell = a.map(|a| num(a.alpha)).unwrap_or_default();
    for res in [&obl, &opt] {
        let saturated: Vec<String> = res.saturated.iter().map(|i| i.to_string()).collect();
        r.row(vec![
            serde_json::to_value(res.kind)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            num(budget),
            num(res.total_impact),
            alpha_cell.clone(),
            join(res.energy.entries()),
            join(res.probs.entries()),
            saturated.join(";"),
        ]);
    }
    r.result = json!({
        "influence": prof.means,
        "oblivious": obl,
        "optimal": opt,
        "alpha": a.map(|a| a.alpha),
        "clamped": opt.clamped,
        "unclamped_budget": unclamped_budget(&prof),
        "diagnostic": opt.diagnostic,
    });
    Ok(r)
}

fn alpha_sweep(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new(
        "alpha-sweep",
        &["n", "budget", "alpha", "alpha_closed_form", "beta", "clamped"],
    );
    let name = p.function.clone().unwrap_or_else(|| "be".into());
    if p.table.is_some() {
        return Err(bad("table", "alpha-sweep takes built-in functions only"));
    }
    let ns = widths(p, &[4, 8, 12, 16, 20]);
    r.echo("fn", name.as_str());
    r.echo("n", ns.clone());
    r.echo("budget", p.budget.map_or(Value::from("unclamped"), Value::from));
    let mut rows = Vec::new();
    for &n in &ns {
        let f = FunctionDescriptor::builtin(&name, n).map_err(|e| bad("fn", e))?;
        let prof = expected_influence(&f, InfluenceMode::Exact)?;
        let budget = p.budget.or_else(|| unclamped_budget(&prof)).unwrap_or(n as f64);
        let a = alpha(&prof, budget)?;
        let beta = beta_profile(&prof).ok().and_then(|b| b.common);
        let closed = match beta {
            Some(b) if b > 1.0 + BETA_TOLERANCE => Some(alpha_closed_form(b, n)?),
            Some(_) => Some(1.0),
            None => None,
        };
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        r.row(vec![
            n.to_string(),
            num(budget),
            num(a.alpha),
            opt(closed),
            opt(beta),
            a.clamped.to_string(),
        ]);
        rows.push(json!({
            "n": n, "budget": budget, "alpha": a.alpha, "alpha_closed_form": closed,
            "beta": beta, "clamped": a.clamped,
        }));
    }
    r.result = Value::Array(rows);
    Ok(r)
}

fn sort_spec(
    p: &Params,
    r: &mut Report,
    n: usize,
    default_len: usize,
    instances: u64,
    trials: u64,
) -> Result<ExperimentSpec, CliError> {
    let len = positive("N", p.len, default_len)?;
    let instances = positive("instances", p.instances, instances)?;
    let trials = positive("trials", p.trials, trials)?;
    let mut spec = ExperimentSpec::new(n, len, instances, trials, seed(p));
    spec.noise = noise(p);
    r.echo("N", len);
    r.echo("instances", instances);
    r.echo("trials", trials);
    r.echo("noise", noise_name(spec.noise));
    r.echo("seed", spec.seed);
    Ok(spec)
}

fn sort_sim(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new(
        "sort-sim",
        &[
            "n",
            "N",
            "scheme",
            "instance",
            "trials",
            "mean_wkt",
            "std_error",
            "seed",
        ],
    );
    let scheme_name = p.scheme.clone().unwrap_or_else(|| "aware".into());
    let mut rows = Vec::new();
    let mut push = |r: &mut Report,
                    n: usize,
                    len: usize,
                    j: u64,
                    scheme: &EnergyScheme,
                    est: &inexact::sort::WktEstimate,
                    seed: u64| {
        r.row(vec![
            n.to_string(),
            len.to_string(),
            scheme.kind().to_string(),
            j.to_string(),
            est.trials.to_string(),
            num(est.mean),
            num(est.std_error),
            seed.to_string(),
        ]);
        rows.push(json!({ "instance": j, "estimate": est }));
    };
    if let Some(path) = &p.instance {
        let text = std::fs::read_to_string(path).map_err(|e| bad("instance", format!("{}: {e}", path.display())))?;
        let inst: SortInstance = serde_json::from_str(&text).map_err(|e| bad("instance", e))?;
        if let Some(n) = single_n(p)?.filter(|&n| n != inst.width()) {
            return Err(bad(
                "n",
                format!("{n} disagrees with the instance's n = {}", inst.width()),
            ));
        }
        let scheme = parse_scheme(&scheme_name, inst.width()).map_err(|e| bad("scheme", e))?;
        let trials = positive("trials", p.trials, 1000)?;
        let seed = seed(p);
        let model = noise(p);
        r.echo("instance", path.display().to_string());
        r.echo("n", inst.width());
        r.echo("N", inst.len());
        r.echo("scheme", scheme.kind().to_string());
        r.echo("trials", trials);
        r.echo("noise", noise_name(model));
        r.echo("seed", seed);
        let est = expected_wkt_with(&inst, &scheme, trials, seed, model)?;
        push(&mut r, inst.width(), inst.len(), 0, &scheme, &est, seed);
    } else {
        let n = single_n(p)?.ok_or_else(|| missing("n"))?;
        let scheme = parse_scheme(&scheme_name, n).map_err(|e| bad("scheme", e))?;
        r.echo("n", n);
        r.echo("scheme", scheme.kind().to_string());
        let spec = sort_spec(p, &mut r, n, 32, 1, 1000)?;
        for (j, est) in per_instance_wkt(&spec, &scheme)?.iter().enumerate() {
            push(&mut r, n, spec.len, j as u64, &scheme, est, spec.seed);
        }
    }
    r.result = Value::Array(rows);
    Ok(r)
}

fn alpha_star(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new(
        "alpha-star",
        &[
            "n",
            "N",
            "instances",
            "trials",
            "mean_wkt_oblivious",
            "mean_wkt_aware",
            "ratio",
            "ratio_stderr",
            "ci_low",
            "ci_high",
            "seed",
        ],
    );
    let ns = widths(p, &[8, 12]);
    r.echo("n", ns.clone());
    let template = sort_spec(p, &mut r, ns[0], 32, 50, 500)?;
    let mut rows = Vec::new();
    for &n in &ns {
        let spec = ExperimentSpec { width: n, ..template };
        let obl = per_instance_wkt(&spec, &EnergyScheme::oblivious(n)?)?;
        let aware = per_instance_wkt(&spec, &EnergyScheme::aware(n)?)?;
        let est = ratio_of_means(&obl, &aware)?;
        r.row(vec![
            n.to_string(),
            spec.len.to_string(),
            spec.instances.to_string(),
            spec.trials.to_string(),
            num(est.mean_numerator),
            num(est.mean_denominator),
            num(est.ratio),
            num(est.std_error),
            num(est.ci_low),
            num(est.ci_high),
            spec.seed.to_string(),
        ]);
        rows.push(json!({ "n": n, "estimate": est }));
    }
    r.result = Value::Array(rows);
    Ok(r)
}

fn sweep_cells(row: &SweepRow) -> Vec<String> {
    vec![
        row.n.to_string(),
        row.len.to_string(),
        row.k_or_scheme.clone(),
        row.instances.to_string(),
        row.trials.to_string(),
        num(row.mean_wkt_oblivious),
        num(row.mean_wkt_variant),
        num(row.ratio),
        num(row.ratio_stderr),
        row.good_count.to_string(),
        row.bad_count.to_string(),
        row.seed.to_string(),
    ]
}

fn threshold_constant(p: &Params, r: &mut Report) -> Result<f64, CliError> {
    let c = p.c.unwrap_or(1.0);
    if !c.is_finite() || c <= 0.0 {
        return Err(bad("c", format!("{c} must be positive")));
    }
    r.echo("c", c);
    Ok(c)
}

fn classify(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new("classify", &SweepRow::HEADER);
    let ns = widths(p, &[24]);
    r.echo("n", ns.clone());
    let c = threshold_constant(p, &mut r)?;
    let template = sort_spec(p, &mut r, ns[0], 8, 200, 200)?;
    let mut rows = Vec::new();
    for &n in &ns {
        let spec = ExperimentSpec { width: n, ..template };
        let row = aware_row(&spec, c)?;
        r.row(sweep_cells(&row));
        let total = (row.good_count + row.bad_count) as f64;
        rows.push(json!({
            "row": row,
            "threshold": good_input_threshold(&spec, c),
            "bad_fraction": row.bad_count as f64 / total,
        }));
    }
    r.result = Value::Array(rows);
    Ok(r)
}

fn truncate_sweep(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new("truncate-sweep", &SweepRow::HEADER);
    let ns = widths(p, &[12, 18]);
    let ks = p.k.clone().unwrap_or_else(|| vec![2.0, 6.0]);
    r.echo("n", ns.clone());
    r.echo("k", ks.clone());
    let c = threshold_constant(p, &mut r)?;
    let template = sort_spec(p, &mut r, ns[0], 16, 50, 500)?;
    let rows = truncation_sweep(&ns, &ks, &template, c)?;
    for row in &rows {
        r.row(sweep_cells(row));
    }
    r.result = serde_json::to_value(&rows).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(r)
}

fn degree_caps(p: &Params, n: usize) -> Result<Option<Vec<usize>>, CliError> {
    let Some(ks) = &p.k else { return Ok(None) };
    ks.iter()
        .map(|&k| {
            if k >= 0.0 && k.fract() == 0.0 && k as usize <= n {
                Ok(k as usize)
            } else {
                Err(bad("k", format!("{k} is not a degree between 0 and n = {n}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn learn(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new("learn", &["m", "k", "train_error", "test_error", "seed"]);
    let f = function(p, &mut r)?;
    let n = f.arity();
    let ks = match degree_caps(p, n)? {
        Some(ks) => ks,
        None => {
            let eps = p
                .epsilon
                .ok_or_else(|| CliError::Usage("missing --k (or --epsilon with --beta)".into()))?;
            let beta = p.beta.ok_or_else(|| missing("beta"))?;
            let inf = p.inf_bound.unwrap_or(1.0);
            r.echo("epsilon", eps);
            r.echo("beta", beta);
            r.echo("inf-bound", inf);
            let k = compute_k(inf, beta, eps).map_err(|e| bad("beta", e))? as usize;
            vec![k.min(n)]
        }
    };
    let ms = p.m.clone().unwrap_or_else(|| vec![10_000]);
    if ms.contains(&0) {
        return Err(bad("m", "must be at least 1"));
    }
    let test = positive("test-size", p.test_size, 1000)?;
    let seed = seed(p);
    r.echo("k", ks.clone());
    r.echo("m", ms.clone());
    r.echo("test-size", test);
    r.echo("seed", seed);
    let mut rows = Vec::new();
    for &k in &ks {
        for &m in &ms {
            let (_, row) = learning_experiment(&f, k, m, test, seed)?;
            r.row(vec![
                m.to_string(),
                k.to_string(),
                num(row.train_error),
                num(row.test_error),
                seed.to_string(),
            ]);
            rows.push(row);
        }
    }
    r.result = serde_json::to_value(&rows).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(r)
}

fn fourier(p: &Params) -> Result<Report, CliError> {
    let mut r = Report::new("fourier", &["mask", "degree", "coef"]);
    let f = function(p, &mut r)?;
    let n = f.arity();
    let spectrum = fourier_transform(&f)?;
    for (mask, c) in spectrum.coefficients().iter().enumerate() {
        r.row(vec![mask.to_string(), mask.count_ones().to_string(), num(*c)]);
    }
    let variance: Vec<f64> = (1..=n).map(|i| spectrum.variance_of_bit(i)).collect::<Result<_, _>>()?;
    let concentration = match (degree_caps(p, n)?, p.epsilon) {
        (Some(ks), Some(eps)) => {
            r.echo("k", ks.clone());
            r.echo("epsilon", eps);
            let checks = ks
                .iter()
                .map(|&k| {
                    let c = spectrum.concentration_check(eps, k)?;
                    Ok(json!({ "k": k, "residual": c.residual, "concentrated": c.concentrated }))
                })
                .collect::<Result<Vec<_>, inexact::Error>>()?;
            Value::Array(checks)
        }
        (None, None) => Value::Null,
        _ => return Err(CliError::Usage("--k and --epsilon go together".into())),
    };
    r.result = json!({
        "spectrum": spectrum,
        "parseval_mass": spectrum.parseval_mass(),
        "degree_weights": spectrum.degree_weights(),
        "variance": variance,
        "concentration": concentration,
    });
    Ok(r)
}
