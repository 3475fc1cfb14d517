use anyhow::{bail, Result};
use phi4_core::borel;
use phi4_core::cumulants::{self, CumulantConfig};
use phi4_core::hopf::{self, HMonomial};
use phi4_core::series::GradedSum;
use phi4_core::valuation::{self, Cutoff, GffSampleConfig, Method, Valuator};
use phi4_core::verify;
use phi4_core::{canonicalize, CanonicalKey, DiagramSum, Multigraph};
use serde::Serialize;

use crate::graph_arg::parse_graph;
use crate::output::{Output, Table};
use crate::{BorelCommand, Cli, Command, Global, HopfCommand, UsageError, ValuationCommand};

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Cumulants { order, moments } => cumulant_table(g, *order, *moments),
        Command::Hopf { action } => hopf_command(action),
        Command::Valuation { action } => valuation_command(g, action),
        Command::Borel { action } => borel_command(g, action),
        Command::VerifyAll { level, only } => verify_all(g, *level, only),
    }
}

#[derive(Serialize)]
struct ClassRow {
    n: usize,
    alpha_pow: i32,
    beta_pow: u32,
    key: CanonicalKey,
    graph: Multigraph,
    coefficient: String,
    degree: i64,
    connected: bool,
}

fn cumulant_table(g: &Global, order: usize, moments: bool) -> Result<Output> {
    let cfg = CumulantConfig {
        order_cap: g.order_cap,
        leg_cap: g.leg_cap,
    };
    if order < 2 {
        bail!(UsageError("--order must be at least 2".into()));
    }
    let series = if moments {
        cumulants::moments_up_to(order, &cfg)?
    } else {
        cumulants::cumulants_up_to(order, &cfg)?
    };
    let mut rows = Vec::new();
    for (n, sum) in series.iter().enumerate().skip(2) {
        for (&(alpha_pow, beta_pow), part) in sum.iter() {
            for (key, c) in part.iter() {
                let graph = key.to_graph();
                rows.push(ClassRow {
                    n,
                    alpha_pow,
                    beta_pow,
                    key: key.clone(),
                    degree: graph.degree(),
                    connected: key.is_connected(),
                    graph,
                    coefficient: phi4_core::rational::format(c),
                });
            }
        }
    }
    let mut table = Table::new(&["n", "alpha_pow", "beta_pow", "key", "coefficient", "degree", "connected", "vertices", "edges"]);
    for r in &rows {
        table.push(vec![
            r.n.to_string(),
            r.alpha_pow.to_string(),
            r.beta_pow.to_string(),
            r.key.to_hex(),
            r.coefficient.clone(),
            r.degree.to_string(),
            r.connected.to_string(),
            r.graph.vertex_count().to_string(),
            r.graph.edge_count().to_string(),
        ]);
    }
    let keys: Vec<CanonicalKey> = rows.iter().map(|r| r.key.clone()).collect();
    #[derive(Serialize)]
    struct Result<'a> {
        kind: &'static str,
        order: usize,
        classes: &'a [ClassRow],
    }
    let kind = if moments { "moments" } else { "cumulants" };
    Ok(Output::new(Result { kind, order, classes: &rows })?
        .with_table(table)
        .with_graphs(keys))
}

fn sum_keys(s: &DiagramSum) -> Vec<CanonicalKey> {
    s.keys().flat_map(CanonicalKey::split).collect()
}

fn graded_keys(s: &GradedSum) -> Vec<CanonicalKey> {
    s.iter().flat_map(|(_, part)| sum_keys(part)).collect()
}

fn hopf_command(action: &HopfCommand) -> Result<Output> {
    match action {
        HopfCommand::Coproduct { graph } => {
            let g = parse_graph(graph)?;
            let delta = hopf::coproduct(&g)?;
            let keys: Vec<CanonicalKey> = delta
                .iter()
                .flat_map(|((l, r), _)| l.split().into_iter().chain([r.clone()]))
                .collect();
            Ok(Output::new(&delta)?.with_graphs(keys))
        }
        HopfCommand::Antipode { graph } => {
            let g = parse_graph(graph)?;
            let recursive = hopf::antipode(&g)?;
            let forest = hopf::forest_antipode(&g)?;
            #[derive(Serialize)]
            struct Antipode<'a> {
                antipode: &'a DiagramSum,
                forest_formula_agrees: bool,
            }
            let keys = sum_keys(&recursive);
            let agrees = recursive == forest;
            Ok(Output::new(Antipode {
                antipode: &recursive,
                forest_formula_agrees: agrees,
            })?
            .with_graphs(keys)
            .with_status(agrees))
        }
        HopfCommand::Bphz { graph } => {
            let g = parse_graph(graph)?;
            let expansion = hopf::bphz_expansion(&g)?;
            let reduction = hopf::bphz_reduce(&g)?;
            #[derive(Serialize)]
            struct Bphz<'a> {
                expansion: &'a DiagramSum,
                bubble_reduction: &'a hopf::BphzReduction,
            }
            let keys = sum_keys(&expansion);
            Ok(Output::new(Bphz {
                expansion: &expansion,
                bubble_reduction: &reduction,
            })?
            .with_graphs(keys))
        }
        HopfCommand::Verify { order } => {
            let report = hopf::verify_commutativity(*order)?;
            let mixed = hopf::verify_mixed(HMonomial::new(2, 1))?;
            #[derive(Serialize)]
            struct Verify<'a> {
                report: &'a hopf::CommutativityReport,
                mixed_x2y: &'a GradedSum,
                mixed_equal: bool,
            }
            let passed = report.passed && mixed.equal;
            let keys: Vec<CanonicalKey> = report
                .checks
                .iter()
                .map(|c| canonicalize(&c.graph))
                .collect::<phi4_core::Result<_>>()?;
            let mut keys = keys.into_iter().flat_map(|k| k.split()).collect::<Vec<_>>();
            keys.extend(graded_keys(&mixed.reduced));
            Ok(Output::new(Verify {
                report: &report,
                mixed_x2y: &mixed.reduced,
                mixed_equal: mixed.equal,
            })?
            .with_graphs(keys)
            .with_status(passed))
        }
        HopfCommand::Deform { order } => {
            let holds = hopf::poly::exp_deform_check(*order)?;
            #[derive(Serialize)]
            struct Deform {
                order: usize,
                holds: bool,
            }
            Ok(Output::new(Deform { order: *order, holds })?.with_status(holds))
        }
    }
}

fn valuation_command(g: &Global, action: &ValuationCommand) -> Result<Output> {
    match action {
        ValuationCommand::Pi {
            graph,
            cutoff,
            method,
            grid,
        } => {
            let graph = parse_graph(graph)?;
            let c = Cutoff(*cutoff);
            if grid.is_some() && *method != Method::Grid {
                bail!(UsageError("--grid only applies to --method grid".into()));
            }
            let result = match method {
                Method::Momentum => valuation::pi_momentum_with(&graph, c, g.work_budget)?,
                Method::Spectral => {
                    valuation::pi_spectral_with(&graph, &valuation::SpectralKernels::new(c), g.work_budget)?
                }
                Method::Grid => {
                    let side = grid.unwrap_or_else(|| valuation::required_grid(&graph, c));
                    valuation::pi_grid_with(&graph, c, side, g.work_budget)?
                }
            };
            let mut table = Table::new(&["N", "method", "value", "work"]);
            table.push(vec![
                cutoff.to_string(),
                format!("{method:?}").to_lowercase(),
                g.float(result.value),
                result.work.to_string(),
            ]);
            let key = canonicalize(&graph)?;
            Ok(Output::new(result)?.with_table(table).with_graphs(key.split()))
        }
        ValuationCommand::Counterterms { n_min, n_max, step } => {
            if *step == 0 || n_min > n_max {
                bail!(UsageError("need --n-min <= --n-max and a positive --step".into()));
            }
            let ns: Vec<u32> = (*n_min..=*n_max).step_by(*step as usize).collect();
            let rows = ns
                .iter()
                .map(|&n| Valuator::new(Cutoff(n)).with_budget(g.work_budget).counterterms())
                .collect::<phi4_core::Result<Vec<_>>>()?;
            let mut table = Table::new(&["N", "C1", "C2", "C3", "C4"]);
            for r in &rows {
                table.push(vec![
                    r.cutoff.0.to_string(),
                    g.float(r.c1),
                    g.float(r.c2),
                    g.float(r.c3),
                    g.float(r.c4),
                ]);
            }
            let positive: Vec<u32> = ns.iter().copied().filter(|&n| n > 0).collect();
            let fits = if positive.len() >= 3 {
                Some(valuation::counterterm_scan(&positive)?)
            } else {
                None
            };
            #[derive(Serialize)]
            struct Counterterms<'a> {
                rows: &'a [valuation::Counterterms],
                #[serde(skip_serializing_if = "Option::is_none")]
                fits: Option<Fits<'a>>,
            }
            #[derive(Serialize)]
            struct Fits<'a> {
                c1: &'a valuation::GrowthFit,
                c2: &'a valuation::GrowthFit,
                c3: &'a valuation::GrowthFit,
                c4: &'a valuation::GrowthFit,
            }
            let fits = fits.as_ref().map(|s| Fits {
                c1: &s.c1,
                c2: &s.c2,
                c3: &s.c3,
                c4: &s.c4,
            });
            Ok(Output::new(Counterterms { rows: &rows, fits })?.with_table(table))
        }
        ValuationCommand::Mc { cutoff, samples, grid } => {
            let mut cfg = GffSampleConfig::new(Cutoff(*cutoff), *samples, g.seed);
            if let Some(m) = grid {
                cfg.grid = *m;
            }
            let targets = [(1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1)];
            let report = valuation::gff_moments(&cfg, &targets)?;
            let mut table = Table::new(&["a", "b", "mean", "stderr"]);
            for e in &report.estimates {
                table.push(vec![e.a.to_string(), e.b.to_string(), g.float(e.mean), g.float(e.stderr)]);
            }
            Ok(Output::new(&report)?.with_table(table))
        }
        ValuationCommand::Bphz { order, cutoffs } => {
            let scan = valuation::bphz_boundedness_scan(*order, cutoffs, g.work_budget)?;
            let mut table = Table::new(&["class", "N", "raw", "renormalised"]);
            for row in &scan.rows {
                for (i, n) in scan.cutoffs.iter().enumerate() {
                    let cell = |v: Option<f64>| v.map(|x| g.float(x)).unwrap_or_default();
                    table.push(vec![row.class.to_hex(), n.to_string(), cell(row.raw[i]), cell(row.renormalised[i])]);
                }
            }
            let keys: Vec<CanonicalKey> = scan.rows.iter().flat_map(|r| r.class.split()).collect();
            Ok(Output::new(&scan)?.with_table(table).with_graphs(keys))
        }
    }
}

fn borel_command(g: &Global, action: &BorelCommand) -> Result<Output> {
    match action {
        BorelCommand::Coeffs { order } => {
            let a = borel::asymptotic_coeffs(order + 1)?;
            let b = borel::borel_coeffs(order + 1)?;
            let mut table = Table::new(&["n", "a_n", "a_n_exact", "b_n", "normalised_growth"]);
            for n in 0..a.coeffs.len() {
                table.push(vec![
                    n.to_string(),
                    g.float(a.coeffs[n]),
                    phi4_core::rational::format(&a.exact[n]),
                    g.float(b.coeffs[n]),
                    if n > 0 { g.float(b.normalised_growth(n)) } else { String::new() },
                ]);
            }
            #[derive(Serialize)]
            struct Coeffs<'a> {
                asymptotic: &'a borel::AsymptoticSeries,
                borel: &'a borel::BorelSeries,
            }
            Ok(Output::new(Coeffs {
                asymptotic: &a,
                borel: &b,
            })?
            .with_table(table))
        }
        BorelCommand::Resum { eps, order, degrees } => {
            let degrees = degrees.as_ref().map(|d| (d[0], d[1]));
            let r = borel::pade_borel(*eps, *order, degrees)?;
            let z = borel::z_quadrature(*eps)?;
            #[derive(Serialize)]
            struct Resum<'a> {
                resummed: &'a borel::PadeBorelResult,
                quadrature: f64,
                relative_error: f64,
            }
            let relative_error = (r.value - z).abs() / z;
            let mut table = Table::new(&["eps", "order", "pade_borel", "quadrature", "relative_error"]);
            table.push(vec![g.float(*eps), order.to_string(), g.float(r.value), g.float(z), g.float(relative_error)]);
            Ok(Output::new(Resum {
                resummed: &r,
                quadrature: z,
                relative_error,
            })?
            .with_table(table))
        }
        BorelCommand::Sokal { n_max, eps } => {
            let report = borel::sokal_scan(*n_max, eps)?;
            let mut table = Table::new(&["n", "eps", "partial_sum", "remainder", "bound", "above_noise", "within_bound"]);
            for c in &report.cells {
                table.push(vec![
                    c.n.to_string(),
                    g.float(c.eps),
                    g.float(c.partial_sum),
                    g.float(c.remainder),
                    g.float(c.bound),
                    c.above_noise.to_string(),
                    c.within_bound.to_string(),
                ]);
            }
            let passed = report.passed;
            Ok(Output::new(&report)?.with_table(table).with_status(passed))
        }
        BorelCommand::Remainder {
            n_max,
            cutoffs,
            eps,
            samples,
        } => {
            let cfg = borel::RemainderConfig {
                n_max: *n_max,
                cutoffs: cutoffs.clone(),
                eps_grid: eps.clone(),
                samples: *samples,
                seed: g.seed,
                budget: g.work_budget,
            };
            let scan = borel::phi43_remainder_scan(&cfg)?;
            let mut table = Table::new(&["n", "N", "eps", "bound", "mc_mean", "mc_stderr"]);
            for r in &scan.rows {
                table.push(vec![
                    r.n.to_string(),
                    r.cutoff.to_string(),
                    g.float(r.eps),
                    r.bound.map(|b| g.float(b)).unwrap_or_default(),
                    g.float(r.mc_mean),
                    g.float(r.mc_stderr),
                ]);
            }
            Ok(Output::new(&scan)?.with_table(table))
        }
    }
}

fn verify_all(g: &Global, level: verify::Level, only: &[u8]) -> Result<Output> {
    if let Some(bad) = only.iter().find(|id| !verify::CRITERIA.iter().any(|(i, _)| i == *id)) {
        bail!(UsageError(format!("no criterion {bad}")));
    }
    let mut results = Vec::new();
    for &(id, _) in verify::CRITERIA.iter() {
        if only.is_empty() || only.contains(&id) {
            let r = verify::run(id, level);
            eprintln!("{r}");
            results.push(r);
        }
    }
    let mut table = Table::new(&["id", "name", "passed", "seconds", "detail"]);
    for r in &results {
        table.push(vec![r.id.to_string(), r.name.into(), r.passed.to_string(), g.float(r.seconds), r.detail.clone()]);
    }
    let passed = results.iter().all(|r| r.passed);
    #[derive(Serialize)]
    struct Suite<'a> {
        level: verify::Level,
        passed: bool,
        criteria: &'a [verify::CriterionResult],
    }
    Ok(Output::new(Suite {
        level,
        passed,
        criteria: &results,
    })?
    .with_table(table)
    .with_status(passed))
}
