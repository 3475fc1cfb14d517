//! Acceptance checks, shared by the integration tests and `verify-all`.
//!
//! Every check recomputes its inputs from scratch and reports a one-line
//! summary of the quantities it compared.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::borel;
use crate::canon::{canonicalize, CanonicalKey};
use crate::cumulants::{self, CumulantConfig};
use crate::diagram_sum::DiagramSum;
use crate::error::Result;
use crate::graph::named;
use crate::hopf::{self, HMonomial};
use crate::rational::int;
use crate::series::GradedSum;
use crate::valuation::{self, Bindings, Cutoff, GffSampleConfig, Method, Valuator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Skips the order-5 enumeration and truncates the cutoff scans.
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            other => Err(crate::Error::Parse(format!("unknown level `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.1}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "coefficient reproduction"),
    (2, "connectedness"),
    (3, "hopf layer"),
    (4, "commutative diagram"),
    (5, "exponential deformation"),
    (6, "valuation cross-check"),
    (7, "counterterm growth"),
    (8, "bphz boundedness"),
    (9, "bubble identity"),
    (10, "monte carlo oracle"),
    (11, "borel suite"),
];

pub fn run(id: u8, level: Level) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    let start = Instant::now();
    let outcome = match id {
        1 => coefficient_reproduction(),
        2 => connectedness(level),
        3 => hopf_layer(),
        4 => commutative_diagram(),
        5 => exponential_deformation(),
        6 => valuation_cross_check(),
        7 => counterterm_growth(level),
        8 => bphz_boundedness(level),
        9 => bubble_identity(),
        10 => monte_carlo(),
        11 => borel_suite(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(level: Level) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, level)).collect()
}

type Outcome = Result<(bool, String)>;

fn coefficient_reproduction() -> Outcome {
    let cfg = CumulantConfig::default();
    let mu = cumulants::moments_up_to(5, &cfg)?;
    let mut mu2 = GradedSum::zero();
    mu2.add_part((2, 0), &DiagramSum::from_graph(&named::sunset(), int(24))?);
    mu2.add_part((0, 2), &DiagramSum::from_graph(&named::double_edge(), int(2))?);
    let mu2_ok = mu[2] == mu2;

    let mu3_classes = [
        ((3, 0), named::double_triangle(), -1728),
        ((2, 1), named::bubble_with_leg(), -576),
        ((1, 2), named::double_edge_chain(), -72),
        ((0, 3), named::triangle(), -8),
    ];
    let mut mu3 = GradedSum::zero();
    for (sig, g, c) in &mu3_classes {
        mu3.add_part(*sig, &DiagramSum::from_graph(g, int(*c))?);
    }
    let mu3_ok = mu[3] == mu3;

    let kappa = cumulants::leonov_shiryaev(&mu);
    let k4_ok = kappa[4] == mu[4].sub(&mu[2].mul(&mu[2]).scale(&int(3)));
    let two_sunsets = canonicalize(&named::sunset().disjoint_union(&named::sunset()))?;
    let disconnected = mu[4].part(4, 0).coefficient(&two_sunsets);
    let cancel_ok = disconnected == int(3 * 24 * 24) && kappa[4].part(4, 0).coefficient(&two_sunsets) == int(0);
    let k5_ok = kappa[5] == mu[5].sub(&mu[2].mul(&mu[3]).scale(&int(10)));
    Ok((
        mu2_ok && mu3_ok && k4_ok && cancel_ok && k5_ok,
        format!(
            "mu2 {mu2_ok}, mu3 {{1728,576,72,8}} {mu3_ok}, k4 = mu4 - 3mu2^2 {k4_ok} (disconnected {disconnected} cancels: {cancel_ok}), k5 = mu5 - 10mu2mu3 {k5_ok}"
        ),
    ))
}

fn connectedness(level: Level) -> Outcome {
    let max = if level == Level::Full { 5 } else { 4 };
    let cfg = CumulantConfig::default();
    let kappa = cumulants::cumulants_up_to(max, &cfg)?;
    let mut report = Vec::new();
    let mut ok = true;
    for (n, k) in kappa.iter().enumerate().skip(2) {
        let direct = cumulants::cumulant_direct_with(n, &cfg)?;
        let same = *k == direct;
        let connected = k.all_connected();
        ok &= same && connected;
        report.push(format!("n={n} equal {same} connected {connected}"));
    }
    Ok((ok, report.join(", ")))
}

/// Every class occurring in `κ_2 .. κ_4`.
fn cumulant_classes() -> Result<BTreeSet<CanonicalKey>> {
    let kappa = cumulants::cumulants_up_to(4, &CumulantConfig::default())?;
    Ok(kappa
        .iter()
        .flat_map(|k| k.iter().flat_map(|(_, part)| part.keys().cloned().collect::<Vec<_>>()))
        .collect())
}

fn hopf_layer() -> Outcome {
    let g = named::bubble_with_leg();
    let key = |g: &crate::graph::Multigraph| canonicalize(g);
    let delta = hopf::coproduct(&g)?;
    let unit = CanonicalKey::unit();
    let delta_ok = delta.len() == 3
        && delta.coefficient(&key(&g)?, &unit) == int(1)
        && delta.coefficient(&unit, &key(&g)?) == int(1)
        && delta.coefficient(&key(&named::bubble())?, &key(&named::double_edge())?) == int(1);
    let mut expected = DiagramSum::from_graph(&g, int(-1))?;
    expected.add_term(key(&named::bubble().disjoint_union(&named::double_edge()))?, int(1));
    let antipode_ok = hopf::antipode(&g)? == expected;

    let classes = cumulant_classes()?;
    let mut forest_ok = true;
    let mut coassoc_ok = true;
    for k in &classes {
        let h = k.to_graph();
        forest_ok &= hopf::antipode(&h)? == hopf::forest_antipode(&h)?;
        coassoc_ok &= hopf::graph::is_coassociative_on(&h)?;
    }
    Ok((
        delta_ok && antipode_ok && forest_ok && coassoc_ok,
        format!(
            "worked example coproduct {delta_ok} antipode {antipode_ok}; {} classes: forest formula {forest_ok}, coassociative {coassoc_ok}",
            classes.len()
        ),
    ))
}

fn commutative_diagram() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 2..=4 {
        let r = hopf::verify_commutativity(n)?;
        ok &= r.passed;
        parts.push(format!("n={n} {} classes {}", r.checks.len(), r.passed));
    }
    let mixed = hopf::verify_mixed(HMonomial::new(2, 1))?;
    let gamma = canonicalize(&named::bubble_with_leg())?;
    let fgii = canonicalize(&named::double_edge())?;
    // 192 (Γ - (η/48) FGII).
    let mut expected = GradedSum::zero();
    expected.add_part((0, 0), &DiagramSum::from_key(gamma, int(192)));
    expected.add_part((-2, 1), &DiagramSum::from_key(fgii, int(-4)));
    let mixed_ok = mixed.equal && mixed.reduced == expected;
    ok &= mixed_ok;
    parts.push(format!("X^2Y reproduces 192(G - (eta/48) FGII): {mixed_ok}"));
    Ok((ok, parts.join(", ")))
}

fn exponential_deformation() -> Outcome {
    let ok = hopf::poly::exp_deform_check(12)?;
    Ok((ok, format!("order 12 identity {ok}")))
}

fn valuation_cross_check() -> Outcome {
    let c = Cutoff(2);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, g) in [
        ("FGII", named::double_edge()),
        ("bubble", named::bubble()),
        ("FGIV", named::sunset()),
        ("X2Y", named::bubble_with_leg()),
        ("FGVI", named::double_triangle()),
    ] {
        let m = valuation::pi_momentum(&g, c)?.value;
        let q = valuation::pi_grid(&g, c, 9)?.value;
        let rel = ((m - q) / m).abs();
        worst = worst.max(rel);
        parts.push(format!("{name} {m:.12}"));
    }
    Ok((worst <= 1e-10, format!("max relative gap {worst:.2e}; {}", parts.join(", "))))
}

fn counterterm_cutoffs(level: Level) -> Vec<u32> {
    match level {
        Level::Full => vec![4, 8, 12, 16, 20, 24],
        Level::Fast => vec![4, 8, 12],
    }
}

fn growth_linear(fit: &valuation::GrowthFit) -> bool {
    fit.linear.r2 >= 0.99 && fit.slope_spread <= 0.15
}

fn growth_log(fit: &valuation::GrowthFit) -> bool {
    fit.log.r2 >= 0.98
}

fn counterterm_growth(level: Level) -> Outcome {
    let scan = valuation::counterterm_scan(&counterterm_cutoffs(level))?;
    let (c1, c2, c3, c4) = (growth_linear(&scan.c1), growth_log(&scan.c2), growth_linear(&scan.c3), growth_log(&scan.c4));
    Ok((
        c1 && c2 && c3 && c4,
        format!(
            "C1 linear R2 {:.5} spread {:.3} {c1}; C3 linear R2 {:.5} spread {:.3} {c3}; C2 log R2 {:.5} {c2}; C4 log R2 {:.5} {c4}",
            scan.c1.linear.r2, scan.c1.slope_spread, scan.c3.linear.r2, scan.c3.slope_spread, scan.c2.log.r2, scan.c4.log.r2
        ),
    ))
}

fn bphz_boundedness(level: Level) -> Outcome {
    let budget = match level {
        Level::Full => valuation::DEFAULT_WORK_BUDGET,
        Level::Fast => 1e8,
    };
    let p4 = valuation::bphz_boundedness_scan(4, &[2, 4, 6, 8, 12, 16], budget)?;
    let mut parts = Vec::new();
    let mut ok = true;
    for row in &p4.rows {
        let change = row.top_change;
        let row_ok = change.is_some_and(|c| c < 0.05);
        ok &= row_ok;
        parts.push(format!("{} change {:.4}", row.class, change.unwrap_or(f64::NAN)));
    }
    let ns = counterterm_cutoffs(level);
    let p2 = valuation::bphz_boundedness_scan(2, &ns, budget)?;
    let p3 = valuation::bphz_boundedness_scan(3, &ns, budget)?;
    let p2_fit = p2.raw_fit.as_ref().expect("single class");
    let p3_fit = p3.raw_fit.as_ref().expect("single class");
    let (p2_ok, p3_ok) = (growth_linear(p2_fit), growth_log(p3_fit));
    let compensated = p2.rows.iter().chain(&p3.rows).all(|r| r.renormalised.iter().flatten().all(|v| *v == 0.0));
    ok &= p2_ok && p3_ok && compensated;
    parts.push(format!(
        "p=2 raw linear R2 {:.5} spread {:.3} {p2_ok}; p=3 raw log R2 {:.5} {p3_ok}; gamma compensation {compensated}",
        p2_fit.linear.r2, p2_fit.slope_spread, p3_fit.log.r2
    ));
    Ok((ok, parts.join(", ")))
}

fn bubble_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1, 2, 4] {
        let c = Cutoff(n);
        let direct = valuation::pi_momentum(&named::bubble(), c)?.value;
        let counterterms = valuation::counterterms(c)?;
        for eps in [0.01, 0.1, 0.5, 1.0, 3.0] {
            let b = Bindings::from_eps(eps, &counterterms);
            let ratio = b.beta.expect("bound") / (48.0 * b.alpha.expect("bound").powi(2));
            worst = worst.max(((ratio - direct) / direct).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max relative gap {worst:.2e} over N in {{1,2,4}}")))
}

fn monte_carlo() -> Outcome {
    let c = Cutoff(2);
    let cfg = GffSampleConfig::new(c, 100_000, 42);
    let report = valuation::gff_moments(&cfg, &[(1, 0), (0, 1), (2, 0), (0, 2), (2, 1)])?;
    let v = Valuator::new(c).with_method(Method::Momentum);
    let sunset = v.graph(&named::sunset())?;
    let fgii = v.graph(&named::double_edge())?;
    let gamma = v.graph(&named::bubble_with_leg())?;
    let checks = [
        ((1, 0), 0.0, 4.0),
        ((0, 1), 0.0, 4.0),
        ((2, 0), 24.0 * sunset, 5.0),
        ((0, 2), 2.0 * fgii, 5.0),
        ((2, 1), 192.0 * gamma, 5.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for ((a, b), expected, limit) in checks {
        let e = report.estimate(a, b).expect("requested target");
        let z = e.z_score(expected);
        ok &= z <= limit;
        parts.push(format!("E[X^{a}Y^{b}] {:.4} vs {expected:.4} z {z:.2}", e.mean));
    }
    Ok((ok, parts.join(", ")))
}

fn borel_suite() -> Outcome {
    let mut parts = Vec::new();
    let mut worst_pade: f64 = 0.0;
    for eps in [0.05, 0.1, 0.2] {
        let z = borel::z_quadrature(eps)?;
        let r = borel::pade_borel(eps, 20, None)?;
        worst_pade = worst_pade.max(((r.value - z) / z).abs());
    }
    let pade_ok = worst_pade <= 1e-4;
    parts.push(format!("pade gap {worst_pade:.2e}"));

    let z0 = (borel::z_quadrature(0.0)? - borel::sqrt_two_pi()).abs();
    let z0_ok = z0 <= 1e-10;
    parts.push(format!("Z(0) error {z0:.2e}"));

    let a = borel::asymptotic_coeffs(41)?;
    let route_ok = a.route_gap <= 1e-12;
    parts.push(format!("route gap {:.2e}", a.route_gap));

    let approximant = borel::BorelPade::new(20, borel::default_degrees(20))?;
    let pole = approximant.nearest_pole().expect("denominator has roots");
    let pole_ok = pole.im.abs() < 1e-9 && (pole.re + 0.25).abs() <= 0.025;
    parts.push(format!("nearest pole {:.5}{:+.1e}i", pole.re, pole.im));

    let sokal = borel::sokal_scan(15, &[0.05, 0.1, 0.2])?;
    parts.push(format!("sokal bound {} (fitted r {:.2})", sokal.passed, sokal.r));
    Ok((pade_ok && z0_ok && route_ok && pole_ok && sokal.passed, parts.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_line() {
        let r = CriterionResult {
            id: 5,
            name: "exponential deformation",
            passed: true,
            detail: "ok".into(),
            seconds: 0.25,
        };
        assert_eq!(r.to_string(), "criterion  5 PASS exponential deformation (0.2s): ok");
        assert!(!run(42, Level::Fast).passed);
    }
}
