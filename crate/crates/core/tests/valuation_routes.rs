use phi4_core::graph::named;
use phi4_core::valuation::{self, Cutoff};
use phi4_core::Multigraph;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn small_graphs() -> Vec<(&'static str, Multigraph)> {
    vec![
        ("fgii", named::double_edge()),
        ("bubble", named::bubble()),
        ("sunset", named::sunset()),
        ("triangle", named::triangle()),
        ("x2y", named::bubble_with_leg()),
        ("xy2", named::double_edge_chain()),
        ("fgvi", named::double_triangle()),
    ]
}

#[test]
fn spectral_matches_momentum_at_larger_cutoff() {
    let c = Cutoff(4);
    for (name, g) in [("sunset", named::sunset()), ("fgvi", named::double_triangle())] {
        let m = valuation::pi_momentum(&g, c).unwrap().value;
        let s = valuation::pi_spectral(&g, c).unwrap().value;
        assert!(rel(s, m) <= 1e-11, "{name}: {s} vs {m}");
    }
}

#[test]
fn grid_matches_momentum_up_to_three_vertices() {
    for n in 1..=4 {
        let c = Cutoff(n);
        for (name, g) in small_graphs() {
            let side = valuation::required_grid(&g, c);
            let m = valuation::pi_momentum(&g, c).unwrap().value;
            let q = valuation::pi_grid(&g, c, side).unwrap().value;
            assert!(rel(q, m) <= 1e-10, "{name} N={n}: {q} vs {m}");
        }
    }
}

#[test]
fn renormalised_values_stay_bounded_at_order_four() {
    let scan = valuation::bphz_boundedness_scan(4, &[2, 4, 6], 1e8).unwrap();
    assert_eq!(scan.rows.len(), 3);
    for row in &scan.rows {
        let vals: Vec<f64> = row.renormalised.iter().flatten().copied().collect();
        assert_eq!(vals.len(), 3, "{}", row.class);
        let raw: Vec<f64> = row.raw.iter().flatten().copied().collect();
        assert!(raw[2] > raw[0], "{}", row.class);
        let first = (vals[1] - vals[0]).abs() / vals[0].abs();
        let second = (vals[2] - vals[1]).abs() / vals[1].abs();
        assert!(second < first, "{}: {first} then {second}", row.class);
        assert_eq!(row.top_change, Some(second));
    }
}
