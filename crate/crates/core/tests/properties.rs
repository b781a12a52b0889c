use std::collections::VecDeque;

use proptest::prelude::*;

use oddgirth::bounds::{
    broad_spectrum_threshold, classify_main_case, csikvari_bound, gamma5_prime_value,
    high_lambda1_threshold, main_case_threshold, MainCase,
};
use oddgirth::gamma5prime::{
    extremal_measure, f_of_s, maximize_objective, objective_g, power_sum_max_bruteforce,
    power_sum_max_closed_form, relaxed_objective, solve_simple,
};
use oddgirth::graph::{blow_up, odd_girth, Graph, OddGirth};
use oddgirth::graph6::{encode_graph6, parse_graph6};
use oddgirth::odd_poly::{
    chebyshev_t, high_lambda1_polynomial, odd_poly_spectrum_sum, threshold_partition, OddPolynomial,
};
use oddgirth::spectral::{
    bipartiteness_measure, check_trace_identities, eigenvalues, power_sum,
    signless_laplacian_min_eig, trace_power,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n)
        .prop_flat_map(|n| {
            let slots = n * n.saturating_sub(1) / 2;
            (Just(n), proptest::collection::vec(any::<bool>(), slots))
        })
        .prop_map(|(n, bits)| {
            let mut g = Graph::empty(n);
            let mut it = bits.into_iter();
            for v in 1..n {
                for u in 0..v {
                    if it.next().unwrap() {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
}

/// Graphs with at least one edge (vertices 0 and 1 are always adjacent).
fn nonempty_graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n)
        .prop_filter("needs two vertices", |g| g.n() >= 2)
        .prop_map(|mut g| {
            if !g.has_edge(0, 1) {
                g.add_edge(0, 1).unwrap();
            }
            g
        })
}

/// Sparse graphs on up to 62 vertices for graph6 round trips.
fn sparse_graph_strategy() -> impl Strategy<Value = Graph> {
    (0usize..=62)
        .prop_flat_map(|n| {
            let edges = if n < 2 {
                proptest::collection::vec((0..1usize, 0..1usize), 0).boxed()
            } else {
                proptest::collection::vec((0..n, 0..n), 0..3 * n).boxed()
            };
            (Just(n), edges)
        })
        .prop_map(|(n, edges)| {
            let mut g = Graph::empty(n);
            for (u, v) in edges {
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
}

/// Reference graph6 encoder working on an explicit bit string.
fn reference_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut bits = Vec::new();
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(false);
    }
    let mut out = String::new();
    out.push((63 + n as u8) as char);
    for group in bits.chunks(6) {
        let v = group.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8);
        out.push((63 + v) as char);
    }
    out
}

/// Shortest odd closed walk via boolean matrix powers: the odd girth.
fn odd_girth_by_powers(g: &Graph) -> OddGirth {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    let mul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|l| a[i][l] && b[l][j])).collect())
            .collect()
    };
    let sq = mul(&adj, &adj);
    let mut p = adj.clone();
    // an odd cycle, if any, has length at most n
    let mut j = 1;
    while j <= n {
        if (0..n).any(|i| p[i][i]) {
            return OddGirth::Finite(j);
        }
        p = mul(&p, &sq);
        j += 2;
    }
    OddGirth::Infinite
}

#[allow(clippy::needless_range_loop)]
fn is_bipartite_by_colouring(g: &Graph) -> bool {
    let n = g.n();
    let mut colour = vec![None; n];
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for v in 0..n {
                if g.has_edge(u, v) {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        _ => {}
                    }
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn graph6_round_trip(g in sparse_graph_strategy()) {
        let text = encode_graph6(&g).unwrap();
        prop_assert_eq!(&text, &reference_graph6(&g));
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn odd_girth_matches_oracles(g in graph_strategy(9)) {
        let og = odd_girth(&g);
        prop_assert_eq!(og, odd_girth_by_powers(&g));
        prop_assert_eq!(og.is_infinite(), is_bipartite_by_colouring(&g));
        if let OddGirth::Finite(k) = og {
            prop_assert!(k % 2 == 1 && k >= 3);
        }
    }

    #[test]
    fn trace_identities_iff_odd_girth(g in graph_strategy(8), half in 1usize..6) {
        let k = 2 * half + 1;
        prop_assert_eq!(check_trace_identities(&g, k).unwrap(), odd_girth(&g).at_least(k));
    }

    #[test]
    fn power_sums_match_traces(g in graph_strategy(8), j in 1u32..8) {
        prop_assume!(g.n() > 0);
        let s = eigenvalues(&g).unwrap();
        let exact = trace_power(&g, j as usize).unwrap() as f64;
        let scale = s.largest().unwrap().abs().max(1.0).powi(j as i32) * g.n() as f64;
        prop_assert!((power_sum(&s, j) - exact).abs() <= 1e-9 * scale);
    }

    #[test]
    fn spectral_inequalities(g in graph_strategy(9)) {
        prop_assume!(g.n() > 0);
        let s = eigenvalues(&g).unwrap();
        let n = g.n() as f64;
        let (l1, ln) = (s.largest().unwrap(), s.smallest().unwrap());
        let tol = 1e-9 * n.max(1.0);
        prop_assert!(2.0 * g.edge_count() as f64 <= n * l1 + tol);
        prop_assert!(ln.abs() <= l1 + tol);
        prop_assert!(power_sum(&s, 1).abs() <= tol);
        prop_assert!((power_sum(&s, 2) - 2.0 * g.edge_count() as f64).abs() <= tol);
        let m = bipartiteness_measure(&s).unwrap();
        prop_assert!(m >= -1e-12);
        let q = signless_laplacian_min_eig(&g).unwrap();
        prop_assert!(q >= -1e-9);
        if odd_girth(&g).at_least(5) {
            prop_assert!(m <= gamma5_prime_value() + 1e-9);
            prop_assert!(m <= csikvari_bound() + 1e-9);
        }
        if g.is_regular() {
            prop_assert!((q - (l1 + ln)).abs() <= 1e-8);
        }
    }

    #[test]
    fn blow_up_invariance(g in graph_strategy(7), m in 2usize..4) {
        prop_assume!(g.n() > 0);
        let b = blow_up(&g, m).unwrap();
        prop_assert_eq!(odd_girth(&b), odd_girth(&g));
        let mg = bipartiteness_measure(&eigenvalues(&g).unwrap()).unwrap();
        let mb = bipartiteness_measure(&eigenvalues(&b).unwrap()).unwrap();
        prop_assert!((mg - mb).abs() <= 1e-8);
    }

    #[test]
    fn odd_polynomials_are_odd(coeffs in proptest::collection::vec(-3.0f64..3.0, 0..8), x in -2.0f64..2.0) {
        let p = OddPolynomial::from_odd_coeffs(coeffs);
        let (a, b) = (p.evaluate(x), p.evaluate(-x));
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn monomial_sum_is_power_sum(g in graph_strategy(8), half in 0usize..5) {
        prop_assume!(g.n() > 0);
        let j = 2 * half + 1;
        let s = eigenvalues(&g).unwrap();
        let via_poly = odd_poly_spectrum_sum(&s, &OddPolynomial::monomial(j).unwrap());
        let scale = s.largest().unwrap().abs().max(1.0).powi(j as i32) * g.n() as f64;
        prop_assert!((via_poly - power_sum(&s, j as u32)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn high_lambda1_polynomial_grid_bound(g in nonempty_graph_strategy(8), half in 3usize..22) {
        let k = 2 * half + 1;
        let s = eigenvalues(&g).unwrap();
        let part = threshold_partition(&s).unwrap();
        // the bound uses |x|^(e-2) <= mu^(e-2), which needs e >= 3
        prop_assume!(k >= 4 * part.d_minus + 5);
        let p = high_lambda1_polynomial(&s, k).unwrap();
        let l1 = s.largest().unwrap();
        for i in 0..=200 {
            let x = -part.mu + 2.0 * part.mu * i as f64 / 200.0;
            let bound = x * x * l1.powi(k as i32 - 4) * 2f64.powi(-(k as i32) + 4 * part.d_minus as i32 + 4);
            prop_assert!(p.evaluate(x).abs() <= bound * (1.0 + 1e-9) + 1e-300, "k {}, x {}", k, x);
        }
    }

    #[test]
    fn chebyshev_bounded_below(half in 0usize..60, x in -1.0f64..50.0) {
        let j = 2 * half + 1;
        prop_assert!(chebyshev_t(j, x) >= -1.0 - 1e-12);
        if x <= 1.0 {
            prop_assert!(chebyshev_t(j, x).abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn objective_chain(s in 1.0f64..200.0) {
        let f = f_of_s(s).unwrap();
        prop_assert!(f <= s + 1e-12);
        let g = objective_g(s).unwrap();
        let r = relaxed_objective(s);
        prop_assert!(g <= r + 1e-15);
        prop_assert!(r <= 3.0 - 2.0 * 2f64.sqrt() + 1e-15);
        prop_assert!(g <= gamma5_prime_value() + 1e-12);
    }

    #[test]
    fn bruteforce_never_beats_closed_form(ell in 1usize..4, frac in 0.0f64..1.0, alpha in 1.1f64..3.0) {
        let s = frac * ell as f64;
        let brute = power_sum_max_bruteforce(ell, s, alpha, 120).unwrap();
        let closed = power_sum_max_closed_form(s, alpha).unwrap();
        prop_assert!(brute <= closed + 1e-9);
        prop_assert!(brute >= closed - 1e-3);
    }

    #[test]
    fn solve_simple_hits_targets(n in 1usize..=50, c in 0.01f64..20.0, t in 0.0f64..=1.0) {
        let lo = c.powi(3) / (n * n) as f64;
        let d = lo + t * (c.powi(3) - lo);
        let x = solve_simple(n, c, d).unwrap();
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        let sum: f64 = x.iter().sum();
        prop_assert!((sum - c).abs() <= 64.0 * f64::EPSILON * c);
        let cubes: f64 = x.iter().map(|v| v.powi(3)).sum();
        prop_assert!((cubes - d).abs() <= 1e-10 * d);
    }

    #[test]
    fn main_case_matches_thresholds(half in 50usize..500, n in 1usize..100_000, r in 0.0f64..1.0) {
        let k = 2 * half + 1;
        let lambda1 = r * n as f64;
        let case = classify_main_case(k, lambda1, n);
        let expected = if lambda1 < broad_spectrum_threshold(k, n) {
            MainCase::SmallLambda1
        } else if lambda1 < main_case_threshold(k, n) {
            MainCase::BroadSpectrum
        } else {
            MainCase::HighLambda1
        };
        prop_assert_eq!(case, expected);
        prop_assert!(main_case_threshold(k, n) >= high_lambda1_threshold(k, n));
    }
}

#[test]
fn extremal_sandwich() {
    let best = maximize_objective(100.0, 1000).unwrap();
    let target = gamma5_prime_value();
    for eps in [0.5, 0.1, 0.01, 0.001, 1e-6] {
        assert!(extremal_measure(eps) <= target);
    }
    assert!(target <= best.value + 1e-12);
}
