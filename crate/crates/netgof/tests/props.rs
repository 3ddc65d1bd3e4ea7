//! Property tests for the structural invariants: edge-list round trips,
//! the distinct-triple trace identity, and successive-projection geometry.

use nalgebra::{DMatrix, DVector};
use netgof::cycles::u_n3;
use netgof::fitters::{ModelTag, ProbMatrix};
use netgof::graph::{edge_list_string, parse_edge_list, Network};
use netgof::vertex_hunting::sp;
use proptest::prelude::*;

fn edge_set_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (3..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let m = pairs.len();
        (
            Just(n),
            proptest::collection::vec(0..m, 1..=m.min(30)).prop_map(move |idx| {
                idx.into_iter().map(|t| pairs[t]).collect::<Vec<_>>()
            }),
        )
    })
}

fn brute_force_triple_sum(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut total = 0.0;
    for i1 in 0..n {
        for i2 in 0..n {
            if i2 == i1 {
                continue;
            }
            for i3 in 0..n {
                if i3 == i1 || i3 == i2 {
                    continue;
                }
                total += m[(i1, i2)] * m[(i2, i3)] * m[(i3, i1)];
            }
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip((n, edges) in edge_set_strategy(12)) {
        let (net, _) = Network::from_edges(n, edges).unwrap();
        let text = edge_list_string(&net);
        let again = parse_edge_list(&text).unwrap().network;
        // Node count can shrink if trailing nodes are isolated; compare the
        // edge sets, which must round-trip exactly.
        let a: Vec<_> = net.edges().collect();
        let b: Vec<_> = again.edges().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn degree_sum_is_twice_edge_count((n, edges) in edge_set_strategy(16)) {
        let (net, _) = Network::from_edges(n, edges).unwrap();
        let sum: usize = (0..net.n()).map(|i| net.degree(i)).sum();
        prop_assert_eq!(sum, 2 * net.edge_count());
    }

    #[test]
    fn trace_identity_matches_triple_sum(
        (n, edges) in edge_set_strategy(10),
        seed in 0u64..1000,
    ) {
        let (net, _) = Network::from_edges(n, edges).unwrap();
        let n = net.n();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        use rand::{Rng, SeedableRng};
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let mut a = DMatrix::zeros(n, n);
        for (i, j) in net.edges() {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        let want = brute_force_triple_sum(&(&a - &m));
        let omega = ProbMatrix::from_dense(m, ModelTag::Dcmm).unwrap();
        let got = u_n3(&net, &omega).unwrap();
        prop_assert!((got - want).abs() <= 1e-8 * want.abs().max(1.0));
    }

    #[test]
    fn sp_is_permutation_equivariant(seed in 0u64..500) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let n = 20;
        let k = 3;
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..k).map(|_| rng.random::<f64>()).collect())
            .collect();
        let base = sp(&points, k).unwrap();

        // Reverse the input order and hunt again.
        let reversed: Vec<Vec<f64>> = points.iter().rev().cloned().collect();
        let rev = sp(&reversed, k).unwrap();

        let mut a: Vec<Vec<String>> = base
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| format!("{x:.12}")).collect())
            .collect();
        let mut b: Vec<Vec<String>> = rev
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| format!("{x:.12}")).collect())
            .collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sp_hull_contains_exact_mixtures(seed in 0u64..500) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let k = 3;
        // Random affinely independent vertices, then exact mixtures.
        let verts: Vec<Vec<f64>> = (0..k)
            .map(|c| {
                let mut v: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
                v[c] += 2.0;
                v
            })
            .collect();
        let mut points = verts.clone();
        for _ in 0..30 {
            let mut w: Vec<f64> = (0..k).map(|_| rng.random::<f64>().max(1e-9)).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let mut p = vec![0.0; k];
            for (c, v) in verts.iter().enumerate() {
                for (x, y) in p.iter_mut().zip(v) {
                    *x += w[c] * y;
                }
            }
            points.push(p);
        }
        let vs = sp(&points, k).unwrap();
        // Barycentric coordinates of every input point w.r.t. the returned
        // vertices stay within the simplex up to 1e-9 slack.
        let mut bary = DMatrix::zeros(k, k);
        for (c, v) in vs.vertices.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                bary[(r, c)] = *x;
            }
        }
        // Affine system: subtract the last vertex.
        let vk = vs.vertices[k - 1].clone();
        let mut mat = DMatrix::zeros(k, k - 1);
        for c in 0..(k - 1) {
            for r in 0..k {
                mat[(r, c)] = bary[(r, c)] - vk[r];
            }
        }
        let pseudo = (mat.transpose() * &mat).try_inverse().unwrap() * mat.transpose();
        for p in &points {
            let rhs = DVector::from_iterator(k, p.iter().zip(&vk).map(|(x, y)| x - y));
            let w_head = &pseudo * rhs;
            let mut w_full: Vec<f64> = w_head.iter().copied().collect();
            w_full.push(1.0 - w_head.sum());
            for &w in &w_full {
                prop_assert!(w >= -1e-9, "barycentric coordinate {w}");
            }
        }
    }
}
