use ldp_pic::generators::{gen_bsbm, gen_dcbm, gen_dcbm_with_theta, gen_sbm, BsbmParams, DcbmParams, SbmParams};
use ldp_pic::Seed;

#[test]
fn flat_dcbm_and_sbm_agree_in_distribution() {
    let params = SbmParams::new(30, 30, 0.5, 0.1);
    let theta = vec![1.0; 60];
    let seeds = 200u64;
    let count = |f: &dyn Fn(u64) -> usize| -> (f64, f64) {
        let xs: Vec<f64> = (0..seeds).map(|s| f(s) as f64).collect();
        let m = xs.iter().sum::<f64>() / seeds as f64;
        let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (seeds - 1) as f64;
        (m, (var / seeds as f64).sqrt())
    };
    // different seed ranges so the comparison is not trivially draw-for-draw
    let (ms, es) = count(&|s| gen_sbm(&params, Seed(s)).unwrap().graph.edge_count());
    let (md, ed) = count(&|s| {
        gen_dcbm_with_theta(&params, &theta, Seed(10_000 + s))
            .unwrap()
            .graph
            .edge_count()
    });
    let combined = (es * es + ed * ed).sqrt();
    assert!((ms - md).abs() < 3.0 * combined, "{ms} vs {md} (se {combined})");
}

#[test]
fn dcbm_min_degree_respects_theta() {
    let (n1, n2) = (400, 400);
    let n = (n1 + n2) as f64;
    let params = DcbmParams {
        n1,
        n2,
        p: 0.4,
        q: 0.1,
        alpha: 2.5,
        theta_min: 5.0 * n.sqrt(),
        theta_max: None,
    };
    let mut ok = 0;
    for seed in 0..10 {
        let s = gen_dcbm(&params, Seed(seed)).unwrap();
        let mean = s.theta.iter().sum::<f64>() / n;
        let scaled: Vec<f64> = s.theta.iter().map(|t| t / mean).collect();
        // smallest expected degree implied by θ, less four standard deviations
        let expected_min = (0..scaled.len())
            .map(|i| {
                (0..scaled.len())
                    .filter(|&j| j != i)
                    .map(|j| {
                        let r = if (i < n1) == (j < n1) { params.p } else { params.q };
                        (scaled[i] * scaled[j] * r).min(1.0)
                    })
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        let bound = expected_min - 4.0 * expected_min.sqrt();
        let min_degree = s.graph.min_degree().unwrap() as f64;
        if min_degree >= bound {
            ok += 1;
        }
        assert!(s.theta.iter().all(|&t| t >= params.theta_min));
    }
    assert!(ok >= 9, "{ok} of 10 seeds");
}

#[test]
fn bsbm_parts_are_independent_sets() {
    let p = BsbmParams { a1: 20, a2: 15, b1: 10, b2: 25, p: 0.7, q: 0.3 };
    let pl = gen_bsbm(&p, Seed(3)).unwrap();
    let a_side = p.a1 + p.a2;
    for (u, v) in pl.graph.edges() {
        assert!(u < a_side && v >= a_side, "edge {u}-{v} inside one side");
    }
    let truth: Vec<usize> = pl.truth.members().collect();
    let expected: Vec<usize> = (0..p.a1).chain(a_side..a_side + p.b1).collect();
    assert_eq!(truth, expected);
}

#[test]
fn generators_are_deterministic() {
    let p = SbmParams::new(50, 50, 0.3, 0.1);
    assert_eq!(gen_sbm(&p, Seed(9)).unwrap().graph, gen_sbm(&p, Seed(9)).unwrap().graph);
    assert_ne!(gen_sbm(&p, Seed(9)).unwrap().graph, gen_sbm(&p, Seed(10)).unwrap().graph);
}
