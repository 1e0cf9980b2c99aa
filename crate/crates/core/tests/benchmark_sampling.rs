use swarmopt::benchmarks::multimodal_objective;
use swarmopt::RngStream;

#[test]
fn multimodal_never_dips_below_minus_one() {
    for n in [1usize, 2, 5] {
        let mut rng = RngStream::new(n as u64);
        let mut x = vec![0.0; n];
        let mut lowest = f64::INFINITY;
        for _ in 0..1_000_000 {
            for v in x.iter_mut() {
                *v = rng.uniform(-10.0, 10.0).unwrap();
            }
            lowest = lowest.min(multimodal_objective(&x));
        }
        assert!(lowest >= -1.0 - 1e-9, "n={n}: {lowest}");
    }
}
