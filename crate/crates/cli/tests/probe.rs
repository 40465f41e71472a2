use std::time::Instant;

use cutbench_core::qaoa::{derive_fixed_angles, estimate_gamma, GammaRoute};
use cutbench_core::tensor::cost_second_moment;
use cutbench_core::{graph, EngineConfig};

#[test]
#[ignore]
fn probe_second_moment() {
    let cfg = EngineConfig::default();
    let d = derive_fixed_angles(3, 3, 4, 7, &cfg).unwrap();
    let angles = d.angles.angles().unwrap();
    for n in [64u32, 128] {
        let g = graph::generate_regular(n, 3, 5).unwrap();
        let t = Instant::now();
        let m = cost_second_moment(&g, &angles, &cfg).unwrap();
        println!(
            "n={n}: second moment {:.4} in {:.2}s",
            m.second_moment,
            t.elapsed().as_secs_f64()
        );
    }
}

#[test]
#[ignore]
fn probe_gamma_tensor() {
    let cfg = EngineConfig::default();
    let d = derive_fixed_angles(3, 3, 4, 7, &cfg).unwrap();
    let angles = d.angles.angles().unwrap();
    let t = Instant::now();
    let rep = estimate_gamma(3, &angles, &[64, 128, 256], 3, GammaRoute::Tensor, 41, &cfg).unwrap();
    for e in &rep.per_size {
        println!("n={} gamma={:.4}", e.n, e.gamma);
    }
    println!(
        "pooled {:.4} spread {:.4} in {:.1}s",
        rep.pooled,
        rep.max_rel_spread,
        t.elapsed().as_secs_f64()
    );
}
