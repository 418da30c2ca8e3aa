// scratch probe for pipeline scaling; removed before release
use std::time::Instant;
use svf_entropy::entropy::{estimate_entropy_interval, sft_entropy, EstimateParams};
use svf_entropy::num::{parse_rat, Rat};
use svf_entropy::interval::IntervalSvf;

fn rat(s: &str) -> Rat {
    parse_rat(s).unwrap()
}

fn diamond() -> IntervalSvf {
    IntervalSvf::new(
        vec![
            ((rat("0"), rat("1/2")), (rat("1/2"), rat("1"))),
            ((rat("0"), rat("1/2")), (rat("1/2"), rat("0"))),
            ((rat("1/2"), rat("0")), (rat("1"), rat("1/2"))),
            ((rat("1/2"), rat("1")), (rat("1"), rat("1/2"))),
        ],
        vec![],
    )
    .unwrap()
}

fn lower_triangle(slices: usize) -> IntervalSvf {
    let mut segs = vec![
        ((rat("0"), rat("0")), (rat("1"), rat("1"))),
        ((rat("0"), rat("0")), (rat("1"), rat("0"))),
        ((rat("1"), rat("0")), (rat("1"), rat("1"))),
    ];
    for k in 1..slices {
        let x = Rat::new((k as i64).into(), (slices as i64).into());
        segs.push(((x.clone(), rat("0")), (x.clone(), x.clone())));
    }
    IntervalSvf::new(segs, vec![]).unwrap()
}

fn main() {
    let eps: Vec<f64> = (2..=6).map(|k| 2f64.powi(-k)).collect();

    let t = Instant::now();
    let d = diamond();
    let rel = d.discretize(257).unwrap();
    println!("discretize diamond 257: {:?}", t.elapsed());
    let rows: Vec<usize> = (0..257).map(|i| rel.successors(i).len()).collect();
    println!(
        "row sizes: min {} max {} (row 64: {:?})",
        rows.iter().min().unwrap(),
        rows.iter().max().unwrap(),
        rel.successors(64)
    );
    let t = Instant::now();
    println!("sft(diamond@257) = {:.6} ({:?})", sft_entropy(&rel), t.elapsed());

    let t = Instant::now();
    let params = EstimateParams::new(eps.clone(), 14);
    let report = estimate_entropy_interval(&d, 257, &params).unwrap();
    println!("diamond estimate: h = {:.6} ({:?})", report.h_estimate, t.elapsed());
    for b in &report.blocks {
        println!("  eps {:>8.5}: h_eps {:.6}", b.epsilon, b.h_eps);
    }

    let f2 = d.iterate(2).unwrap();
    let t = Instant::now();
    let report = estimate_entropy_interval(&f2, 257, &params).unwrap();
    println!("diamond^2 estimate: h = {:.6} ({:?})", report.h_estimate, t.elapsed());

    let tri = lower_triangle(256);
    let t = Instant::now();
    let params_tri = EstimateParams::new(eps.clone(), 4096);
    let report = estimate_entropy_interval(&tri, 257, &params_tri).unwrap();
    println!("triangle estimate (n_max 4096): h = {:.6} ({:?})", report.h_estimate, t.elapsed());
    for b in &report.blocks {
        println!("  eps {:>8.5}: h_eps {:.6}", b.epsilon, b.h_eps);
    }
}
