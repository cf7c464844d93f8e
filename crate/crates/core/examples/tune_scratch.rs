// Scratch diagnostics for fitting zoo constants. Not part of the deliverable.

use wsnip_core::atoms::Configuration;
use wsnip_core::datagen::{build_dataset, DatasetSpec};
use wsnip_core::eip::{default_eip_set, default_oracle, eip_energy};

fn dimer(r: f64) -> Configuration {
    Configuration::new(
        vec![14, 14],
        vec![[0.0, 0.0, 0.0], [r, 0.0, 0.0]],
        None,
        [false; 3],
    )
    .unwrap()
}

fn main() {
    let oracle = default_oracle();

    // 0. exact per-atom tail contribution in ideal bulk -> epsilon scaling
    let bulk = wsnip_core::datagen::lattice::diamond_cell(5.431, [1, 1, 1]);
    let tail_bulk = eip_energy(&oracle.tail, &bulk).unwrap() / 8.0;
    let sw_bulk = eip_energy(&oracle.sw, &bulk).unwrap() / 8.0;
    let delta = -oracle.tail_weight * tail_bulk / sw_bulk;
    println!(
        "bulk: sw/atom = {:.4}, tail/atom = {:.4}, weighted = {:.4}, delta = {:.5}, eps_pert = {:.4}",
        sw_bulk,
        tail_bulk,
        oracle.tail_weight * tail_bulk,
        delta,
        2.1683 * (1.0 - delta)
    );

    // 1. oracle dimer minimum
    let mut best = (0.0, f64::INFINITY);
    let mut r = 1.8;
    while r < 3.2 {
        let e = oracle.energy(&dimer(r)).unwrap();
        if e < best.1 {
            best = (r, e);
        }
        r += 0.0005;
    }
    println!("oracle dimer minimum: r = {:.4}, E = {:.6}", best.0, best.1);

    // 2. fit morse (d, a, r0) to the oracle dimer curve over the bonding
    // region, with the low-cutoff taper applied
    let rs: Vec<f64> = (0..60).map(|i| 1.95 + 1.4 * i as f64 / 59.0).collect();
    let target: Vec<f64> = rs.iter().map(|&r| oracle.energy(&dimer(r)).unwrap()).collect();
    let cutoff = 3.5;
    let taper = |r: f64| {
        if r >= cutoff {
            0.0
        } else {
            0.5 * ((std::f64::consts::PI * r / cutoff).cos() + 1.0)
        }
    };
    let loss = |d: f64, a: f64, r0: f64| -> f64 {
        rs.iter()
            .zip(&target)
            .map(|(&r, &t)| {
                let e1 = (-a * (r - r0)).exp();
                let morse = d * (e1 * e1 - 2.0 * e1) * taper(r);
                let w = if (r - best.0).abs() < 0.5 { 4.0 } else { 1.0 };
                w * (morse - t) * (morse - t)
            })
            .sum()
    };
    let mut p = (2.3f64, 1.4f64, 2.38f64);
    let mut l = loss(p.0, p.1, p.2);
    let mut step = 0.2;
    for _ in 0..200 {
        let mut improved = false;
        for (di, ai, ri) in [
            (step, 0.0, 0.0),
            (-step, 0.0, 0.0),
            (0.0, step, 0.0),
            (0.0, -step, 0.0),
            (0.0, 0.0, step),
            (0.0, 0.0, -step),
        ] {
            let cand = (p.0 + di, p.1 + ai, p.2 + ri);
            let lc = loss(cand.0, cand.1, cand.2);
            if lc < l {
                p = cand;
                l = lc;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
    }
    println!("morse fit: d = {:.4}, a = {:.4}, r0 = {:.4}, loss = {:.6}", p.0, p.1, p.2, l);

    // 3. curve comparison per zoo member
    let set = default_eip_set();
    for model in &set.models {
        let max_dev_bond = rs
            .iter()
            .zip(&target)
            .filter(|(r, _)| (**r - best.0).abs() <= 0.15 * best.0)
            .map(|(&r, &t)| (eip_energy(model, &dimer(r)).unwrap() - t).abs() / 2.0)
            .fold(0.0f64, f64::max);
        println!("  {:>13}: max dev over bonding region = {:.4} eV/atom", model.name, max_dev_bond);
    }

    // 4. best-eip distribution on a small default-style dataset
    let mut spec = DatasetSpec::default_workload(1234);
    for s in &mut spec.samplers {
        s.count /= 5;
    }
    spec.m = 40;
    let ds = build_dataset(&spec, &set, &oracle).unwrap();
    let mut best_counts = vec![0usize; set.len()];
    let mut dummy = 0usize;
    let mut per_kind: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    for (i, &oe) in ds.sealed_oracle.iter().enumerate() {
        let n = ds.configs[i].len() as f64;
        let (mut bi, mut be) = (0usize, f64::INFINITY);
        for (pidx, &e) in ds.eip_table.energies[i].iter().enumerate() {
            let err = (e - oe).abs() / n;
            if err < be {
                be = err;
                bi = pidx;
            }
        }
        let kind = ds.kinds[i].as_str().to_string();
        let entry = per_kind.entry(kind).or_insert_with(|| vec![0; set.len() + 1]);
        if be > 0.1 {
            dummy += 1;
            entry[set.len()] += 1;
        } else {
            best_counts[bi] += 1;
            entry[bi] += 1;
        }
    }
    println!("best counts (c=0.1): {:?} dummy: {dummy} / {}", best_counts, ds.configs.len());
    println!("names: {:?}", set.names());
    for (k, v) in &per_kind {
        println!("  {k}: {v:?} (last = dummy)");
    }
}
