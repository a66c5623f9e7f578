//! Exact identities of the Moran dynamics checked by Monte Carlo.

use mwt_core::branching::{simulate_q, QOutcome};
use mwt_core::limits::special::factorial;
use mwt_core::model::{
    observe_trajectory, simulate_single_mutant, simulate_tau, simulate_two_type_occupation,
    LineageOutcome, SimBudget,
};
use mwt_core::rng::replicate_rng;

const Z99: f64 = 2.575_829_303_548_901;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn tau_one_mean_is_one_over_n_mu() {
    let taus: Vec<f64> = (0..10_000)
        .map(|i| {
            simulate_tau(10, 0.1, 1, SimBudget::default(), &mut replicate_rng(71, i))
                .unwrap()
                .tau
        })
        .collect();
    let (mean, se) = mean_and_se(&taus);
    assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean} se {se}");
}

#[test]
fn occupation_for_two_individuals_is_unit_exponential() {
    let xs: Vec<f64> = (0..20_000)
        .map(|i| {
            let run = simulate_two_type_occupation(2, &mut replicate_rng(72, i)).unwrap();
            assert_eq!(run.occupation[1], run.absorb_time);
            run.absorb_time
        })
        .collect();
    let (mean, se) = mean_and_se(&xs);
    assert!((mean - 1.0).abs() <= 3.0 * se);
    let below = xs.iter().filter(|&&x| x <= 1.0).count() as f64 / xs.len() as f64;
    let p = 1.0 - (-1.0f64).exp();
    assert!((below - p).abs() <= Z99 * (p * (1.0 - p) / xs.len() as f64).sqrt());
}

#[test]
fn fixation_and_occupation_small_population() {
    let n = 20u64;
    let reps = 40_000u64;
    let mut fixed = 0u64;
    let mut occ = vec![Vec::with_capacity(reps as usize); n as usize];
    for i in 0..reps {
        let run = simulate_two_type_occupation(n, &mut replicate_rng(73, i)).unwrap();
        fixed += run.fixated as u64;
        for (slot, &o) in occ.iter_mut().zip(&run.occupation).skip(1) {
            slot.push(o);
        }
        assert_eq!(run.occupation[0], 0.0);
        assert_eq!(run.occupation[n as usize], 0.0);
    }
    let p = 1.0 / n as f64;
    let p_hat = fixed as f64 / reps as f64;
    assert!((p_hat - p).abs() <= Z99 * (p * (1.0 - p) / reps as f64).sqrt());
    for k in [1usize, 2, 5, 10, 19] {
        let (mean, se) = mean_and_se(&occ[k]);
        assert!(
            (mean - 1.0 / k as f64).abs() <= Z99 * se,
            "k={k}: {mean} +- {se}"
        );
    }
}

#[test]
fn type_counts_follow_poisson_mutation_profile() {
    // Every lineage accumulates mutations at rate mu whatever the replacements,
    // so E[X_k(t)] = N e^{-mu t} (mu t)^k / k! for k < m.
    let (n, mu, m) = (50u64, 0.1, 3usize);
    let grid = [1.0, 5.0, 10.0];
    let reps = 4_000u64;
    let mut rows = vec![vec![Vec::new(); m + 1]; grid.len()];
    for i in 0..reps {
        let obs = observe_trajectory(n, mu, m, 10.0, &grid, &mut replicate_rng(74, i)).unwrap();
        for (g, row) in obs.iter().enumerate() {
            assert_eq!(row.iter().sum::<u64>(), n);
            for (slot, &c) in rows[g].iter_mut().zip(row) {
                slot.push(c as f64);
            }
        }
    }
    for (g, &t) in grid.iter().enumerate() {
        let x = mu * t;
        for (k, xs) in rows[g].iter().take(m).enumerate() {
            let want = n as f64 * (-x).exp() * x.powi(k as i32) / factorial(k as u32);
            let (mean, se) = mean_and_se(xs);
            assert!(
                (mean - want).abs() <= 4.0 * se,
                "t={t} k={k}: {mean} vs {want} (se {se})"
            );
        }
        // The lumped top level holds everyone with >= m mutations.
        let bound = n as f64 * x.powi(m as i32) / factorial(m as u32);
        let (mean, se) = mean_and_se(&rows[g][m]);
        assert!(mean <= bound + 3.0 * se, "t={t}: {mean} > {bound}");
    }
}

#[test]
fn single_mutant_success_matches_branching_oracle() {
    // Large N, small mutant lineages: the Moran lineage behaves like the
    // critical branching process.
    let (n, mu, m) = (10_000u64, 0.01, 2usize);
    let reps = 40_000u64;
    let budget = SimBudget::default();
    let moran = (0..reps)
        .filter(|&i| {
            simulate_single_mutant(n, mu, m, budget, &mut replicate_rng(75, i)).unwrap()
                == LineageOutcome::TopTypeBorn
        })
        .count() as f64
        / reps as f64;
    let branching = (0..reps)
        .filter(|&i| {
            simulate_q(m as u32, mu, budget, &mut replicate_rng(76, i)).unwrap()
                == QOutcome::TypeMBorn
        })
        .count() as f64
        / reps as f64;
    let se = ((moran * (1.0 - moran) + branching * (1.0 - branching)) / reps as f64).sqrt();
    assert!(
        (moran - branching).abs() <= Z99 * se,
        "{moran} vs {branching}"
    );
}

#[test]
fn single_mutant_edge_cases() {
    let b = SimBudget::default();
    let mut rng = replicate_rng(77, 0);
    assert_eq!(
        simulate_single_mutant(10, 0.1, 1, b, &mut rng).unwrap(),
        LineageOutcome::TopTypeBorn
    );
    // Without mutation the lineage is lost or fixes; fixation then stalls.
    let mut lost = 0;
    for i in 0..200 {
        match simulate_single_mutant(10, 0.0, 2, b, &mut replicate_rng(77, i)) {
            Ok(LineageOutcome::Lost) => lost += 1,
            Err(_) => {}
            other => panic!("{other:?}"),
        }
    }
    assert!(lost > 150);
    let tight = SimBudget::new(1, f64::INFINITY).unwrap();
    let out = simulate_single_mutant(1000, 1e-3, 3, tight, &mut replicate_rng(78, 0)).unwrap();
    assert_ne!(out, LineageOutcome::TopTypeBorn);
}
