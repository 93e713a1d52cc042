#![allow(clippy::needless_range_loop)]

use matroid_bandit::environment::{feedback, Environment, WeightDistribution};
use matroid_bandit::greedy::greedy_max_basis;
use matroid_bandit::harness::simulate::{run_replication, SimulationOptions};
use matroid_bandit::matroid::Matroid;
use matroid_bandit::policy::{
    confidence_radius, epsilon_greedy_select, omm_select, BanditState, Learner, PolicySpec,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Replays `episodes` of OMM and returns the state plus every observation.
fn replay(
    m: &Matroid,
    env: &Environment,
    episodes: usize,
    seed: u64,
) -> (BanditState, Vec<Vec<(usize, f64)>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w0 = env.draw_full(&mut rng);
    let mut state = BanditState::initialize(&w0);
    let mut log: Vec<Vec<(usize, f64)>> = (0..m.len()).map(|e| vec![(e, w0[e])]).collect();
    for _ in 0..episodes {
        let basis = omm_select(m, &state).unwrap().basis;
        let w = env.draw_full(&mut rng);
        let fb = feedback(&w, &basis);
        for &(e, x) in fb.entries() {
            log[e].push((e, x));
        }
        state.update(&basis, &fb).unwrap();
    }
    (state, log)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn incremental_means_equal_batch_means(seed in 0u64..1000, episodes in 1usize..200) {
        let m = Matroid::graphic(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]).unwrap();
        let env = Environment::bernoulli(vec![0.9, 0.2, 0.6, 0.4, 0.7, 0.3]).unwrap();
        let (state, log) = replay(&m, &env, episodes, seed);
        for e in 0..m.len() {
            let batch = log[e].iter().map(|&(_, x)| x).sum::<f64>() / log[e].len() as f64;
            prop_assert!((state.means()[e] - batch).abs() < 1e-12);
            prop_assert_eq!(state.counts()[e], log[e].len() as u64);
        }
        // every episode adds exactly K observations to the L initial ones
        let total: u64 = state.counts().iter().sum();
        prop_assert_eq!(total, (m.len() + episodes * m.rank()) as u64);
        prop_assert_eq!(state.episode(), episodes as u64);
    }

    #[test]
    fn omm_is_greedy_on_its_ucbs(
        w0 in prop::collection::vec(0.0..1.0f64, 6),
        rounds in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 0..60),
        shift in -5.0..5.0f64,
    ) {
        let mut state = BanditState::initialize(&w0);
        for (i, mask) in rounds.iter().enumerate() {
            let played: Vec<usize> = (0..6).filter(|&e| mask[e]).collect();
            let w: Vec<f64> = (0..6).map(|e| ((i * 7 + e * 3) % 10) as f64 / 10.0).collect();
            state.update(&played, &feedback(&w, &played)).unwrap();
        }
        let ucb = state.ucb_values();
        for e in 0..6 {
            let want = state.means()[e] + confidence_radius(state.episode(), state.counts()[e]).unwrap();
            prop_assert!((ucb[e] - want).abs() < 1e-12);
        }
        let shifted: Vec<f64> = ucb.iter().map(|u| u + shift).collect();
        for k in 0..=6 {
            let m = Matroid::uniform(6, k).unwrap();
            let basis = omm_select(&m, &state).unwrap().basis;
            prop_assert_eq!(&basis, &greedy_max_basis(&m, &ucb));
            prop_assert_eq!(&basis, &greedy_max_basis(&m, &shifted));
        }
    }
}

#[test]
fn ucb_example_values() {
    // means (0.9, 0.1) after 100 and 1 observations, 100 episodes done
    let u0 = 0.9 + confidence_radius(100, 100).unwrap();
    let u1 = 0.1 + confidence_radius(100, 1).unwrap();
    assert!((u0 - 1.2035).abs() < 1e-4);
    assert!((u1 - 3.1349).abs() < 1e-4);
    assert_eq!(confidence_radius(1, 3).unwrap(), 0.0);
    assert!(confidence_radius(5, 0).is_err());
}

#[test]
fn epsilon_zero_is_greedy_on_means() {
    let m = Matroid::graphic(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
    let state = BanditState::initialize(&[0.3, 0.9, 0.6]);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let d = epsilon_greedy_select(&m, &state, 0.0, &mut rng).unwrap();
        assert_eq!(d.basis, vec![1, 2]);
    }
}

#[test]
fn epsilon_one_explores_uniformly_over_addable_items() {
    // uniform rank 1 on three items: each is picked about a third of the time
    let m = Matroid::uniform(3, 1).unwrap();
    let state = BanditState::initialize(&[0.9, 0.1, 0.1]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hits = [0usize; 3];
    let n = 30_000;
    for _ in 0..n {
        hits[epsilon_greedy_select(&m, &state, 1.0, &mut rng)
            .unwrap()
            .basis[0]] += 1;
    }
    for h in hits {
        assert!((h as f64 / n as f64 - 1.0 / 3.0).abs() < 0.02, "{hits:?}");
    }
}

#[test]
fn learners_reject_inconsistent_feedback() {
    let mut learner = Learner::new(PolicySpec::Omm, &[0.5, 0.5], &[]).unwrap();
    assert!(learner.observe(&[0], &feedback(&[0.1, 0.2], &[1])).is_err());
    assert!(learner
        .observe(&[0, 1], &feedback(&[0.1, 0.2], &[0]))
        .is_err());
    assert!(Learner::new(PolicySpec::EpsilonGreedy { epsilon: -0.5 }, &[0.5], &[]).is_err());
}

/// The learning policies never see the mean vector: handing the simulator a
/// completely different mean must not change a single decision.
#[test]
fn decisions_do_not_depend_on_the_mean_vector() {
    let m = Matroid::graphic(
        5,
        vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (1, 3)],
    )
    .unwrap();
    let env = Environment::bernoulli(vec![0.9, 0.2, 0.6, 0.4, 0.7, 0.3, 0.5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let decoy: Vec<f64> = (0..m.len()).map(|_| rng.random()).collect();
    for policy in [PolicySpec::Omm, PolicySpec::EpsilonGreedy { epsilon: 0.2 }] {
        let run = |mean: &[f64]| {
            run_replication(
                &m,
                &env,
                mean,
                policy,
                500,
                0,
                42,
                SimulationOptions::default(),
            )
            .unwrap()
        };
        let real = run(env.mean_vector());
        let fake = run(&decoy);
        let picks = |tr: &matroid_bandit::harness::ReplicationTrace| {
            tr.episodes
                .iter()
                .map(|e| e.items.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(picks(&real), picks(&fake), "{}", policy.label());
        let realized = |tr: &matroid_bandit::harness::ReplicationTrace| {
            tr.episodes
                .iter()
                .map(|e| e.realized_return)
                .collect::<Vec<_>>()
        };
        assert_eq!(realized(&real), realized(&fake));
    }
}

#[test]
fn replications_are_deterministic() {
    let m = Matroid::uniform(6, 2).unwrap();
    let env = Environment::bernoulli(vec![0.1, 0.5, 0.3, 0.8, 0.6, 0.2]).unwrap();
    for policy in [
        PolicySpec::Omm,
        PolicySpec::EpsilonGreedy { epsilon: 0.1 },
        PolicySpec::Optimal,
    ] {
        let a = run_replication(
            &m,
            &env,
            env.mean_vector(),
            policy,
            300,
            1,
            8,
            SimulationOptions::default(),
        )
        .unwrap();
        let b = run_replication(
            &m,
            &env,
            env.mean_vector(),
            policy,
            300,
            1,
            8,
            SimulationOptions::default(),
        )
        .unwrap();
        assert_eq!(a, b);
        let c = run_replication(
            &m,
            &env,
            env.mean_vector(),
            policy,
            300,
            1,
            9,
            SimulationOptions::default(),
        )
        .unwrap();
        if policy != PolicySpec::Optimal {
            assert_ne!(a.episodes, c.episodes);
        }
    }
}
