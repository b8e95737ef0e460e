use rand::Rng;

use super::{check_init, count_improving_moves_global, Move, PuParams, Recorder, SearchOutcome};
use crate::error::Result;
use crate::{Configuration, Landscape};

/// Parallel updating.
///
/// Each generation draws one uniform per node to form the candidate set,
/// keeps the candidates whose solo flip from the generation's starting
/// configuration strictly improves overall fitness, and flips them together.
/// The simultaneous flip can lower fitness, so the best configuration seen at
/// a generation boundary is reported.
pub fn run_pu<R: Rng + ?Sized>(
    landscape: &Landscape,
    init: &Configuration,
    params: PuParams,
    rng: &mut R,
) -> Result<SearchOutcome> {
    check_init(landscape, init)?;
    let n = landscape.n();
    let mut rec = Recorder::new(landscape, init, params.max_generations());
    let mut current = init.clone();
    let mut fitness = rec.best_fitness;
    let mut available = count_improving_moves_global(landscape, &current);
    let mut allowed = Vec::with_capacity(n);

    for _ in 0..params.max_generations() {
        if available == 0 {
            rec.terminated_early = true;
            break;
        }
        allowed.clear();
        for p in 0..n {
            let candidate = rng.gen::<f64>() < params.tau();
            if candidate && landscape.flip_delta(&current, p) > 0.0 {
                allowed.push(p);
            }
        }
        if !allowed.is_empty() {
            let step = rec.step_index();
            for &p in &allowed {
                current.flip(p);
                rec.moves.push(Move { step, node: p });
            }
            fitness = landscape.configuration_fitness(&current);
            available = count_improving_moves_global(landscape, &current);
            rec.offer(&current, fitness);
        }
        rec.record(fitness, available);
    }
    Ok(rec.finish(current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rng::WalkRng;
    use rand::SeedableRng;

    #[test]
    fn vanishing_tau_leaves_init_unchanged() {
        let l = Landscape::generate(12, 3, 4).unwrap();
        let mut rng = WalkRng::seed_from_u64(4);
        let init = Configuration::random(12, &mut rng).unwrap();
        let params = PuParams::new(f64::MIN_POSITIVE, 50).unwrap();
        let out = run_pu(&l, &init, params, &mut rng).unwrap();
        assert_eq!(out.best, init);
        assert_eq!(out.terminal, init);
        assert!(out.moves.is_empty());
    }

    #[test]
    fn near_certain_tau_with_one_improving_node_is_a_single_flip() {
        let l = Landscape::generate(10, 2, 21).unwrap();
        // find a configuration with exactly one improving neighbour
        let (init, node) = (0u32..1 << 10)
            .find_map(|i| {
                let c = Configuration::from_bits((0..10).map(|b| ((i >> b) & 1) as u8).collect())
                    .unwrap();
                let ups: Vec<usize> = (0..10)
                    .filter(|&p| {
                        oracle::naive_fitness(&l, &c.flipped(p)) > oracle::naive_fitness(&l, &c)
                    })
                    .collect();
                (ups.len() == 1).then(|| (c, ups[0]))
            })
            .expect("some configuration has a single uphill neighbour");
        let params = PuParams::new(1.0 - 1e-12, 1).unwrap();
        let out = run_pu(&l, &init, params, &mut WalkRng::seed_from_u64(1)).unwrap();
        assert_eq!(out.terminal, init.flipped(node));
        assert_eq!(out.best, init.flipped(node));
        assert_eq!(out.moves, vec![Move { step: 0, node }]);
    }

    #[test]
    fn local_optimum_start_terminates() {
        let l = Landscape::generate(10, 2, 8).unwrap();
        let (opt, _) = oracle::enumerate_global_optimum(&l).unwrap();
        let out = run_pu(
            &l,
            &opt,
            PuParams::default(),
            &mut WalkRng::seed_from_u64(8),
        )
        .unwrap();
        assert!(out.terminated_early);
        assert_eq!(out.steps_executed, 0);
        assert_eq!(out.best, opt);
    }

    #[test]
    fn every_flipped_node_improves_alone_from_generation_start() {
        for seed in 0..20 {
            let l = Landscape::generate(16, 6, seed).unwrap();
            let mut rng = WalkRng::seed_from_u64(seed + 7);
            let init = Configuration::random(16, &mut rng).unwrap();
            let out = run_pu(&l, &init, PuParams::default(), &mut rng).unwrap();
            let mut state = init.clone();
            let mut i = 0;
            while i < out.moves.len() {
                let step = out.moves[i].step;
                let start = state.clone();
                let base = l.configuration_fitness(&start);
                while i < out.moves.len() && out.moves[i].step == step {
                    let p = out.moves[i].node;
                    assert!(l.configuration_fitness(&start.flipped(p)) > base);
                    state.flip(p);
                    i += 1;
                }
            }
            assert_eq!(state, out.terminal);
            let best_seen = out
                .fitness_trace
                .iter()
                .copied()
                .fold(l.configuration_fitness(&init), f64::max);
            assert_eq!(out.best_fitness, best_seen);
        }
    }
}
