use rand::Rng;

use super::{
    check_init, count_improving_moves_global, Move, NodeDraw, NodePicker, Recorder, SearchOutcome,
};
use crate::error::Result;
use crate::{Configuration, Landscape};

/// Centralized search: one uniformly drawn node per step, flip kept iff
/// overall fitness strictly rises. Stops early once no single flip improves.
pub fn run_cs<R: Rng + ?Sized>(
    landscape: &Landscape,
    init: &Configuration,
    max_steps: usize,
    draw: NodeDraw,
    rng: &mut R,
) -> Result<SearchOutcome> {
    check_init(landscape, init)?;
    let n = landscape.n();
    let mut rec = Recorder::new(landscape, init, max_steps.min(4096));
    let mut current = init.clone();
    let mut fitness = rec.best_fitness;
    let mut available = count_improving_moves_global(landscape, &current);

    let mut picker = NodePicker::new(draw, n);

    for _ in 0..max_steps {
        if available == 0 {
            rec.terminated_early = true;
            break;
        }
        let p = picker.next(rng);
        if landscape.flip_delta(&current, p) > 0.0 {
            current.flip(p);
            picker.reset();
            fitness = landscape.configuration_fitness(&current);
            available = count_improving_moves_global(landscape, &current);
            rec.moves.push(Move {
                step: rec.step_index(),
                node: p,
            });
            rec.offer(&current, fitness);
        }
        rec.record(fitness, available);
    }
    Ok(rec.finish(current))
}
