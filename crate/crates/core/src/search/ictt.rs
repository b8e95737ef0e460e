use rand::Rng;

use super::{
    check_init, count_improving_moves_subunit, subunit_flip_delta, Move, NodeDraw, NodePicker,
    Partition, Recorder, SearchOutcome, SubunitEval,
};
use crate::error::{param, Result};
use crate::{Configuration, Landscape};

/// Incremental changes, taking turns.
///
/// Each step flips a uniformly drawn node and keeps the flip iff the
/// evaluation sum of that node's sub-unit strictly rises, whatever happens to
/// overall fitness. The walked-to configuration is committed whenever its
/// overall fitness strictly exceeds the committed one; the final commitment
/// is the outcome. Stops early once no node can improve its own sub-unit.
pub fn run_ictt<R: Rng + ?Sized>(
    landscape: &Landscape,
    partition: &Partition,
    mode: SubunitEval,
    init: &Configuration,
    max_steps: usize,
    draw: NodeDraw,
    rng: &mut R,
) -> Result<SearchOutcome> {
    check_init(landscape, init)?;
    if partition.n() != landscape.n() {
        return param(format!(
            "partition covers {} nodes, landscape has {}",
            partition.n(),
            landscape.n()
        ));
    }
    let n = landscape.n();
    let mut rec = Recorder::new(landscape, init, max_steps.min(4096));
    let mut current = init.clone();
    let mut fitness = rec.best_fitness;
    let mut available = count_improving_moves_subunit(landscape, partition, mode, &current);

    let mut picker = NodePicker::new(draw, n);

    for _ in 0..max_steps {
        if available == 0 {
            rec.terminated_early = true;
            break;
        }
        let p = picker.next(rng);
        if subunit_flip_delta(landscape, partition, mode, &current, p) > 0.0 {
            current.flip(p);
            picker.reset();
            fitness = landscape.configuration_fitness(&current);
            available = count_improving_moves_subunit(landscape, partition, mode, &current);
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
