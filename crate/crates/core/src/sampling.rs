//! Deterministic point sampling in coordinate boxes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Interval = (f64, f64);

fn draw(rng: &mut ChaCha8Rng, (lo, hi): Interval) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

/// `count` points uniform in the box, reproducible from `seed`.
pub fn sample_box(domain: &[Interval], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| domain.iter().map(|&iv| draw(&mut rng, iv)).collect())
        .collect()
}

/// Draws from the part of `iv` with |y| ≥ `floor`, falling back to the
/// endpoint of largest magnitude when that part is empty.
fn draw_away_from_zero(rng: &mut ChaCha8Rng, (lo, hi): Interval, floor: f64) -> f64 {
    let upper = (lo.max(floor), hi);
    let lower = (lo, hi.min(-floor));
    let pieces: Vec<Interval> = [upper, lower].into_iter().filter(|(a, b)| a <= b).collect();
    match pieces.len() {
        0 => {
            if lo.abs() > hi.abs() {
                lo
            } else {
                hi
            }
        }
        1 => draw(rng, pieces[0]),
        _ => {
            let pick = pieces[usize::from(rng.gen_bool(0.5))];
            draw(rng, pick)
        }
    }
}

/// Points on a lifted chart: base coordinates from `base`, fiber coordinates
/// from `fiber`. The first point has every fiber coordinate at magnitude at
/// least 0.5 so fiber-linear terms cannot hide behind y = 0.
pub fn sample_lifted(base: &[Interval], fiber: Interval, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut p: Vec<f64> = base.iter().map(|&iv| draw(&mut rng, iv)).collect();
            for _ in 0..base.len() {
                let y = if k == 0 {
                    draw_away_from_zero(&mut rng, fiber, 0.5)
                } else {
                    draw(&mut rng, fiber)
                };
                p.push(y);
            }
            p
        })
        .collect()
}
