//! Generic rollout loop shared by the edge, coarse and vertex tasks.

use rand::Rng;

use crate::a2c::{greedy_action, sample_action, A2cParams, ActionMode, Updater, Window};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nn::{Agent, Matrix, Tape};

pub(crate) trait Env {
    fn features(&self) -> &Matrix;
    fn mask(&self) -> Vec<bool>;
    /// Applies the action at local node `a` and returns the reward.
    fn step(&mut self, a: usize) -> Result<f64>;
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Rollout {
    pub actions: Vec<usize>,
    pub rewards: Vec<f64>,
    pub loss: f64,
}

fn all_masked(mask: &[bool]) -> bool {
    mask.iter().all(|&m| m)
}

/// Greedy rollout of at most `len` steps. Stops early when every action is
/// masked.
pub(crate) fn run_eval<E: Env>(
    agent: &Agent,
    g: &Graph,
    env: &mut E,
    len: usize,
) -> Result<Rollout> {
    let mut out = Rollout::default();
    for _ in 0..len {
        let mask = env.mask();
        if all_masked(&mask) {
            break;
        }
        let lp = agent
            .evaluate(g, env.features().clone(), &mask, false)?
            .log_probs;
        let a = greedy_action(&lp)?;
        out.rewards.push(env.step(a)?);
        out.actions.push(a);
    }
    Ok(out)
}

/// Sampled rollout with an actor-critic update every `p.update_every` steps
/// and at the end.
pub(crate) fn run_train<E: Env, R: Rng>(
    agent: &mut Agent,
    g: &Graph,
    env: &mut E,
    len: usize,
    rng: &mut R,
    p: &A2cParams,
    updater: &mut dyn Updater,
) -> Result<Rollout> {
    let mut out = Rollout::default();
    let mut window = Window::default();
    for _ in 0..len {
        let mask = env.mask();
        if all_masked(&mask) {
            break;
        }
        let mut tape = Tape::new();
        let fwd = agent.record(&mut tape, g, env.features().clone(), &mask, true)?;
        let a = match sample_action(tape.value(fwd.log_probs).data(), ActionMode::Sample, rng) {
            Ok(a) => a,
            Err(Error::AllMasked) => break,
            Err(e) => return Err(e),
        };
        let r = env.step(a)?;
        out.rewards.push(r);
        out.actions.push(a);
        window.push(tape, fwd, a, r);
        if window.len() == p.update_every {
            let (grads, loss) = window.gradients(g, agent, p);
            updater.update(agent, &grads, p.lr);
            out.loss += loss;
        }
    }
    if !window.is_empty() {
        let (grads, loss) = window.gradients(g, agent, p);
        updater.update(agent, &grads, p.lr);
        out.loss += loss;
    }
    Ok(out)
}

/// Length of the shortest prefix whose cumulative reward is maximal; 0 when
/// no prefix sum is positive.
pub(crate) fn peak_prefix(rewards: &[f64]) -> usize {
    let mut best = 0.0;
    let mut best_len = 0;
    let mut acc = 0.0;
    for (t, r) in rewards.iter().enumerate() {
        acc += r;
        if acc > best {
            best = acc;
            best_len = t + 1;
        }
    }
    best_len
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_prefix_examples() {
        assert_eq!(peak_prefix(&[]), 0);
        assert_eq!(peak_prefix(&[-1.0, -0.5]), 0);
        assert_eq!(peak_prefix(&[0.0, 0.0]), 0);
        assert_eq!(peak_prefix(&[0.5, -0.1, 0.3, -1.0]), 3);
        assert_eq!(peak_prefix(&[0.5, -0.5, 0.5]), 1);
    }
}
