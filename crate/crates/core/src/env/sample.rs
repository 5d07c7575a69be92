use rand::Rng;

use super::instance::CausalInstance;
use super::map::sample_categorical;
use crate::error::Result;
use crate::intervention::Intervention;

/// Everything the learner sees in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub start_intervention: Intervention,
    pub start_realization: Vec<bool>,
    pub context: usize,
    pub context_intervention: Intervention,
    pub context_realization: Vec<bool>,
    pub reward: bool,
}

fn realize<R: Rng + ?Sized>(q: &[f64], a: Intervention, rng: &mut R) -> Vec<bool> {
    let mut x: Vec<bool> = q.iter().map(|&p| rng.random::<f64>() < p).collect();
    if let Intervention::Set { var, value } = a {
        x[var] = value;
    }
    x
}

/// Simulate one round: intervene with `a0` at context 0, transition, let
/// `choose` pick the intervention at the reached context, and draw the reward.
///
/// All variables are drawn before the intervention override so the random
/// stream consumed per round does not depend on the interventions chosen.
pub fn sample_round<R, F>(
    inst: &CausalInstance,
    rng: &mut R,
    a0: Intervention,
    mut choose: F,
) -> Result<Observation>
where
    R: Rng + ?Sized,
    F: FnMut(usize) -> Intervention,
{
    a0.check(inst.n)?;
    let x0 = realize(&inst.q0, a0, rng);
    let dist = inst.transition_map.select(&x0, rng);
    let context = sample_categorical(dist, rng);
    let ai = choose(context).check(inst.n)?;
    let ctx = &inst.contexts[context];
    let xi = realize(&ctx.q, ai, rng);
    let p = *ctx.reward_map.select(&xi, rng);
    let reward = rng.random::<f64>() < p;
    Ok(Observation {
        start_intervention: a0,
        start_realization: x0,
        context,
        context_intervention: ai,
        context_realization: xi,
        reward,
    })
}

/// An instance bound to a random stream, counting the rounds consumed.
pub struct Simulator<'a, R> {
    inst: &'a CausalInstance,
    rng: R,
    rounds: u64,
}

impl<'a, R: Rng> Simulator<'a, R> {
    pub fn new(inst: &'a CausalInstance, rng: R) -> Self {
        Self { inst, rng, rounds: 0 }
    }

    pub fn instance(&self) -> &'a CausalInstance {
        self.inst
    }

    pub fn n(&self) -> usize {
        self.inst.n
    }

    pub fn k(&self) -> usize {
        self.inst.k
    }

    pub fn num_interventions(&self) -> usize {
        self.inst.num_interventions()
    }

    /// Rounds consumed so far.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn pull<F>(&mut self, a0: Intervention, choose: F) -> Result<Observation>
    where
        F: FnMut(usize) -> Intervention,
    {
        let obs = sample_round(self.inst, &mut self.rng, a0, choose)?;
        self.rounds += 1;
        Ok(obs)
    }

    pub fn rng(&mut self) -> &mut R {
        &mut self.rng
    }
}
