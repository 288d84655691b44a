//! Error injection, propagation and minimum induced distance decoding at
//! each sink, with outcome counts.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{vec_add, vec_mat_mul, vec_sub, Elem, RingMatrix};
use crate::codes::{CodeError, CosetSpace, DEFAULT_COSET_CAP};
use crate::network::{embed, sink_view, NetworkError, NetworkSpec, SinkView};
use crate::weights::{vector_weight, Rational, WeightFunction};

/// Upper limit on `messages × errors` for exhaustive runs.
pub const DEFAULT_TRIAL_CAP: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0}")]
    InvalidModel(String),
    #[error("exhaustive run needs more than {cap} trials")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// `(x + e)·F`.
pub fn propagate(f: &RingMatrix, x: &[Elem], e: &[Elem]) -> Vec<Elem> {
    let ring = f.ring();
    vec_mat_mul(ring, &vec_add(ring, x, e), f)
}

/// Result of decoding one received word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    /// Index of the unique closest message.
    Message(usize),
    /// No strict minimum, or a word no error could produce.
    Ambiguous,
}

/// Minimum induced distance decoder for one sink. The distance from `y`
/// to the codeword of `x₀` is the least weight of an error `e` with
/// `e·F_t = y − x₀·G_t`; these weights are tabulated once per coset of
/// `K_t`.
#[derive(Debug, Clone)]
pub struct Decoder {
    view: SinkView,
    codewords: Vec<Vec<Elem>>,
    syndromes: HashMap<Vec<Elem>, i64>,
    scale: i64,
}

impl Decoder {
    pub fn new(view: SinkView, w: &WeightFunction) -> Result<Self, SimError> {
        Self::with_cap(view, w, DEFAULT_COSET_CAP)
    }

    pub fn with_cap(view: SinkView, w: &WeightFunction, cap: u128) -> Result<Self, SimError> {
        let ring = view.ft.ring().clone();
        let space = CosetSpace::from_reducer(&ring, view.kernel.reducer().clone(), cap)?;
        let grid = w.grid();
        let weights = space.weights(&grid);
        let syndromes = (0..space.count()).map(|c| (vec_mat_mul(&ring, &space.rep(c), &view.ft), weights[c])).collect();
        let codewords = view.messages.iter().map(|x0| view.codeword(x0)).collect();
        Ok(Decoder { view, codewords, syndromes, scale: grid.scale() })
    }

    pub fn view(&self) -> &SinkView {
        &self.view
    }

    /// Induced distance between a received word and a message's codeword.
    pub fn distance(&self, y: &[Elem], message: usize) -> Option<Rational> {
        let z = vec_sub(self.view.ft.ring(), y, &self.codewords[message]);
        self.syndromes.get(&z).map(|&v| Rational::new(v, self.scale))
    }

    pub fn decode(&self, y: &[Elem]) -> Decoded {
        let ring = self.view.ft.ring();
        let mut best: Option<(i64, usize)> = None;
        let mut tied = false;
        for (i, c) in self.codewords.iter().enumerate() {
            let Some(&d) = self.syndromes.get(&vec_sub(ring, y, c)) else {
                continue;
            };
            match best {
                Some((b, _)) if d > b => {}
                Some((b, _)) if d == b => tied = true,
                _ => {
                    best = Some((d, i));
                    tied = false;
                }
            }
        }
        match best {
            Some((_, i)) if !tied => Decoded::Message(i),
            _ => Decoded::Ambiguous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Correct,
    Miscorrected { to: usize },
    /// The decoder refused: a tie or an impossible word.
    Detected,
    /// A nonzero error inside `K_t`: the sink receives exactly the sent word.
    Invisible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorModel {
    Fixed(Vec<Elem>),
    /// `count` distinct positions, each set to a uniform nonzero value.
    RandomEdges { count: usize, seed: u64 },
    /// Every error of weight at most the budget, against every message.
    ExhaustiveUpTo(Rational),
}

impl ErrorModel {
    /// Parses `exhaustive:<budget>`, `random:<count>:<seed>` or
    /// `fixed:<vector>`.
    pub fn parse(text: &str, ring: &crate::algebra::Ring, n: usize) -> Result<Self, SimError> {
        let bad = || SimError::InvalidModel(format!("unknown error model `{text}`"));
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            ["exhaustive", budget] => {
                let b = crate::weights::parse_rational(budget).ok_or_else(bad)?;
                Ok(ErrorModel::ExhaustiveUpTo(b))
            }
            ["random", count, seed] => Ok(ErrorModel::RandomEdges {
                count: count.parse().map_err(|_| bad())?,
                seed: seed.parse().map_err(|_| bad())?,
            }),
            ["fixed", v] => Ok(ErrorModel::Fixed(crate::codes::parse_vector_row(ring, n, v).map_err(SimError::InvalidModel)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub message: usize,
    pub error: Vec<Elem>,
    pub outcomes: Vec<Outcome>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub correct: u64,
    pub miscorrected: u64,
    pub detected: u64,
    pub invisible: u64,
}

impl Counts {
    fn record(&mut self, o: Outcome) {
        match o {
            Outcome::Correct => self.correct += 1,
            Outcome::Miscorrected { .. } => self.miscorrected += 1,
            Outcome::Detected => self.detected += 1,
            Outcome::Invisible => self.invisible += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.correct + self.miscorrected + self.detected + self.invisible
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statistics {
    pub sinks: Vec<String>,
    pub counts: Vec<Counts>,
    pub trials: Vec<TrialResult>,
}

pub const STATS_HEADER: &str = "sink,correct,miscorrected,detected,invisible";

impl Statistics {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{STATS_HEADER}\n");
        for (s, c) in self.sinks.iter().zip(&self.counts) {
            let _ = writeln!(out, "{s},{},{},{},{}", c.correct, c.miscorrected, c.detected, c.invisible);
        }
        out
    }
}

/// A network with a decoder at each sink.
#[derive(Debug, Clone)]
pub struct Simulation {
    f: RingMatrix,
    n: usize,
    messages: Vec<Vec<Elem>>,
    weight: WeightFunction,
    decoders: Vec<Decoder>,
    trial_cap: usize,
}

impl Simulation {
    pub fn new(net: &NetworkSpec, f: &RingMatrix, messages: &[Vec<Elem>], w: &WeightFunction) -> Result<Self, SimError> {
        if messages.is_empty() {
            return Err(SimError::InvalidModel("no messages".into()));
        }
        let decoders = net
            .sinks()
            .iter()
            .map(|t| Decoder::new(sink_view(net, f, t, messages, w)?, w))
            .collect::<Result<_, SimError>>()?;
        Ok(Simulation {
            f: f.clone(),
            n: net.n(),
            messages: messages.to_vec(),
            weight: w.clone(),
            decoders,
            trial_cap: DEFAULT_TRIAL_CAP,
        })
    }

    pub fn with_trial_cap(mut self, cap: usize) -> Self {
        self.trial_cap = cap;
        self
    }

    pub fn decoders(&self) -> &[Decoder] {
        &self.decoders
    }

    /// Sends message `message` with error `e` and decodes at every sink.
    pub fn trial(&self, message: usize, e: &[Elem]) -> TrialResult {
        let x = embed(&self.messages[message], self.n);
        let y = propagate(&self.f, &x, e);
        let nonzero = e.iter().any(|&a| a != 0);
        let outcomes = self
            .decoders
            .iter()
            .map(|d| {
                let view = d.view();
                let yt: Vec<Elem> = view.edges.iter().map(|&j| y[j]).collect();
                if nonzero && view.kernel.contains(e) {
                    return Outcome::Invisible;
                }
                match d.decode(&yt) {
                    Decoded::Message(i) if i == message => Outcome::Correct,
                    Decoded::Message(i) => Outcome::Miscorrected { to: i },
                    Decoded::Ambiguous => Outcome::Detected,
                }
            })
            .collect();
        TrialResult { message, error: e.to_vec(), outcomes }
    }

    /// Runs the model. Random trials draw from a per-trial stream of one
    /// seeded generator, so results do not depend on evaluation order.
    pub fn run(&self, model: &ErrorModel, trials: usize) -> Result<Statistics, SimError> {
        let mut results = Vec::new();
        match model {
            ErrorModel::Fixed(e) => {
                if e.len() != self.n {
                    return Err(SimError::InvalidModel(format!("error has length {}, expected {}", e.len(), self.n)));
                }
                for i in 0..self.messages.len() {
                    results.push(self.trial(i, e));
                }
            }
            ErrorModel::RandomEdges { count, seed } => {
                if *count > self.n {
                    return Err(SimError::InvalidModel(format!("cannot corrupt {count} of {} edges", self.n)));
                }
                if trials == 0 {
                    return Err(SimError::InvalidModel("need at least one trial".into()));
                }
                let q = self.f.ring().size();
                for t in 0..trials {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    rng.set_stream(t as u64);
                    let message = rng.gen_range(0..self.messages.len());
                    let mut e = vec![0; self.n];
                    for j in sample(&mut rng, self.n, *count) {
                        e[j] = rng.gen_range(1..q);
                    }
                    results.push(self.trial(message, &e));
                }
            }
            ErrorModel::ExhaustiveUpTo(budget) => {
                if *budget < Rational::from(0) {
                    return Err(SimError::InvalidModel("negative weight budget".into()));
                }
                let cap = self.trial_cap / self.messages.len();
                let errors = errors_within(&self.weight, self.n, *budget, cap).ok_or(SimError::CapExceeded { cap: self.trial_cap })?;
                for e in &errors {
                    for i in 0..self.messages.len() {
                        results.push(self.trial(i, e));
                    }
                }
            }
        }
        let mut counts = vec![Counts::default(); self.decoders.len()];
        for r in &results {
            for (c, &o) in counts.iter_mut().zip(&r.outcomes) {
                c.record(o);
            }
        }
        let sinks = self.decoders.iter().map(|d| d.view().sink.clone()).collect();
        Ok(Statistics { sinks, counts, trials: results })
    }
}

/// Convenience wrapper: builds the decoders and runs `model`.
pub fn run_trials(
    net: &NetworkSpec,
    f: &RingMatrix,
    messages: &[Vec<Elem>],
    w: &WeightFunction,
    model: &ErrorModel,
    trials: usize,
) -> Result<Statistics, SimError> {
    Simulation::new(net, f, messages, w)?.run(model, trials)
}

/// All `e ∈ A^n` with `w(e) ≤ budget`, or `None` past `cap` vectors.
pub fn errors_within(w: &WeightFunction, n: usize, budget: Rational, cap: usize) -> Option<Vec<Vec<Elem>>> {
    let grid = w.grid();
    let limit = grid.floor_index(budget)?;
    let mut out = Vec::new();
    let mut current = vec![0; n];
    fn walk(
        grid: &crate::weights::WeightGrid,
        q: u32,
        i: usize,
        left: i64,
        current: &mut Vec<Elem>,
        out: &mut Vec<Vec<Elem>>,
        cap: usize,
    ) -> Option<()> {
        if i == current.len() {
            if out.len() >= cap {
                return None;
            }
            out.push(current.clone());
            return Some(());
        }
        for a in 0..q {
            let v = grid.value(a);
            if v <= left {
                current[i] = a;
                walk(grid, q, i + 1, left - v, current, out, cap)?;
            }
        }
        current[i] = 0;
        Some(())
    }
    walk(&grid, w.size(), 0, limit, &mut current, &mut out, cap)?;
    debug_assert!(out.iter().all(|e| vector_weight(w, e) <= budget));
    Some(out)
}

/// Renders a trial as `message,error,outcome...` for logs.
pub fn describe(trial: &TrialResult) -> String {
    let e: String = trial.error.iter().map(|a| a.to_string()).collect();
    let o: Vec<String> = trial
        .outcomes
        .iter()
        .map(|o| match o {
            Outcome::Correct => "correct".to_string(),
            Outcome::Miscorrected { to } => format!("miscorrected:{to}"),
            Outcome::Detected => "detected".to_string(),
            Outcome::Invisible => "invisible".to_string(),
        })
        .collect();
    format!("{},{},{}", trial.message, e, o.join(","))
}
