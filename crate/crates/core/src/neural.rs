//! Fixed-topology feed-forward trader.
//!
//! The network maps six deltas (price, bid interest, ask interest, cash,
//! shares, profit) through hidden layers of 20 and 10 units to three raw
//! outputs, decoded into side, share count and price offset.
//!
//! Genome layout is flat: `W1 (20×6) | W2 (10×20) | W3 (3×10) | b1 | b2 | b3`,
//! weight matrices row-major, for 350 weights and 33 biases.

use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::agents::{AgentView, Quote};
use crate::error::{Error, Result};
use crate::matching::{MarketObservation, Side};
use crate::Price;

pub const INPUTS: usize = 6;
pub const HIDDEN1: usize = 20;
pub const HIDDEN2: usize = 10;
pub const OUTPUTS: usize = 3;

pub const WEIGHT_COUNT: usize = HIDDEN1 * INPUTS + HIDDEN2 * HIDDEN1 + OUTPUTS * HIDDEN2;
pub const BIAS_COUNT: usize = HIDDEN1 + HIDDEN2 + OUTPUTS;
pub const PARAM_COUNT: usize = WEIGHT_COUNT + BIAS_COUNT;

const W1: usize = 0;
const W2: usize = W1 + HIDDEN1 * INPUTS;
const W3: usize = W2 + HIDDEN2 * HIDDEN1;
const B1: usize = WEIGHT_COUNT;
const B2: usize = B1 + HIDDEN1;
const B3: usize = B2 + HIDDEN2;

/// Share count per unit of the second raw output.
pub const SHARE_SCALE: f64 = 100.0;
pub const MAX_SHARES: u64 = 1000;
pub const MAX_PRICE_OFFSET: f64 = 1.0;

/// The 383 evolvable parameters of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome(Vec<f64>);

impl Genome {
    pub fn zeros() -> Self {
        Genome(vec![0.0; PARAM_COUNT])
    }

    pub fn from_vec(params: Vec<f64>) -> Result<Self> {
        if params.len() != PARAM_COUNT {
            return Err(Error::GenomeLength {
                expected: PARAM_COUNT,
                actual: params.len(),
            });
        }
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("genome"));
        }
        Ok(Genome(params))
    }

    /// Every parameter drawn from `Normal(0, sigma²)`.
    pub fn random<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> Self {
        Genome(
            (0..PARAM_COUNT)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    sigma * z
                })
                .collect(),
        )
    }

    pub fn params(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Output bias vector `b3`.
    pub fn output_bias_mut(&mut self) -> &mut [f64] {
        &mut self.0[B3..B3 + OUTPUTS]
    }

    pub(crate) fn params_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn layers(&self) -> Layers<'_> {
        let p = &self.0;
        Layers {
            w1: &p[W1..W2],
            w2: &p[W2..W3],
            w3: &p[W3..B1],
            b1: &p[B1..B2],
            b2: &p[B2..B3],
            b3: &p[B3..],
        }
    }
}

/// Borrowed views of the weight matrices (row-major) and bias vectors.
#[derive(Debug, Clone, Copy)]
pub struct Layers<'a> {
    pub w1: &'a [f64],
    pub w2: &'a [f64],
    pub w3: &'a [f64],
    pub b1: &'a [f64],
    pub b2: &'a [f64],
    pub b3: &'a [f64],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Tanh,
    Relu,
    Identity,
}

impl Activation {
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Relu => x.max(0.0),
            Activation::Identity => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetInput {
    pub d_price: f64,
    pub d_interest_bid: f64,
    pub d_interest_ask: f64,
    pub d_cash: f64,
    pub d_shares: f64,
    pub d_profit: f64,
}

impl NetInput {
    pub fn to_array(self) -> [f64; INPUTS] {
        [
            self.d_price,
            self.d_interest_bid,
            self.d_interest_ask,
            self.d_cash,
            self.d_shares,
            self.d_profit,
        ]
    }
}

/// Divisors applied to raw deltas before they reach the network. The
/// defaults pass the deltas through unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputScales {
    pub price: f64,
    pub interest: f64,
    pub cash: f64,
    pub shares: f64,
    pub profit: f64,
}

impl Default for InputScales {
    fn default() -> Self {
        InputScales {
            price: 1.0,
            interest: 1.0,
            cash: 1.0,
            shares: 1.0,
            profit: 1.0,
        }
    }
}

impl InputScales {
    pub fn normalize(&self, raw: NetInput) -> NetInput {
        NetInput {
            d_price: raw.d_price / self.price,
            d_interest_bid: raw.d_interest_bid / self.interest,
            d_interest_ask: raw.d_interest_ask / self.interest,
            d_cash: raw.d_cash / self.cash,
            d_shares: raw.d_shares / self.shares,
            d_profit: raw.d_profit / self.profit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub activation: Activation,
    pub scales: InputScales,
    /// Standard deviation of freshly initialised parameters.
    pub init_sigma: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            activation: Activation::Tanh,
            scales: InputScales::default(),
            init_sigma: 1.0,
        }
    }
}

/// Evaluates the network. Non-finite inputs are rejected.
pub fn forward(genome: &Genome, input: &NetInput, activation: Activation) -> Result<[f64; OUTPUTS]> {
    let x = input.to_array();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("network input"));
    }
    let l = genome.layers();
    let h1: [f64; HIDDEN1] = dense(l.w1, l.b1, &x, |v| activation.apply(v));
    let h2: [f64; HIDDEN2] = dense(l.w2, l.b2, &h1, |v| activation.apply(v));
    Ok(dense(l.w3, l.b3, &h2, |v| v))
}

fn dense<const N: usize>(w: &[f64], b: &[f64], x: &[f64], act: impl Fn(f64) -> f64) -> [f64; N] {
    let mut out = [0.0; N];
    for (i, o) in out.iter_mut().enumerate() {
        let row = &w[i * x.len()..(i + 1) * x.len()];
        let z = row.iter().zip(x).fold(b[i], |acc, (wij, xj)| acc + wij * xj);
        *o = act(z);
    }
    out
}

/// Decoded network output. Zero shares means abstain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetAction {
    pub side: Side,
    pub shares: u64,
    /// Offset from the current price, in ticks.
    pub d_price_ticks: i64,
}

impl NetAction {
    pub fn abstains(&self) -> bool {
        self.shares == 0
    }

    pub fn d_price(&self) -> f64 {
        Price::from_ticks(self.d_price_ticks).to_f64()
    }
}

pub fn decode(raw: [f64; OUTPUTS]) -> NetAction {
    let side = if raw[0] >= 0.0 { Side::Bid } else { Side::Ask };
    let shares = (raw[1].abs() * SHARE_SCALE).round().clamp(0.0, MAX_SHARES as f64);
    // NaN clamps to NaN and casts to 0: abstain
    let shares = if shares.is_nan() { 0 } else { shares as u64 };
    let offset = raw[2].clamp(-MAX_PRICE_OFFSET, MAX_PRICE_OFFSET);
    let d_price_ticks = if offset.is_nan() {
        0
    } else {
        Price::from_f64(offset).ticks()
    };
    NetAction {
        side,
        shares,
        d_price_ticks,
    }
}

pub fn init_random<R: Rng + ?Sized>(config: &NetworkConfig, rng: &mut R) -> Genome {
    Genome::random(config.init_sigma, rng)
}

/// Inputs the network sees at one instant; deltas are taken between
/// consecutive snapshots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Snapshot {
    pub price: Option<f64>,
    pub interest_bid: f64,
    pub interest_ask: f64,
    pub cash: f64,
    pub shares: f64,
    pub profit: f64,
}

impl Snapshot {
    /// Raw deltas from `prev` to `self`; an unknown price on either end
    /// gives a zero price delta.
    pub fn delta_from(&self, prev: Option<&Snapshot>) -> NetInput {
        let Some(prev) = prev else {
            return NetInput::default();
        };
        let d_price = match (self.price, prev.price) {
            (Some(now), Some(then)) => now - then,
            _ => 0.0,
        };
        NetInput {
            d_price,
            d_interest_bid: self.interest_bid - prev.interest_bid,
            d_interest_ask: self.interest_ask - prev.interest_ask,
            d_cash: self.cash - prev.cash,
            d_shares: self.shares - prev.shares,
            d_profit: self.profit - prev.profit,
        }
    }
}

/// A neural agent inside the simulated market.
#[derive(Debug, Clone)]
pub struct NeuralTrader {
    genome: Arc<Genome>,
    config: NetworkConfig,
    prev: Option<Snapshot>,
}

impl NeuralTrader {
    pub fn new(genome: Arc<Genome>, config: NetworkConfig) -> Self {
        NeuralTrader {
            genome,
            config,
            prev: None,
        }
    }

    pub fn genome(&self) -> &Arc<Genome> {
        &self.genome
    }

    pub fn act(&mut self, obs: &MarketObservation, me: &AgentView) -> Vec<Quote> {
        let now = Snapshot {
            price: obs.price.map(Price::to_f64),
            interest_bid: obs.interest_bid as f64,
            interest_ask: obs.interest_ask as f64,
            cash: me.cash,
            shares: me.shares as f64,
            profit: me.profit,
        };
        let input = self.config.scales.normalize(now.delta_from(self.prev.as_ref()));
        self.prev = Some(now);

        let Ok(raw) = forward(&self.genome, &input, self.config.activation) else {
            return Vec::new();
        };
        let action = decode(raw);
        match obs.price {
            Some(p) if !action.abstains() => {
                let price = p.offset(action.d_price_ticks).max(Price::ONE_TICK);
                vec![Quote::limit(action.side, action.shares, price)]
            }
            _ => Vec::new(),
        }
    }
}

/// One line of a genome file.
#[derive(Debug, Clone, PartialEq)]
pub struct GenomeRecord {
    pub sim_id: u32,
    pub generation: u32,
    pub fitness: f64,
    pub genome: Genome,
}

impl GenomeRecord {
    pub fn id(&self) -> String {
        format!("{}-{}", self.sim_id, self.generation)
    }
}

/// `sim_id,generation,fitness,p1,...,p383`, floats with 17 significant digits.
pub fn write_genomes<W: Write>(records: &[GenomeRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        write!(out, "{},{},{:.16e}", r.sim_id, r.generation, r.fitness)?;
        for v in r.genome.params() {
            write!(out, ",{v:.16e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_genomes<R: BufRead>(input: R, path: &Path) -> Result<Vec<GenomeRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |reason: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 + PARAM_COUNT {
            return Err(parse_err(format!(
                "expected {} fields, found {}",
                3 + PARAM_COUNT,
                fields.len()
            )));
        }
        let sim_id = fields[0].parse().map_err(|e| parse_err(format!("sim_id: {e}")))?;
        let generation = fields[1].parse().map_err(|e| parse_err(format!("generation: {e}")))?;
        let fitness = fields[2].parse().map_err(|e| parse_err(format!("fitness: {e}")))?;
        let params = fields[3..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(format!("parameter: {e}")))?;
        let genome = Genome::from_vec(params).map_err(|e| parse_err(e.to_string()))?;
        records.push(GenomeRecord {
            sim_id,
            generation,
            fitness,
            genome,
        });
    }
    Ok(records)
}

pub fn load_genomes(path: &Path) -> Result<Vec<GenomeRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_genomes(std::io::BufReader::new(file), path)
}
