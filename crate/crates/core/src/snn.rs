//! Fixed-step Izhikevich network simulation.
//!
//! Every neuron shares one parameter set and is advanced with forward Euler.
//! A neuron whose updated potential reaches [`SPIKE_THRESHOLD_MV`] emits a
//! spike and is reset; the spike reaches every post-synaptic neuron as a
//! current of `weight * SPIKE_DELTA_MV` exactly one synaptic delay later.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPIKE_THRESHOLD_MV: f64 = 30.0;
/// Amplitude carried by a spike, independent of the overshoot.
pub const SPIKE_DELTA_MV: f64 = 30.0;
pub const SYNAPTIC_DELAY_MS: f64 = 1.0;
pub const INITIAL_POTENTIAL_MV: f64 = -65.0;
pub const DEFAULT_DT_MS: f64 = 0.1;

/// Izhikevich regime parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronParams {
    /// Recovery time scale (1/ms).
    pub a: f64,
    /// Recovery sensitivity to the membrane potential.
    pub b: f64,
    /// Reset potential after a spike (mV).
    pub c: f64,
    /// Recovery increment after a spike.
    pub d: f64,
}

impl NeuronParams {
    pub const REGULAR_SPIKING: NeuronParams = NeuronParams {
        a: 0.02,
        b: 0.2,
        c: -65.0,
        d: 6.0,
    };

    pub fn initial_state(&self) -> NeuronState {
        NeuronState {
            v: INITIAL_POTENTIAL_MV,
            u: self.b * INITIAL_POTENTIAL_MV,
        }
    }

    fn validate(&self) -> Result<()> {
        if [self.a, self.b, self.c, self.d].iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::Network(format!("non-finite neuron parameters {self:?}")))
        }
    }
}

impl Default for NeuronParams {
    fn default() -> Self {
        Self::REGULAR_SPIKING
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeuronState {
    /// Membrane potential (mV).
    pub v: f64,
    /// Membrane recovery.
    pub u: f64,
}

impl NeuronState {
    fn is_finite(&self) -> bool {
        self.v.is_finite() && self.u.is_finite()
    }
}

/// Why a single neuron update was refused.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepFault {
    InvalidTimestep(f64),
    NonFinite,
}

#[inline(always)]
fn euler(state: NeuronState, p: &NeuronParams, current: f64, dt: f64) -> (NeuronState, bool) {
    let NeuronState { v, u } = state;
    let v_next = v + dt * (0.04 * v * v + 5.0 * v + 140.0 - u + current);
    let u_next = u + dt * (p.a * (p.b * v - u));
    if v_next >= SPIKE_THRESHOLD_MV {
        (
            NeuronState {
                v: p.c,
                u: u_next + p.d,
            },
            true,
        )
    } else {
        (
            NeuronState {
                v: v_next,
                u: u_next,
            },
            false,
        )
    }
}

/// Advances one neuron by a single Euler step of `dt_ms`.
///
/// Both variables are updated from the pre-step state, then the new potential
/// is tested against the threshold and the reset applied. The returned state
/// is always post-reset.
pub fn step_neuron(
    state: NeuronState,
    params: &NeuronParams,
    current: f64,
    dt_ms: f64,
) -> std::result::Result<(NeuronState, bool), StepFault> {
    if !(dt_ms > 0.0 && dt_ms.is_finite()) {
        return Err(StepFault::InvalidTimestep(dt_ms));
    }
    if !state.is_finite() || !current.is_finite() {
        return Err(StepFault::NonFinite);
    }
    let (next, spiked) = euler(state, params, current, dt_ms);
    if next.is_finite() {
        Ok((next, spiked))
    } else {
        Err(StepFault::NonFinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NeuronKind {
    Excitatory,
    Inhibitory,
}

impl NeuronKind {
    pub fn sign(self) -> f64 {
        match self {
            NeuronKind::Excitatory => 1.0,
            NeuronKind::Inhibitory => -1.0,
        }
    }
}

/// Functional position of a neuron in the layered topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Input,
    Hidden,
    Output,
}

/// Neuron counts of the fixed topology. Neurons are indexed inputs first,
/// then hidden, then outputs.
///
/// Inputs project to every hidden and output neuron; hidden neurons project
/// to every other hidden neuron and to every output. Nothing projects back
/// into the inputs and outputs project nowhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub n_outputs: usize,
}

impl Default for Topology {
    fn default() -> Self {
        Topology {
            n_inputs: 5,
            n_hidden: 60,
            n_outputs: 1,
        }
    }
}

impl Topology {
    pub fn new(n_inputs: usize, n_hidden: usize, n_outputs: usize) -> Result<Self> {
        let t = Topology {
            n_inputs,
            n_hidden,
            n_outputs,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.len() == 0 {
            return Err(Error::Network("topology has no neurons".into()));
        }
        if self.len() > u32::MAX as usize {
            return Err(Error::Network("topology too large".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_inputs + self.n_hidden + self.n_outputs
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inputs(&self) -> Range<usize> {
        0..self.n_inputs
    }

    pub fn hidden(&self) -> Range<usize> {
        self.n_inputs..self.n_inputs + self.n_hidden
    }

    pub fn outputs(&self) -> Range<usize> {
        self.n_inputs + self.n_hidden..self.len()
    }

    pub fn role(&self, neuron: usize) -> Option<Role> {
        if self.inputs().contains(&neuron) {
            Some(Role::Input)
        } else if self.hidden().contains(&neuron) {
            Some(Role::Hidden)
        } else if self.outputs().contains(&neuron) {
            Some(Role::Output)
        } else {
            None
        }
    }

    pub fn has_edge(&self, pre: usize, post: usize) -> bool {
        match (self.role(pre), self.role(post)) {
            (Some(Role::Input), Some(Role::Hidden | Role::Output)) => true,
            (Some(Role::Hidden), Some(Role::Hidden)) => pre != post,
            (Some(Role::Hidden), Some(Role::Output)) => true,
            _ => false,
        }
    }

    pub fn synapse_count(&self) -> usize {
        let (i, h, o) = (self.n_inputs, self.n_hidden, self.n_outputs);
        i * (h + o) + h * h.saturating_sub(1) + h * o
    }

    /// All synapses in canonical order: input→hidden, input→output,
    /// hidden→hidden (skipping self loops), hidden→output; each block
    /// row-major by pre-synaptic neuron.
    pub fn synapses(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let hidden = self.hidden();
        let outputs = self.outputs();
        let in_hidden = self
            .inputs()
            .flat_map(move |i| self.hidden().map(move |h| (i, h)));
        let in_out = self
            .inputs()
            .flat_map(move |i| self.outputs().map(move |o| (i, o)));
        let hid_hid = hidden.clone().flat_map(move |a| {
            self.hidden()
                .filter(move |&b| b != a)
                .map(move |b| (a, b))
        });
        let hid_out = hidden.flat_map(move |h| outputs.clone().map(move |o| (h, o)));
        in_hidden.chain(in_out).chain(hid_hid).chain(hid_out)
    }
}

/// A decoded, runnable network: topology, neuron natures and signed weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    topology: Topology,
    kinds: Vec<NeuronKind>,
    /// Dense `len × len` matrix, row-major by pre-synaptic neuron.
    weights: Vec<f64>,
    params: NeuronParams,
}

impl Network {
    /// All-excitatory network with every weight at zero.
    pub fn silent(topology: Topology) -> Result<Self> {
        let kinds = vec![NeuronKind::Excitatory; topology.len()];
        Self::with_kinds(topology, kinds, NeuronParams::default())
    }

    /// Zero-weight network with the given neuron natures. Inputs and outputs
    /// must be excitatory.
    pub fn with_kinds(
        topology: Topology,
        kinds: Vec<NeuronKind>,
        params: NeuronParams,
    ) -> Result<Self> {
        topology.validate()?;
        params.validate()?;
        if kinds.len() != topology.len() {
            return Err(Error::Network(format!(
                "expected {} neuron kinds, got {}",
                topology.len(),
                kinds.len()
            )));
        }
        for i in topology.inputs().chain(topology.outputs()) {
            if kinds[i] != NeuronKind::Excitatory {
                return Err(Error::Network(format!(
                    "neuron {i} is an input or output and must be excitatory"
                )));
            }
        }
        let n = topology.len();
        Ok(Network {
            topology,
            kinds,
            weights: vec![0.0; n * n],
            params,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn len(&self) -> usize {
        self.topology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topology.is_empty()
    }

    pub fn params(&self) -> &NeuronParams {
        &self.params
    }

    pub fn kinds(&self) -> &[NeuronKind] {
        &self.kinds
    }

    pub fn kind(&self, neuron: usize) -> NeuronKind {
        self.kinds[neuron]
    }

    /// Signed strength of `pre → post`; zero where no synapse exists.
    pub fn weight(&self, pre: usize, post: usize) -> f64 {
        self.weights[pre * self.len() + post]
    }

    pub(crate) fn weight_matrix(&self) -> &[f64] {
        &self.weights
    }

    /// Sets a signed weight, enforcing connectivity, range and the sign law.
    pub fn set_weight(&mut self, pre: usize, post: usize, weight: f64) -> Result<()> {
        if !self.topology.has_edge(pre, post) {
            return Err(Error::Network(format!("no synapse {pre} -> {post}")));
        }
        if !(weight.abs() <= 1.0) {
            return Err(Error::Network(format!(
                "weight {weight} on {pre} -> {post} outside [-1, 1]"
            )));
        }
        let ok = match self.kinds[pre] {
            NeuronKind::Excitatory => weight >= 0.0,
            NeuronKind::Inhibitory => weight <= 0.0,
        };
        if !ok {
            return Err(Error::Network(format!(
                "weight {weight} on {pre} -> {post} contradicts {:?} pre-synaptic neuron",
                self.kinds[pre]
            )));
        }
        let n = self.len();
        self.weights[pre * n + post] = weight;
        Ok(())
    }

    /// Sets `|weight|` to `magnitude`, keeping the sign of the pre-synaptic kind.
    pub fn set_magnitude(&mut self, pre: usize, post: usize, magnitude: f64) -> Result<()> {
        let w = self.kinds[pre].sign() * magnitude;
        self.set_weight(pre, post, w)
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for pre in 0..n {
            for post in 0..n {
                let w = self.weights[pre * n + post];
                if !self.topology.has_edge(pre, post) {
                    if w != 0.0 {
                        return Err(Error::Network(format!(
                            "weight {w} on non-existent synapse {pre} -> {post}"
                        )));
                    }
                    continue;
                }
                if !(w.abs() <= 1.0) {
                    return Err(Error::Network(format!("|w| > 1 on {pre} -> {post}")));
                }
                let sign_ok = match self.kinds[pre] {
                    NeuronKind::Excitatory => w >= 0.0,
                    NeuronKind::Inhibitory => w <= 0.0,
                };
                if !sign_ok {
                    return Err(Error::Network(format!("sign law broken on {pre} -> {post}")));
                }
            }
        }
        Ok(())
    }
}

/// Integration step and the delay it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimClock {
    dt_ms: f64,
    delay_steps: usize,
}

impl SimClock {
    /// `dt_ms` must be positive and divide the 1 ms synaptic delay exactly.
    pub fn new(dt_ms: f64) -> Result<Self> {
        if !(dt_ms > 0.0 && dt_ms.is_finite()) {
            return Err(Error::config(format!("dt must be positive, got {dt_ms}")));
        }
        let ratio = SYNAPTIC_DELAY_MS / dt_ms;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > 1e-9 * steps {
            return Err(Error::config(format!(
                "dt = {dt_ms} ms does not divide the {SYNAPTIC_DELAY_MS} ms synaptic delay"
            )));
        }
        Ok(SimClock {
            dt_ms,
            delay_steps: steps as usize,
        })
    }

    pub fn dt_ms(&self) -> f64 {
        self.dt_ms
    }

    pub fn delay_steps(&self) -> usize {
        self.delay_steps
    }

    pub fn step_to_ms(&self, step: u64) -> f64 {
        step as f64 * self.dt_ms
    }

    pub fn step_to_s(&self, step: u64) -> f64 {
        self.step_to_ms(step) / 1000.0
    }

    /// Converts a duration in seconds into a whole number of steps.
    pub fn seconds_to_steps(&self, seconds: f64) -> Result<u64> {
        if !(seconds >= 0.0 && seconds.is_finite()) {
            return Err(Error::config(format!("invalid duration {seconds} s")));
        }
        let exact = seconds * 1000.0 / self.dt_ms;
        let steps = exact.round();
        if (exact - steps).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::config(format!(
                "{seconds} s is not a whole number of {} ms steps",
                self.dt_ms
            )));
        }
        Ok(steps as u64)
    }
}

impl Default for SimClock {
    fn default() -> Self {
        SimClock {
            dt_ms: DEFAULT_DT_MS,
            delay_steps: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpikeEvent {
    pub step: u64,
    pub neuron: u32,
}

/// Spike events in emission order (step, then neuron index).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeLog {
    events: Vec<SpikeEvent>,
}

impl SpikeLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: Vec<SpikeEvent>) -> Result<Self> {
        if events.windows(2).any(|w| w[0].step > w[1].step) {
            return Err(Error::config("spike events out of order"));
        }
        Ok(SpikeLog { events })
    }

    pub fn events(&self) -> &[SpikeEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Spike steps of one neuron, ascending.
    pub fn spike_steps(&self, neuron: usize) -> Vec<u64> {
        self.events
            .iter()
            .filter(|e| e.neuron as usize == neuron)
            .map(|e| e.step)
            .collect()
    }

    pub fn last_spike_in(&self, neurons: Range<usize>) -> Option<u64> {
        self.events
            .iter()
            .rev()
            .find(|e| neurons.contains(&(e.neuron as usize)))
            .map(|e| e.step)
    }

    pub fn counts_per_neuron(&self, n_neurons: usize) -> Vec<u64> {
        let mut counts = vec![0; n_neurons];
        for e in &self.events {
            counts[e.neuron as usize] += 1;
        }
        counts
    }
}

/// Receives spikes as the simulator emits them.
pub trait SpikeSink {
    fn on_spike(&mut self, step: u64, neuron: usize);
}

impl SpikeSink for SpikeLog {
    fn on_spike(&mut self, step: u64, neuron: usize) {
        self.events.push(SpikeEvent {
            step,
            neuron: neuron as u32,
        });
    }
}

/// Keeps only the last spike step of a neuron range.
#[derive(Clone, Debug)]
pub struct LastSpike {
    watch: Range<usize>,
    pub last: Option<u64>,
}

impl LastSpike {
    pub fn new(watch: Range<usize>) -> Self {
        LastSpike { watch, last: None }
    }
}

impl SpikeSink for LastSpike {
    fn on_spike(&mut self, step: u64, neuron: usize) {
        if self.watch.contains(&neuron) {
            self.last = Some(step);
        }
    }
}

impl<A: SpikeSink, B: SpikeSink> SpikeSink for (A, B) {
    fn on_spike(&mut self, step: u64, neuron: usize) {
        self.0.on_spike(step, neuron);
        self.1.on_spike(step, neuron);
    }
}

/// Time course of the external drive within the stimulation window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StimulusPattern {
    Constant,
    Periodic { on_steps: u64, off_steps: u64 },
}

/// External current injected into every input neuron while stimulated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StimulusSpec {
    pub amplitude: f64,
    #[serde(default = "constant_pattern")]
    pub pattern: StimulusPattern,
}

fn constant_pattern() -> StimulusPattern {
    StimulusPattern::Constant
}

impl Default for StimulusSpec {
    fn default() -> Self {
        StimulusSpec {
            amplitude: 10.0,
            pattern: StimulusPattern::Constant,
        }
    }
}

impl StimulusSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(Error::config("stimulus amplitude must be finite"));
        }
        if let StimulusPattern::Periodic {
            on_steps,
            off_steps,
        } = self.pattern
        {
            if on_steps == 0 || off_steps == 0 {
                return Err(Error::config("periodic stimulus windows must be positive"));
            }
        }
        Ok(())
    }

    /// Drive at `step` of the stimulation window.
    pub fn current_at(&self, step: u64) -> f64 {
        match self.pattern {
            StimulusPattern::Constant => self.amplitude,
            StimulusPattern::Periodic {
                on_steps,
                off_steps,
            } => {
                if step % (on_steps + off_steps) < on_steps {
                    self.amplitude
                } else {
                    0.0
                }
            }
        }
    }
}

/// Total current into `post`: the weighted 30 mV deltas of every
/// pre-synaptic neuron flagged in `delayed_spikes`, plus `external`.
pub fn synaptic_input(
    network: &Network,
    post: usize,
    delayed_spikes: &[bool],
    external: f64,
) -> f64 {
    assert!(post < network.len(), "neuron {post} out of range");
    assert_eq!(delayed_spikes.len(), network.len());
    let mut acc = 0.0;
    for (pre, &spiked) in delayed_spikes.iter().enumerate() {
        if spiked {
            acc += network.weight(pre, post) * SPIKE_DELTA_MV;
        }
    }
    acc + external
}

/// How a delayed spike's `weight * SPIKE_DELTA_MV` enters the post-synaptic
/// Euler update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpikeCoupling {
    /// The weighted delta is a current lasting a single integration step, so
    /// a spike moves the target by `weight * 30 * dt` mV.
    StepCurrent,
    /// The weighted delta is delivered as the charge it carries over one
    /// millisecond of model time: the one-step current is scaled by
    /// `1 ms / dt`, moving the target by `weight * 30` mV whatever `dt` is.
    #[default]
    UnitCharge,
}

impl SpikeCoupling {
    /// Multiplier applied to the summed synaptic current for one step.
    pub fn gain(self, clock: &SimClock) -> f64 {
        match self {
            SpikeCoupling::StepCurrent => 1.0,
            SpikeCoupling::UnitCharge => clock.delay_steps() as f64,
        }
    }
}

/// Configurable single run of a network.
#[derive(Clone, Debug)]
pub struct Simulator<'a> {
    network: &'a Network,
    clock: SimClock,
    stimulus: StimulusSpec,
    stimulation_steps: u64,
    suppressed_from: Vec<Option<u64>>,
    early_exit: bool,
    coupling: SpikeCoupling,
}

impl<'a> Simulator<'a> {
    pub fn new(network: &'a Network, clock: SimClock) -> Self {
        Simulator {
            network,
            clock,
            stimulus: StimulusSpec::default(),
            stimulation_steps: 0,
            suppressed_from: vec![None; network.len()],
            early_exit: true,
            coupling: SpikeCoupling::default(),
        }
    }

    /// Drive the inputs with `stimulus` during steps `[0, steps)`.
    pub fn stimulus(mut self, stimulus: StimulusSpec, steps: u64) -> Self {
        self.stimulus = stimulus;
        self.stimulation_steps = steps;
        self
    }

    pub fn coupling(mut self, coupling: SpikeCoupling) -> Self {
        self.coupling = coupling;
        self
    }

    /// From `step` on, `neuron` is frozen and emits nothing.
    pub fn suppress(mut self, neuron: usize, step: u64) -> Self {
        let slot = &mut self.suppressed_from[neuron];
        *slot = Some(slot.map_or(step, |s| s.min(step)));
        self
    }

    /// Stop as soon as the whole network sits at a fixed point of the update
    /// map with nothing in flight and no stimulus left. The remaining steps
    /// would replay that state unchanged, so the output is identical.
    pub fn early_exit(mut self, enabled: bool) -> Self {
        self.early_exit = enabled;
        self
    }

    /// Runs for `total_steps`, reporting spikes to `sink`. Returns the number
    /// of steps actually integrated.
    pub fn run<S: SpikeSink>(&self, total_steps: u64, sink: &mut S) -> Result<u64> {
        let net = self.network;
        let n = net.len();
        let n_inputs = net.topology().n_inputs;
        let params = *net.params();
        let dt = self.clock.dt_ms();
        let delay = self.clock.delay_steps();
        let weights = net.weight_matrix();
        let gain = self.coupling.gain(&self.clock);
        let frozen_from: Vec<u64> = self
            .suppressed_from
            .iter()
            .map(|s| s.unwrap_or(u64::MAX))
            .collect();

        let mut states = vec![params.initial_state(); n];
        let mut current = vec![0.0f64; n];
        // slot `step % delay` holds the spikes emitted at `step - delay`
        let mut pending: Vec<Vec<u32>> = vec![Vec::new(); delay];
        let mut in_flight = 0usize;

        for step in 0..total_steps {
            let slot = (step % delay as u64) as usize;
            current.fill(0.0);
            let delivered = !pending[slot].is_empty();
            for &pre in &pending[slot] {
                let pre = pre as usize;
                let row = &weights[pre * n..(pre + 1) * n];
                for (acc, &w) in current.iter_mut().zip(row) {
                    *acc += w * SPIKE_DELTA_MV;
                }
            }
            in_flight -= pending[slot].len();
            pending[slot].clear();

            let external = if step < self.stimulation_steps {
                self.stimulus.current_at(step)
            } else {
                0.0
            };

            let mut changed = false;
            for j in 0..n {
                if step >= frozen_from[j] {
                    continue;
                }
                let ext = if j < n_inputs { external } else { 0.0 };
                let input = current[j] * gain + ext;
                let (next, spiked) = euler(states[j], &params, input, dt);
                if !next.is_finite() {
                    return Err(Error::SimulationFault {
                        step,
                        neuron: j,
                        v: states[j].v,
                        u: states[j].u,
                        current: input,
                    });
                }
                changed |= next != states[j];
                states[j] = next;
                if spiked {
                    pending[slot].push(j as u32);
                    sink.on_spike(step, j);
                }
            }
            in_flight += pending[slot].len();

            if self.early_exit
                && !changed
                && !delivered
                && external == 0.0
                && in_flight == 0
                && step + 1 >= self.stimulation_steps
            {
                return Ok(step + 1);
            }
        }
        Ok(total_steps)
    }

    pub fn run_log(&self, total_steps: u64) -> Result<SpikeLog> {
        let mut log = SpikeLog::new();
        self.run(total_steps, &mut log)?;
        Ok(log)
    }
}

/// Runs `network` for `total_steps`, stimulating its inputs during the first
/// `stimulation_steps`, and returns the full spike log.
pub fn run_trial(
    network: &Network,
    clock: SimClock,
    stimulus: &StimulusSpec,
    stimulation_steps: u64,
    total_steps: u64,
) -> Result<SpikeLog> {
    if total_steps < stimulation_steps {
        return Err(Error::config(format!(
            "total steps {total_steps} shorter than stimulation {stimulation_steps}"
        )));
    }
    stimulus.validate()?;
    Simulator::new(network, clock)
        .stimulus(*stimulus, stimulation_steps)
        .run_log(total_steps)
}
