//! Monte Carlo simulation of Bell-pair and GHZ distillation.
//!
//! Every trial runs two tableaus in lockstep: the noisy one and an error-free
//! reference that consumes the same measurement outcomes. Errors and Pauli
//! corrections only flip row signs, so both tableaus always share their
//! unsigned rows and a trial succeeds exactly when all signs agree at the end.

mod channel;
mod output;

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use channel::ChannelModel;
pub use output::{output_state, OutputState, MAX_ENUMERATED_K};

use crate::decoder::{SyndromeTable, DEFAULT_BUDGET};
use crate::diagclifford::SymmetricBinaryMatrix;
use crate::error::{Error, Result};
use crate::gf2lin::BitVec;
use crate::induce::{self, Placement};
use crate::pauli::PauliOperator;
use crate::stabcode::StabilizerCode;
use crate::tableau::{ConstantOutcome, MeasurementKind, OutcomeSource, StabilizerTableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Bell,
    Ghz,
}

impl ProtocolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::Bell => "bell",
            ProtocolKind::Ghz => "ghz",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(ProtocolKind::Bell),
            "ghz" => Ok(ProtocolKind::Ghz),
            other => Err(Error::Parse(format!("unknown protocol {other:?} (expected bell or ghz)"))),
        }
    }
}

/// How the qubits travel from Alice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    /// A sends B and C to Bob, Bob forwards C to Charlie.
    Chain,
    /// Alice measures A and B herself and sends B and C out directly.
    SplitAtSource,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Chain => "chain",
            Topology::SplitAtSource => "split",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Topology::Chain),
            "split" => Ok(Topology::SplitAtSource),
            other => Err(Error::Parse(format!("unknown topology {other:?} (expected chain or split)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub code: StabilizerCode,
    pub protocol: ProtocolKind,
    /// Ignored for Bell pairs.
    pub placement: Placement,
    pub topology: Topology,
    pub channel: ChannelModel,
    pub trials: u64,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn ghz(code: StabilizerCode, placement: Placement, topology: Topology, channel: ChannelModel) -> Self {
        Self { code, protocol: ProtocolKind::Ghz, placement, topology, channel, trials: 1, seed: 0 }
    }

    pub fn bell(code: StabilizerCode, channel: ChannelModel) -> Self {
        Self {
            code,
            protocol: ProtocolKind::Bell,
            placement: Placement::NoClifford,
            topology: Topology::Chain,
            channel,
            trials: 1,
            seed: 0,
        }
    }

    pub fn with_trials(mut self, trials: u64, seed: u64) -> Self {
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if self.protocol == ProtocolKind::Bell && self.topology == Topology::SplitAtSource {
            return Err(Error::InvalidConfig("the split topology only applies to GHZ distillation".into()));
        }
        if self.code.k() == 0 {
            return Err(Error::InvalidConfig(format!("code {} encodes no qubits", self.code.name())));
        }
        Ok(())
    }
}

/// Failures attributed to each correction stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageFailures {
    /// Bob's correction left a logical error (or hit an unfilled syndrome).
    pub bc: u64,
    /// Charlie's correction left a logical error (or hit an unfilled syndrome).
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistillationReport {
    pub trials: u64,
    pub failures: u64,
    pub p_f: f64,
    /// Binomial standard error of `p_f`.
    pub stderr: f64,
    pub stage_failures: StageFailures,
    pub decoder_misses: u64,
    pub fidelity: f64,
}

impl DistillationReport {
    fn from_counts(trials: u64, c: Counts) -> Self {
        let p_f = if trials == 0 { 0.0 } else { c.failures as f64 / trials as f64 };
        let stderr = if trials == 0 { 0.0 } else { (p_f * (1.0 - p_f) / trials as f64).sqrt() };
        Self {
            trials,
            failures: c.failures,
            p_f,
            stderr,
            stage_failures: StageFailures { bc: c.bc, c: c.c },
            decoder_misses: c.misses,
            fidelity: 1.0 - p_f,
        }
    }
}

/// Result of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialResult {
    pub success: bool,
    pub bc_stage_failed: bool,
    pub c_stage_failed: bool,
    pub decoder_miss: bool,
}

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    failures: u64,
    bc: u64,
    c: u64,
    misses: u64,
}

impl Counts {
    fn of(t: &TrialResult) -> Self {
        Counts {
            failures: u64::from(!t.success),
            bc: u64::from(t.bc_stage_failed),
            c: u64::from(t.c_stage_failed),
            misses: u64::from(t.decoder_miss),
        }
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts { failures: self.failures + o.failures, bc: self.bc + o.bc, c: self.c + o.c, misses: self.misses + o.misses }
    }
}

/// Errors for a scripted trial.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectedErrors {
    /// Hits the `2n` qubits `B_1..B_n, C_1..C_n` when they leave Alice
    /// (Bell pairs: the `n` B qubits).
    pub first: PauliOperator,
    /// Hits the C qubits on the way from Bob to Charlie. Must be the identity
    /// for the split topology and for Bell pairs.
    pub second: PauliOperator,
}

impl InjectedErrors {
    pub fn none(config: &ProtocolConfig) -> Self {
        let n = config.code.n();
        let first = match config.protocol {
            ProtocolKind::Bell => n,
            ProtocolKind::Ghz => 2 * n,
        };
        Self { first: PauliOperator::identity(first), second: PauliOperator::identity(n) }
    }
}

/// Operation applied to the noisy tableau, in order, starting from the
/// initial Bell or GHZ state.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceOp {
    /// Projective measurement; `outcome` true means eigenvalue −1.
    Measure { op: PauliOperator, outcome: bool },
    Pauli(PauliOperator),
    Clifford { r: SymmetricBinaryMatrix, qubits: Vec<usize> },
}

/// Source of measurement outcomes and channel errors for one trial.
trait TrialInputs {
    fn outcome(&mut self) -> bool;
    /// Error for transmission stage `stage` (0 or 1) on `m` qubits.
    fn error(&mut self, stage: usize, m: usize) -> Result<PauliOperator>;
}

struct RandomInputs<'a, R: Rng> {
    rng: &'a mut R,
    channel: &'a ChannelModel,
}

impl<R: Rng> TrialInputs for RandomInputs<'_, R> {
    fn outcome(&mut self) -> bool {
        self.rng.random()
    }

    fn error(&mut self, _stage: usize, m: usize) -> Result<PauliOperator> {
        Ok(self.channel.sample(m, self.rng))
    }
}

struct ScriptedInputs<'a> {
    outcomes: &'a mut dyn OutcomeSource,
    errors: &'a InjectedErrors,
}

impl TrialInputs for ScriptedInputs<'_> {
    fn outcome(&mut self) -> bool {
        self.outcomes.next_outcome()
    }

    fn error(&mut self, stage: usize, m: usize) -> Result<PauliOperator> {
        let e = if stage == 0 { &self.errors.first } else { &self.errors.second };
        if e.num_qubits() != m {
            return Err(Error::DimensionMismatch(format!(
                "injected error on {} qubits where {m} are transmitted",
                e.num_qubits()
            )));
        }
        Ok(e.clone())
    }
}

/// Group-membership combinations of every commuting measurement, in order.
/// They depend only on the unsigned rows, which are the same in every trial,
/// so a noiseless dry run records them once.
enum Combos<'a> {
    Record(Vec<Option<BitVec>>),
    Replay { list: &'a [Option<BitVec>], next: usize },
}

struct Lockstep<'a> {
    trial: StabilizerTableau,
    reference: StabilizerTableau,
    combos: Combos<'a>,
    trace: Option<&'a mut Vec<TraceOp>>,
}

fn sign_from_combination(t: &StabilizerTableau, combo: &BitVec, op: &PauliOperator) -> Result<bool> {
    let prod = t.combination_product(combo);
    if !prod.same_components(op) {
        return Err(Error::Internal(format!("cached combination does not reproduce {op}")));
    }
    match (op.phase() + 4 - prod.phase()) & 3 {
        0 => Ok(false),
        2 => Ok(true),
        _ => Err(Error::Internal(format!("non-Hermitian product while measuring {op}"))),
    }
}

impl<'a> Lockstep<'a> {
    fn new(initial: StabilizerTableau, combos: Combos<'a>, trace: Option<&'a mut Vec<TraceOp>>) -> Self {
        Self { trial: initial.clone(), reference: initial, combos, trace }
    }

    /// Measures `op` on both tableaus; returns `(trial outcome, reference outcome)`.
    fn measure(&mut self, op: &PauliOperator, inputs: &mut dyn TrialInputs) -> Result<(bool, bool)> {
        let random = self.trial.rows().iter().any(|r| r.anticommutes(op));
        let outcomes = if random {
            let bit = inputs.outcome();
            let mt = self.trial.measure(op, &mut ConstantOutcome(bit))?;
            let mr = self.reference.measure(op, &mut ConstantOutcome(bit))?;
            if mt.kind != mr.kind {
                return Err(Error::Internal(format!("trial and reference diverged measuring {op}")));
            }
            (bit, bit)
        } else {
            let combo = match &mut self.combos {
                Combos::Record(list) => {
                    let c = self.reference.membership(op);
                    list.push(c.clone());
                    c
                }
                Combos::Replay { list, next } => {
                    let c = list
                        .get(*next)
                        .cloned()
                        .ok_or_else(|| Error::Internal("measurement schedule longer than recorded".into()))?;
                    *next += 1;
                    c
                }
            };
            match combo {
                Some(c) => (
                    sign_from_combination(&self.trial, &c, op)?,
                    sign_from_combination(&self.reference, &c, op)?,
                ),
                None => {
                    let bit = inputs.outcome();
                    let mt = self.trial.measure(op, &mut ConstantOutcome(bit))?;
                    let mr = self.reference.measure(op, &mut ConstantOutcome(bit))?;
                    if mt.kind != MeasurementKind::Appended || mr.kind != MeasurementKind::Appended {
                        return Err(Error::Internal(format!("expected {op} to extend the group")));
                    }
                    (bit, bit)
                }
            }
        };
        if let Some(t) = self.trace.as_deref_mut() {
            t.push(TraceOp::Measure { op: op.clone(), outcome: outcomes.0 });
        }
        Ok(outcomes)
    }

    /// Applies a channel error or correction to the noisy tableau only.
    fn pauli(&mut self, p: &PauliOperator) -> Result<()> {
        if p.is_identity() {
            return Ok(());
        }
        self.trial.apply_error(p)?;
        if let Some(t) = self.trace.as_deref_mut() {
            t.push(TraceOp::Pauli(p.clone()));
        }
        Ok(())
    }

    fn clifford(&mut self, r: &SymmetricBinaryMatrix, qubits: &[usize]) -> Result<()> {
        self.trial.apply_diag_clifford(r, qubits)?;
        self.reference.apply_diag_clifford(r, qubits)?;
        if let Some(t) = self.trace.as_deref_mut() {
            t.push(TraceOp::Clifford { r: r.clone(), qubits: qubits.to_vec() });
        }
        Ok(())
    }

    fn signs_match(&self) -> bool {
        self.trial.sign_bits() == self.reference.sign_bits()
    }
}

/// A block of generators measured together, with the decoder for their
/// syndromes and the code used to classify residual errors.
struct CheckSet {
    /// Generators embedded in the full tableau, signs for all-`+1` syndromes.
    ops: Vec<PauliOperator>,
    /// Qubits of the full tableau the local generators act on.
    qubits: Vec<usize>,
    table: SyndromeTable,
    /// Unsigned local code, for residual classification.
    code: StabilizerCode,
}

impl CheckSet {
    fn new(name: &str, local: &[PauliOperator], qubits: Vec<usize>, total: usize) -> Result<Self> {
        let ops = local.iter().map(|g| g.embed(total, &qubits)).collect::<Result<Vec<_>>>()?;
        let unsigned: Vec<PauliOperator> = local.iter().map(PauliOperator::unsigned).collect();
        let table = SyndromeTable::for_generators(&unsigned, None, DEFAULT_BUDGET)?;
        let code = StabilizerCode::named(name, unsigned)?;
        Ok(Self { ops, qubits, table, code })
    }

    /// Residual of `correction · error` on the local qubits is harmless.
    fn harmless(&self, residual: &PauliOperator) -> bool {
        residual.is_identity() || self.code.in_unsigned_group(residual)
    }
}

/// Outcome of a measure-decode-correct round.
struct Round {
    /// Local correction applied, `None` on a decoder miss.
    correction: Option<PauliOperator>,
}

/// Prepared protocol: codes, decoders and the deterministic-measurement
/// schedule for one configuration.
pub struct ProtocolEngine {
    config: ProtocolConfig,
    n: usize,
    clifford: Option<SymmetricBinaryMatrix>,
    /// Alice's standard-form generators on A.
    alice_ops: Vec<PauliOperator>,
    alice_signs: Vec<bool>,
    /// Unsigned standard-form generators on B (Bob's second round for GHZ,
    /// Alice's B round in the split topology).
    b_ops: Vec<PauliOperator>,
    pure_z: Vec<bool>,
    /// First correction stage: BC code (chain), B code (split) or Bob's
    /// Bell code.
    first: CheckSet,
    first_sources: Vec<Option<usize>>,
    /// Charlie's code (GHZ only).
    second: Option<CheckSet>,
    combos: Vec<Option<BitVec>>,
}

impl fmt::Debug for ProtocolEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProtocolEngine").field("config", &self.config).finish_non_exhaustive()
    }
}

impl ProtocolEngine {
    pub fn new(config: ProtocolConfig) -> Result<Self> {
        config.validate()?;
        let code = &config.code;
        let n = code.n();
        let gens = code.standard_form().generators();
        let a: Vec<usize> = (0..n).collect();
        let b: Vec<usize> = (n..2 * n).collect();
        let c: Vec<usize> = (2 * n..3 * n).collect();
        let bc: Vec<usize> = (n..3 * n).collect();
        let pure_z: Vec<bool> = gens.iter().map(|g| g.x().is_zero()).collect();
        let alice_signs = gens.iter().map(PauliOperator::is_negative).collect();
        let name = code.name();

        let mut engine = match config.protocol {
            ProtocolKind::Bell => {
                let total = 2 * n;
                let alice_ops = gens.iter().map(|g| g.embed(total, &a)).collect::<Result<Vec<_>>>()?;
                let partner = induce::bell_partner(code, &BitVec::zeros(gens.len()))?;
                let first = CheckSet::new(&format!("{name}-bob"), partner.generators(), b.clone(), total)?;
                let first_sources = (0..gens.len()).map(Some).collect();
                Self {
                    n,
                    clifford: None,
                    alice_ops,
                    alice_signs,
                    b_ops: Vec::new(),
                    pure_z,
                    first,
                    first_sources,
                    second: None,
                    combos: Vec::new(),
                    config: config.clone(),
                }
            }
            ProtocolKind::Ghz => {
                let total = 3 * n;
                let clifford = induce::placement_clifford(code, config.placement)?;
                let alice_ops = gens.iter().map(|g| g.embed(total, &a)).collect::<Result<Vec<_>>>()?;
                let b_ops = gens.iter().map(|g| g.unsigned().embed(total, &b)).collect::<Result<Vec<_>>>()?;
                let (first, first_sources) = match config.topology {
                    Topology::Chain => {
                        let (rows, sources) = induce::bc_rows(code, config.placement, clifford.as_ref())?;
                        (CheckSet::new(&format!("{name}-bc"), &rows, bc, total)?, sources)
                    }
                    Topology::SplitAtSource => {
                        let unsigned: Vec<PauliOperator> = gens.iter().map(PauliOperator::unsigned).collect();
                        let sources = (0..gens.len()).map(Some).collect();
                        (CheckSet::new(&format!("{name}-b"), &unsigned, b, total)?, sources)
                    }
                };
                // In the split topology Bob never holds C, so Charlie applies
                // the Clifford after his own correction.
                let charlie_placement = match (config.topology, config.placement) {
                    (Topology::SplitAtSource, Placement::BobApplies) => Placement::NoClifford,
                    (_, p) => p,
                };
                let rows = induce::charlie_rows(code, charlie_placement, clifford.as_ref())?;
                let second = CheckSet::new(&format!("{name}-c"), &rows, c, total)?;
                Self {
                    n,
                    clifford,
                    alice_ops,
                    alice_signs,
                    b_ops,
                    pure_z,
                    first,
                    first_sources,
                    second: Some(second),
                    combos: Vec::new(),
                    config: config.clone(),
                }
            }
        };

        let errors = InjectedErrors::none(&config);
        let mut inputs = ScriptedInputs { outcomes: &mut ConstantOutcome(false), errors: &errors };
        let (_, recorded) = engine.run_inner_combos(&mut inputs, Combos::Record(Vec::new()), None, &mut None)?;
        engine.combos = recorded.unwrap_or_default();
        Ok(engine)
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    /// The Clifford used by this placement, if any.
    pub fn clifford(&self) -> Option<&SymmetricBinaryMatrix> {
        self.clifford.as_ref()
    }

    /// Decoder of the first correction stage.
    pub fn first_table(&self) -> &SyndromeTable {
        &self.first.table
    }

    /// Decoder of Charlie's stage.
    pub fn second_table(&self) -> Option<&SyndromeTable> {
        self.second.as_ref().map(|s| &s.table)
    }

    /// Trial `index` of the configured run, with its own random stream.
    pub fn run_indexed(&self, index: u64) -> Result<TrialResult> {
        let mut rng = trial_rng(self.config.seed, index);
        self.run_with_rng(&mut rng)
    }

    pub fn run_with_rng<R: Rng>(&self, rng: &mut R) -> Result<TrialResult> {
        let mut inputs = RandomInputs { rng, channel: &self.config.channel };
        self.run_inner(&mut inputs, self.replay(), None, &mut None)
    }

    /// Deterministic trial with scripted outcomes and errors; the operations
    /// applied to the noisy tableau are appended to `trace` when given.
    pub fn run_injected(
        &self,
        errors: &InjectedErrors,
        outcomes: &mut dyn OutcomeSource,
        trace: Option<&mut Vec<TraceOp>>,
    ) -> Result<TrialResult> {
        let none = InjectedErrors::none(&self.config);
        let split_or_bell = self.config.protocol == ProtocolKind::Bell || self.config.topology == Topology::SplitAtSource;
        if errors.first.num_qubits() != none.first.num_qubits() || errors.second.num_qubits() != none.second.num_qubits() {
            return Err(Error::DimensionMismatch("injected errors have the wrong number of qubits".into()));
        }
        if split_or_bell && !errors.second.is_identity() {
            return Err(Error::InvalidConfig("no second transmission in this configuration".into()));
        }
        self.run_inner(&mut ScriptedInputs { outcomes, errors }, self.replay(), trace, &mut None)
    }

    /// Final noisy tableau of a scripted trial.
    pub fn final_tableau(&self, errors: &InjectedErrors, outcomes: &mut dyn OutcomeSource) -> Result<StabilizerTableau> {
        let mut out = None;
        self.run_inner(&mut ScriptedInputs { outcomes, errors }, self.replay(), None, &mut out)?;
        out.ok_or_else(|| Error::Internal("trial produced no tableau".into()))
    }

    /// Runs every configured trial, in parallel, and aggregates.
    pub fn estimate(&self) -> Result<DistillationReport> {
        let counts = (0..self.config.trials)
            .into_par_iter()
            .map(|i| self.run_indexed(i).map(|t| Counts::of(&t)))
            .try_reduce(Counts::default, |a, b| Ok(a + b))?;
        Ok(DistillationReport::from_counts(self.config.trials, counts))
    }

    fn replay(&self) -> Combos<'_> {
        Combos::Replay { list: &self.combos, next: 0 }
    }

    fn run_inner(
        &self,
        inputs: &mut dyn TrialInputs,
        combos: Combos<'_>,
        trace: Option<&mut Vec<TraceOp>>,
        out: &mut Option<StabilizerTableau>,
    ) -> Result<TrialResult> {
        self.run_inner_combos(inputs, combos, trace, out).map(|(r, _)| r)
    }

    fn run_inner_combos<'a>(
        &'a self,
        inputs: &mut dyn TrialInputs,
        combos: Combos<'a>,
        trace: Option<&'a mut Vec<TraceOp>>,
        out: &mut Option<StabilizerTableau>,
    ) -> Result<(TrialResult, Option<Vec<Option<BitVec>>>)> {
        let initial = match self.config.protocol {
            ProtocolKind::Bell => StabilizerTableau::new_bell(self.n),
            ProtocolKind::Ghz => StabilizerTableau::new_ghz(self.n, false),
        };
        let mut ls = Lockstep::new(initial, combos, trace);
        let result = match self.config.protocol {
            ProtocolKind::Bell => self.bell_steps(&mut ls, inputs)?,
            ProtocolKind::Ghz => self.ghz_steps(&mut ls, inputs)?,
        };
        let recorded = match ls.combos {
            Combos::Record(list) => Some(list),
            Combos::Replay { list, next } => {
                if next != list.len() {
                    return Err(Error::Internal("measurement schedule shorter than recorded".into()));
                }
                None
            }
        };
        *out = Some(ls.trial);
        Ok((result, recorded))
    }

    /// Alice's measurements on A; returns `ε^A` as "negative" flags.
    fn alice_round(&self, ls: &mut Lockstep<'_>, inputs: &mut dyn TrialInputs) -> Result<Vec<bool>> {
        let mut eps = Vec::with_capacity(self.alice_ops.len());
        for (op, &neg) in self.alice_ops.iter().zip(&self.alice_signs) {
            let (mt, mr) = ls.measure(op, inputs)?;
            if mt != mr {
                return Err(Error::Internal("Alice's outcomes differ between trial and reference".into()));
            }
            eps.push(mt ^ neg);
        }
        Ok(eps)
    }

    /// Measures a check set, compares against `expected` (negative flags),
    /// decodes and corrects. The reference must match `expected_ref` exactly.
    fn check_round(
        &self,
        set: &CheckSet,
        expected: &[bool],
        expected_ref: &[bool],
        ls: &mut Lockstep<'_>,
        inputs: &mut dyn TrialInputs,
    ) -> Result<Round> {
        let mut index = 0usize;
        for (i, op) in set.ops.iter().enumerate() {
            let (mt, mr) = ls.measure(op, inputs)?;
            if mr != expected_ref[i] {
                return Err(Error::Internal(format!(
                    "reference run has the wrong sign on check {i} ({op}) of {}",
                    set.code.name()
                )));
            }
            if mt != expected[i] {
                index |= 1 << i;
            }
        }
        let Some(leader) = set.table.leader(index) else {
            return Ok(Round { correction: None });
        };
        let correction = leader.clone();
        ls.pauli(&correction.embed(ls.trial.num_qubits(), &set.qubits)?)?;
        Ok(Round { correction: Some(correction) })
    }

    fn bell_steps(&self, ls: &mut Lockstep<'_>, inputs: &mut dyn TrialInputs) -> Result<TrialResult> {
        let n = self.n;
        let m: Vec<bool> = {
            let mut m = Vec::with_capacity(self.alice_ops.len());
            for op in &self.alice_ops {
                let (mt, mr) = ls.measure(op, inputs)?;
                if mt != mr {
                    return Err(Error::Internal("Alice's outcomes differ between trial and reference".into()));
                }
                m.push(mt);
            }
            m
        };
        let error = inputs.error(0, n)?;
        ls.pauli(&error.embed(2 * n, &self.first.qubits)?)?;
        let round = self.check_round(&self.first, &m, &m, ls, inputs)?;
        let stage_failed = match &round.correction {
            Some(corr) => !self.first.harmless(&corr.multiply(&error)?),
            None => true,
        };
        Ok(TrialResult {
            success: ls.signs_match(),
            bc_stage_failed: stage_failed,
            c_stage_failed: false,
            decoder_miss: round.correction.is_none(),
        })
    }

    fn ghz_steps(&self, ls: &mut Lockstep<'_>, inputs: &mut dyn TrialInputs) -> Result<TrialResult> {
        let n = self.n;
        let total = 3 * n;
        let c_qubits: Vec<usize> = (2 * n..3 * n).collect();
        let second = self.second.as_ref().ok_or_else(|| Error::Internal("GHZ engine without Charlie's code".into()))?;
        let placement = self.config.placement;
        let split = self.config.topology == Topology::SplitAtSource;

        let eps_a = self.alice_round(ls, inputs)?;

        // ε^B as negative flags, for the trial and the reference; purely Z
        // rows keep +1.
        let mut eps_b_t = vec![false; eps_a.len()];
        let mut eps_b_r = vec![false; eps_a.len()];
        if split {
            for (i, op) in self.b_ops.iter().enumerate() {
                let (mt, mr) = ls.measure(op, inputs)?;
                if !self.pure_z[i] {
                    eps_b_t[i] = mt;
                    eps_b_r[i] = mr;
                }
            }
        }
        if placement == Placement::AliceApplies {
            ls.clifford(self.clifford_matrix()?, &c_qubits)?;
        }

        let first_error = inputs.error(0, 2 * n)?;
        ls.pauli(&first_error.embed(total, &(n..3 * n).collect::<Vec<_>>())?)?;

        let (expected_t, expected_r) = if split {
            // Bob's n-qubit code carries the signs Alice saw on B.
            let f = |eps_b: &[bool]| -> Vec<bool> {
                (0..eps_a.len()).map(|i| if self.pure_z[i] { eps_a[i] } else { eps_b[i] }).collect()
            };
            (f(&eps_b_t), f(&eps_b_r))
        } else {
            let e: Vec<bool> = self.first_sources.iter().map(|s| s.is_some_and(|i| eps_a[i])).collect();
            (e.clone(), e)
        };
        let round = self.check_round(&self.first, &expected_t, &expected_r, ls, inputs)?;
        let first_local = if split { first_error.restrict(&(0..n).collect::<Vec<_>>()) } else { first_error.clone() };
        let bc_failed = match &round.correction {
            Some(corr) => !self.first.harmless(&corr.multiply(&first_local)?),
            None => true,
        };

        if !split {
            for (i, op) in self.b_ops.iter().enumerate() {
                let (mt, mr) = ls.measure(op, inputs)?;
                if self.pure_z[i] {
                    if mr != eps_a[i] {
                        return Err(Error::Internal(format!("reference sign of purely Z generator {i} on B is not ε^A")));
                    }
                } else {
                    eps_b_t[i] = mt;
                    eps_b_r[i] = mr;
                }
            }
            if placement == Placement::BobApplies {
                ls.clifford(self.clifford_matrix()?, &c_qubits)?;
            }
        }

        let c_error = if split {
            first_error.restrict(&(n..2 * n).collect::<Vec<_>>())
        } else {
            let e = inputs.error(1, n)?;
            ls.pauli(&e.embed(total, &c_qubits)?)?;
            e
        };
        let expected_c_t: Vec<bool> = (0..eps_a.len()).map(|i| eps_a[i] ^ eps_b_t[i]).collect();
        let expected_c_r: Vec<bool> = (0..eps_a.len()).map(|i| eps_a[i] ^ eps_b_r[i]).collect();
        let round_c = self.check_round(second, &expected_c_t, &expected_c_r, ls, inputs)?;
        let c_failed = match &round_c.correction {
            Some(corr) => !second.harmless(&corr.multiply(&c_error)?),
            None => true,
        };
        if split && placement == Placement::BobApplies {
            ls.clifford(self.clifford_matrix()?, &c_qubits)?;
        }

        Ok(TrialResult {
            success: ls.signs_match(),
            bc_stage_failed: bc_failed,
            c_stage_failed: c_failed,
            decoder_miss: round.correction.is_none() || round_c.correction.is_none(),
        })
    }

    fn clifford_matrix(&self) -> Result<&SymmetricBinaryMatrix> {
        self.clifford.as_ref().ok_or_else(|| Error::Internal("placement needs a Clifford".into()))
    }
}

/// Random stream for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Prepares the engine and runs every trial.
pub fn estimate(config: &ProtocolConfig) -> Result<DistillationReport> {
    ProtocolEngine::new(config.clone())?.estimate()
}

/// One GHZ trial with the configuration's channel and the given randomness.
pub fn run_ghz_trial<R: Rng>(engine: &ProtocolEngine, rng: &mut R) -> Result<TrialResult> {
    if engine.config.protocol != ProtocolKind::Ghz {
        return Err(Error::InvalidConfig("engine is not configured for GHZ distillation".into()));
    }
    engine.run_with_rng(rng)
}

/// One Bell-pair trial.
pub fn run_bell_trial<R: Rng>(code: &StabilizerCode, channel: &ChannelModel, rng: &mut R) -> Result<TrialResult> {
    ProtocolEngine::new(ProtocolConfig::bell(code.clone(), *channel))?.run_with_rng(rng)
}

/// Whether standard error correction of `error` with `table` leaves a
/// stabilizer (success) or a logical operator.
pub fn qec_corrects(code: &StabilizerCode, table: &SyndromeTable, error: &PauliOperator) -> bool {
    let Some(leader) = table.leader(table.syndrome_index(error)) else {
        return false;
    };
    let residual = leader.multiply(error).expect("same number of qubits");
    residual.is_identity() || code.in_unsigned_group(&residual)
}

/// Standard error correction of `code` on the channel, one `n`-qubit block
/// per trial, with the same per-trial random streams as [`estimate`].
pub fn qec_baseline(code: &StabilizerCode, channel: &ChannelModel, trials: u64, seed: u64) -> Result<DistillationReport> {
    channel.validate()?;
    let table = SyndromeTable::build(code, None)?;
    let n = code.n();
    let failures: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let e = channel.sample(n, &mut rng);
            u64::from(!qec_corrects(code, &table, &e))
        })
        .sum();
    let counts = Counts { failures, bc: failures, c: 0, misses: 0 };
    Ok(DistillationReport::from_counts(trials, counts))
}
