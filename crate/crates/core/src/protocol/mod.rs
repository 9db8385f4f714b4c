//! The private power iteration protocol as an explicit server/user message
//! exchange.
//!
//! Phases run strictly in order: noisy degree reports, the server's δ,
//! local padding, the start vector, `T` noisy rounds and the final cut.
//! Within a round users are independent and run in parallel; aggregation
//! is the barrier.

mod config;
mod laplace;
mod ledger;
mod message;
mod server;
mod user;

pub use config::{ProtocolConfig, DEFAULT_CLIP_FACTOR};
pub use laplace::laplace_sample;
pub use ledger::{LedgerEntry, PrivacyLedger, QueryLabel};
pub use message::{
    CountingSink, NdjsonSink, Phase, RoundMessage, Sender, Transcript, TranscriptRecord, TranscriptSink,
};
pub use server::ServerState;
pub use user::{clip, AdjacencyView, PaddingOutcome, RoundInput, UserState};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cut, Graph};

/// Aggregate effect of the padding phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PaddingReport {
    pub users_padded: usize,
    pub edges_added: usize,
    /// Users whose row filled up before reaching δ.
    pub saturated: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Start,
    Reported,
    Delta,
    Padded,
    Running,
    Done,
}

/// One protocol instance: the server, all users and the message schedule.
#[derive(Debug)]
pub struct Protocol {
    cfg: ProtocolConfig,
    users: Vec<UserState>,
    server: ServerState,
    reports: Vec<(usize, f64)>,
    padding: PaddingReport,
    stage: Stage,
}

fn in_phase<T>(phase: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Phase {
        phase,
        source: Box::new(e),
    })
}

impl Protocol {
    /// Hands each user its own adjacency row.
    pub fn new(g: &Graph, cfg: ProtocolConfig) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::argument("protocol needs at least one user"));
        }
        cfg.validate(n)?;
        let users = (0..n)
            .map(|i| {
                let view = AdjacencyView::new(n, g.neighbors(i).to_vec());
                UserState::new(i, view, cfg.epsilon, cfg.seed)
            })
            .collect();
        Ok(Protocol {
            cfg,
            users,
            server: ServerState::new(n, cfg.epsilon),
            reports: Vec::with_capacity(n),
            padding: PaddingReport::default(),
            stage: Stage::Start,
        })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.cfg
    }

    pub fn users(&self) -> &[UserState] {
        &self.users
    }

    /// Direct access to user state, for neighboring-input experiments.
    pub fn users_mut(&mut self) -> &mut [UserState] {
        &mut self.users
    }

    pub fn server(&self) -> &ServerState {
        &self.server
    }

    pub fn padding(&self) -> PaddingReport {
        self.padding
    }

    fn expect(&self, stage: Stage, what: &str) -> Result<()> {
        if self.stage != stage {
            return Err(Error::order(format!("{what} out of order (at stage {:?})", self.stage)));
        }
        Ok(())
    }

    pub fn report_degrees(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        in_phase("degree", self.report_degrees_inner(sink))
    }

    fn report_degrees_inner(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        self.expect(Stage::Start, "degree reports")?;
        for u in &mut self.users {
            let value = u.report_degree(&self.cfg)?;
            let user = u.index();
            sink.record(TranscriptRecord {
                phase: Phase::Degree,
                round: 0,
                sender: Sender::User(user),
                payload: RoundMessage::NoisyDegree { user, value },
            })?;
            self.reports.push((user, value));
        }
        self.stage = Stage::Reported;
        Ok(())
    }

    pub fn compute_delta(&mut self, sink: &mut dyn TranscriptSink) -> Result<f64> {
        in_phase("delta", self.compute_delta_inner(sink))
    }

    fn compute_delta_inner(&mut self, sink: &mut dyn TranscriptSink) -> Result<f64> {
        self.expect(Stage::Reported, "δ computation")?;
        let delta = self.server.compute_delta(&self.reports, &self.cfg)?;
        sink.record(TranscriptRecord {
            phase: Phase::Delta,
            round: 0,
            sender: Sender::Server,
            payload: RoundMessage::DeltaBroadcast { delta },
        })?;
        self.stage = Stage::Delta;
        Ok(delta)
    }

    pub fn pad(&mut self) -> Result<PaddingReport> {
        in_phase("padding", self.pad_inner())
    }

    fn pad_inner(&mut self) -> Result<PaddingReport> {
        self.expect(Stage::Delta, "padding")?;
        let delta = self.delta();
        let mut report = PaddingReport::default();
        for u in &mut self.users {
            let out = u.pad_edges(delta, &self.cfg)?;
            if out.added > 0 {
                report.users_padded += 1;
                report.edges_added += out.added;
            }
            if out.saturated {
                report.saturated += 1;
            }
        }
        self.padding = report;
        self.stage = Stage::Padded;
        Ok(report)
    }

    pub fn initialize(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        in_phase("init", self.initialize_inner(sink))
    }

    fn initialize_inner(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        self.expect(Stage::Padded, "initialization")?;
        let values = self.server.init(&self.cfg)?.to_vec();
        sink.record(TranscriptRecord {
            phase: Phase::Init,
            round: 0,
            sender: Sender::Server,
            payload: RoundMessage::VectorBroadcast { round: 0, values },
        })?;
        self.stage = Stage::Running;
        Ok(())
    }

    /// Runs one round: every user publishes, the server aggregates and
    /// broadcasts.
    pub fn step(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        in_phase("iterate", self.step_inner(sink))
    }

    fn step_inner(&mut self, sink: &mut dyn TranscriptSink) -> Result<()> {
        self.expect(Stage::Running, "iteration")?;
        let prev_round = self.server.round();
        let t = prev_round + 1;
        if t > self.cfg.iterations {
            return Err(Error::order(format!("round {t} beyond T = {}", self.cfg.iterations)));
        }
        let delta = self.delta();
        let cfg = self.cfg;
        let broadcast = self.server.current().expect("running stage has a vector");
        let input = RoundInput::new(prev_round, broadcast);
        let values: Vec<(usize, f64)> = self
            .users
            .par_iter_mut()
            .map(|u| u.iterate(&input, delta, &cfg).map(|v| (u.index(), v)))
            .collect::<Result<_>>()?;
        for &(user, value) in &values {
            sink.record(TranscriptRecord {
                phase: Phase::Iterate,
                round: t,
                sender: Sender::User(user),
                payload: RoundMessage::UserValue { round: t, user, value },
            })?;
        }
        let next = in_phase("aggregate", self.server.aggregate(t, &values, &cfg))?.to_vec();
        sink.record(TranscriptRecord {
            phase: Phase::Aggregate,
            round: t,
            sender: Sender::Server,
            payload: RoundMessage::VectorBroadcast { round: t, values: next },
        })?;
        if t == cfg.iterations {
            self.stage = Stage::Done;
        }
        Ok(())
    }

    pub fn extract(&self) -> Result<Cut> {
        in_phase("extract", self.server.extract_cut(&self.cfg))
    }

    fn delta(&self) -> f64 {
        self.server.delta().expect("δ computed before use")
    }

    /// Consumes the instance after the last round.
    pub fn finish(self, messages: usize) -> Result<ProtocolOutcome> {
        let cut = self.extract()?;
        let delta = self.delta();
        let final_vector = self.server.current().unwrap_or_default().to_vec();
        Ok(ProtocolOutcome {
            cut,
            ledger: self.server.ledger().clone(),
            user_ledgers: self.users.into_iter().map(|u| u.ledger().clone()).collect(),
            delta,
            final_vector,
            padding: self.padding,
            messages,
        })
    }
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub cut: Cut,
    /// Per-user spend as announced by the schedule (identical for all users).
    pub ledger: PrivacyLedger,
    /// Each user's own ledger.
    pub user_ledgers: Vec<PrivacyLedger>,
    pub delta: f64,
    /// `x⁽ᵀ⁾`.
    pub final_vector: Vec<f64>,
    pub padding: PaddingReport,
    pub messages: usize,
}

/// Messages in a complete run: `n` degree reports, one δ, one start
/// vector, and `n + 1` per round.
pub fn expected_message_count(n: usize, iterations: usize) -> usize {
    n + 1 + 1 + iterations * (n + 1)
}

/// Runs the private protocol, keeping the transcript in memory.
///
/// Configurations with noise or padding switched off are refused; use
/// [`run_protocol_non_private`] for those.
pub fn run_protocol(g: &Graph, cfg: &ProtocolConfig) -> Result<(ProtocolOutcome, Transcript)> {
    refuse_non_private(cfg)?;
    let mut transcript = Transcript::default();
    let outcome = drive(g, cfg, &mut transcript)?;
    Ok((outcome, transcript))
}

/// Runs the private protocol, sending every message to `sink`.
pub fn run_protocol_with_sink(
    g: &Graph,
    cfg: &ProtocolConfig,
    sink: &mut dyn TranscriptSink,
) -> Result<ProtocolOutcome> {
    refuse_non_private(cfg)?;
    drive(g, cfg, sink)
}

/// Same schedule with the noise and padding hooks honored. The output is
/// not differentially private when either is off.
pub fn run_protocol_non_private(
    g: &Graph,
    cfg: &ProtocolConfig,
    sink: &mut dyn TranscriptSink,
) -> Result<ProtocolOutcome> {
    drive(g, cfg, sink)
}

fn refuse_non_private(cfg: &ProtocolConfig) -> Result<()> {
    if !cfg.is_private() {
        return Err(Error::argument(
            "noise and padding must both be enabled for a private run",
        ));
    }
    Ok(())
}

fn drive(g: &Graph, cfg: &ProtocolConfig, sink: &mut dyn TranscriptSink) -> Result<ProtocolOutcome> {
    let start = sink.count();
    let mut p = Protocol::new(g, *cfg)?;
    p.report_degrees(sink)?;
    p.compute_delta(sink)?;
    p.pad()?;
    p.initialize(sink)?;
    for _ in 0..cfg.iterations {
        p.step(sink)?;
    }
    let messages = sink.count() - start;
    p.finish(messages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::seed::Seed;
    use crate::spectral::{pic_cut, pic_vector};

    #[test]
    fn full_run_spends_exactly_epsilon() {
        let g = fixtures::complete(30);
        let cfg = ProtocolConfig::new(10.0, 7, Seed(3));
        let (out, transcript) = run_protocol(&g, &cfg).unwrap();
        assert!((out.ledger.total() - 10.0).abs() < 1e-12);
        assert_eq!(out.ledger.len(), 8);
        for l in &out.user_ledgers {
            assert!((l.total() - 10.0).abs() < 1e-12);
            assert_eq!(l.len(), 8);
        }
        assert_eq!(transcript.records.len(), expected_message_count(30, 7));
        assert_eq!(out.messages, transcript.records.len());
    }

    #[test]
    fn noise_free_matches_pic() {
        let g = fixtures::barbell_triangles();
        let cfg = ProtocolConfig::new(1.0, 12, Seed(8)).noise_free();
        let out = run_protocol_non_private(&g, &cfg, &mut CountingSink::default()).unwrap();
        let reference = pic_vector(&g, 12, Seed(8), true, 0.5).unwrap();
        for (a, b) in out.final_vector.iter().zip(&reference) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert_eq!(out.cut, pic_cut(&g, 12, Seed(8), true, 0.5).unwrap());
    }

    #[test]
    fn refuses_hooks_on_private_entry_point() {
        let g = fixtures::complete(4);
        let cfg = ProtocolConfig::new(1.0, 2, Seed(0)).noise_free();
        assert!(matches!(run_protocol(&g, &cfg), Err(Error::Argument(_))));
    }

    #[test]
    fn sparse_graph_fails_in_iterate_phase() {
        let g = fixtures::cycle(20);
        let cfg = ProtocolConfig::new(1.0, 3, Seed(0));
        let err = run_protocol(&g, &cfg).unwrap_err();
        match &err {
            Error::Phase { phase, source } => {
                assert_eq!(*phase, "iterate");
                assert!(matches!(**source, Error::Domain(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn phases_must_run_in_order() {
        let g = fixtures::complete(5);
        let mut p = Protocol::new(&g, ProtocolConfig::new(1.0, 2, Seed(0))).unwrap();
        let mut sink = CountingSink::default();
        assert!(p.compute_delta(&mut sink).is_err());
        assert!(p.step(&mut sink).is_err());
        p.report_degrees(&mut sink).unwrap();
        assert!(matches!(p.report_degrees(&mut sink).unwrap_err().root(), Error::ProtocolOrder(_)));
        assert!(p.extract().is_err());
    }

    #[test]
    fn isolated_node_is_domain_error() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let cfg = ProtocolConfig::new(1.0, 1, Seed(0)).noise_free();
        let err = run_protocol_non_private(&g, &cfg, &mut CountingSink::default()).unwrap_err();
        assert!(matches!(err.root(), Error::Domain(_)));
    }
}
