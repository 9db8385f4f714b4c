use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Every value that crosses between users and the server. Payloads are
/// always post-noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RoundMessage {
    NoisyDegree { user: usize, value: f64 },
    DeltaBroadcast { delta: f64 },
    VectorBroadcast { round: usize, values: Vec<f64> },
    UserValue { round: usize, user: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Degree,
    Delta,
    Init,
    Iterate,
    Aggregate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sender {
    Server,
    User(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub phase: Phase,
    pub round: usize,
    pub sender: Sender,
    pub payload: RoundMessage,
}

/// Destination for protocol messages, in the order they are sent.
pub trait TranscriptSink {
    fn record(&mut self, record: TranscriptRecord) -> Result<()>;
    fn count(&self) -> usize;
}

/// Keeps every record in memory.
#[derive(Debug, Clone, Default)]
pub struct Transcript {
    pub records: Vec<TranscriptRecord>,
}

impl TranscriptSink for Transcript {
    fn record(&mut self, record: TranscriptRecord) -> Result<()> {
        self.records.push(record);
        Ok(())
    }

    fn count(&self) -> usize {
        self.records.len()
    }
}

/// Counts messages without keeping them.
#[derive(Debug, Clone, Copy, Default)]
pub struct CountingSink {
    pub messages: usize,
}

impl TranscriptSink for CountingSink {
    fn record(&mut self, _record: TranscriptRecord) -> Result<()> {
        self.messages += 1;
        Ok(())
    }

    fn count(&self) -> usize {
        self.messages
    }
}

/// Streams records as newline-delimited JSON, preceded by one header line.
pub struct NdjsonSink<W: Write> {
    out: W,
    messages: usize,
}

impl<W: Write> NdjsonSink<W> {
    /// Writes `header` as the first line.
    pub fn new<H: Serialize>(mut out: W, header: &H) -> Result<Self> {
        serde_json::to_writer(&mut out, header).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
        Ok(NdjsonSink { out, messages: 0 })
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> TranscriptSink for NdjsonSink<W> {
    fn record(&mut self, record: TranscriptRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, &record).map_err(std::io::Error::from)?;
        self.out.write_all(b"\n")?;
        self.messages += 1;
        Ok(())
    }

    fn count(&self) -> usize {
        self.messages
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ndjson_lines() {
        let mut sink = NdjsonSink::new(Vec::new(), &serde_json::json!({"n": 2})).unwrap();
        sink.record(TranscriptRecord {
            phase: Phase::Iterate,
            round: 1,
            sender: Sender::User(1),
            payload: RoundMessage::UserValue { round: 1, user: 1, value: 0.5 },
        })
        .unwrap();
        assert_eq!(sink.count(), 1);
        let text = String::from_utf8(sink.into_inner()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], r#"{"n":2}"#);
        assert_eq!(
            lines[1],
            r#"{"phase":"iterate","round":1,"sender":{"user":1},"payload":{"type":"user_value","round":1,"user":1,"value":0.5}}"#
        );
        let back: TranscriptRecord = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(back.sender, Sender::User(1));
    }
}
