//! CSV emission: header rows, '.' decimal separator, LF line endings.
//!
//! Everything except the wall-clock columns is bitwise reproducible across
//! runs of the same configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use diterate::{RunResult, TraceRecord};

pub const RUN_HEADER: &str = "algo,n,l,d,target,m,transpose,diag_elim,nb_iter,entry_ops,\
                              diffusions,wall_ms,final_error,checksum,status";

/// A line writer over a file or standard output.
pub struct CsvSink {
    inner: Box<dyn Write>,
}

impl CsvSink {
    pub fn create(path: Option<&Path>) -> std::io::Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(CsvSink { inner })
    }

    pub fn write_line(&mut self, line: &str) -> std::io::Result<()> {
        self.inner.write_all(line.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.inner.flush()
    }
}

/// The measured half of a run row; absent when the run did not converge.
pub struct Outcome {
    pub nb_iter: f64,
    pub entry_ops: u64,
    pub diffusions: u64,
    pub wall_ms: f64,
    pub final_error: f64,
    pub checksum: f64,
}

impl Outcome {
    pub fn from_result(result: &RunResult) -> Self {
        Outcome {
            nb_iter: result.nb_iter,
            entry_ops: result.entry_ops,
            diffusions: result.diffusions,
            wall_ms: result.wall.as_secs_f64() * 1e3,
            final_error: result.final_error,
            checksum: result.checksum,
        }
    }
}

/// One result row of the run/suite CSV.
pub struct RunRow {
    pub algo: &'static str,
    pub n: usize,
    pub l: usize,
    pub d: f64,
    pub target: f64,
    pub m: u64,
    pub transpose: bool,
    pub diag_elim: bool,
    pub outcome: Option<Outcome>,
}

impl RunRow {
    pub fn to_csv(&self) -> String {
        let config = format!(
            "{},{},{},{},{},{},{},{}",
            self.algo, self.n, self.l, self.d, self.target, self.m, self.transpose, self.diag_elim
        );
        match &self.outcome {
            Some(o) => format!(
                "{config},{},{},{},{},{},{},ok",
                o.nb_iter, o.entry_ops, o.diffusions, o.wall_ms, o.final_error, o.checksum
            ),
            None => format!("{config},,,,,,,no-convergence"),
        }
    }
}

/// Writes the per-cycle trace of one run.
pub fn write_trace(path: &Path, trace: &[TraceRecord]) -> std::io::Result<()> {
    let mut sink = CsvSink::create(Some(path))?;
    sink.write_line("cycle,entry_ops,nb_iter,corrected_error,elapsed_ms")?;
    for record in trace {
        sink.write_line(&format!(
            "{},{},{},{},{}",
            record.cycle, record.entry_ops, record.nb_iter, record.corrected_error,
            record.elapsed_ms
        ))?;
    }
    Ok(())
}
