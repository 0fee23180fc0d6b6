//! Run manifests: a reproducibility record written alongside every payload.
//!
//! A manifest pins down everything the payload is a function of — command,
//! full parameter set, seed, toolkit version, and a content digest of each
//! input file — plus the wall-clock timings, which are deliberately the
//! *only* volatile part. Two runs whose manifests agree up to the timing
//! lines must produce byte-identical payloads.

use std::fmt::Display;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use sha2::{Digest, Sha256};

/// Accumulates manifest lines; rendered once the command has finished so the
/// timing can land at the end, after the stable prefix.
pub struct Manifest {
    text: String,
    started: Instant,
}

impl Manifest {
    pub fn new(command: &str, seed: u64) -> Manifest {
        let mut text = String::from("[manifest]\n");
        let _ = writeln!(text, "command = {command}");
        let _ = writeln!(text, "version = {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "seed = {seed}");
        Manifest {
            text,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        let _ = writeln!(self.text, "param.{key} = {value}");
    }

    /// Records an input file's path and the SHA-256 digest of its content.
    pub fn input(&mut self, path: &Path, content: &str) {
        let _ = writeln!(self.text, "input.path = {}", path.display());
        let _ = writeln!(
            self.text,
            "input.sha256 = {:x}",
            Sha256::digest(content.as_bytes())
        );
    }

    /// Closes the manifest with the elapsed wall-clock time.
    pub fn render(mut self) -> String {
        let _ = writeln!(
            self.text,
            "timing.total_ms = {:.3}",
            self.started.elapsed().as_secs_f64() * 1e3
        );
        self.text
    }
}
