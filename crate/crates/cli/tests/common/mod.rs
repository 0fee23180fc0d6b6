//! Shared helpers for the CLI test suites: binary invocation, payload
//! parsing, fixture generation, and the independent numeric oracles that the
//! acceptance criteria are judged against.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use discrepancy::coloring::SetSystem;
use discrepancy::gaussian::{gaussian_cdf, sample_gaussian};
use discrepancy::RandomSource;

// ---------------------------------------------------------------------------
// Binary invocation
// ---------------------------------------------------------------------------

/// Fresh command for the `disc` binary under test.
pub fn disc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_disc"))
}

pub fn run(args: &[&str]) -> Output {
    disc().args(args).output().expect("binary runs")
}

pub fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

pub fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

/// Parses a key=value payload into a map keyed by `section.key`. Lines that
/// are neither bare `[section]` headers nor `key = value` pairs (e.g. log
/// output interleaved on stderr) are ignored.
pub fn parse_kv(text: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let mut section = String::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('[') && line.ends_with(']') && !line.contains(' ') {
            section = line[1..line.len() - 1].to_string();
        } else if let Some((key, value)) = line.split_once(" = ") {
            map.insert(format!("{section}.{key}"), value.to_string());
        }
    }
    map
}

pub fn kv_f64(map: &BTreeMap<String, String>, key: &str) -> f64 {
    map.get(key)
        .unwrap_or_else(|| panic!("payload missing {key}"))
        .parse()
        .unwrap_or_else(|_| panic!("{key} is not a number"))
}

pub fn kv_usize(map: &BTreeMap<String, String>, key: &str) -> usize {
    map.get(key)
        .unwrap_or_else(|| panic!("payload missing {key}"))
        .parse()
        .unwrap_or_else(|_| panic!("{key} is not an integer"))
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("fixture write");
    path
}

// ---------------------------------------------------------------------------
// Fixture texts
// ---------------------------------------------------------------------------

/// Body file for the cube `[-t, t]^n`.
pub fn cube_body_text(n: usize, t: f64) -> String {
    let mut out = format!("dim {n}\n");
    for i in 0..n {
        out.push_str(&format!("interval {i} -{t} {t}\n"));
    }
    out
}

/// Body file for the halfspace `{x : x_0 >= offset}` in dimension `n`.
pub fn halfspace_body_text(n: usize, offset: f64) -> String {
    let mut normal = vec!["0".to_string(); n];
    normal[0] = "1".to_string();
    format!("dim {n}\nhalf {} {offset}\n", normal.join(" "))
}

/// Deterministic half-density random set system: element `i` joins set `j`
/// on the sign of an independent Gaussian; empty sets get one fallback
/// element so the file format can express them.
pub fn random_system(n: usize, m: usize, seed: u64) -> SetSystem {
    let g = sample_gaussian(n * m, &RandomSource::new(seed));
    let sets = (0..m)
        .map(|j| {
            let mut set: Vec<usize> = (0..n).filter(|&i| g[j * n + i] > 0.0).collect();
            if set.is_empty() {
                set.push(j % n);
            }
            set
        })
        .collect();
    SetSystem::new(n, sets).expect("valid system")
}

/// Uniform-in-(0,1) stream derived from Gaussians; handy for bounds and
/// normals without pulling a second RNG crate into the tests.
pub fn uniforms(count: usize, source: &RandomSource) -> Vec<f64> {
    sample_gaussian(count, source)
        .into_iter()
        .map(gaussian_cdf)
        .collect()
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

/// Minimum discrepancy of a set system by exhaustive enumeration of all 2^n
/// sign vectors. Only sane for n ≤ 20.
pub fn min_discrepancy_exhaustive(system: &SetSystem) -> u64 {
    let n = system.n();
    assert!(n <= 20, "exhaustive oracle capped at n = 20");
    let mut best = u64::MAX;
    for mask in 0u32..(1u32 << n) {
        let mut worst = 0u64;
        for set in system.sets() {
            let sum: i64 = set
                .iter()
                .map(|&i| if mask >> i & 1 == 1 { 1i64 } else { -1i64 })
                .sum();
            worst = worst.max(sum.unsigned_abs());
        }
        if worst < best {
            best = worst;
            if best == 0 {
                return 0;
            }
        }
    }
    best
}

fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Composite Simpson quadrature with `panels` even subdivisions.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Mean and variance of a standard normal truncated to `[a, ∞)`, by
/// quadrature over a 40-sigma window.
pub fn truncated_moments(a: f64) -> (f64, f64) {
    let b = a.max(0.0) + 40.0;
    let panels = 4000;
    let mass = simpson(normal_density, a, b, panels);
    let mean = simpson(|x| x * normal_density(x), a, b, panels) / mass;
    let second = simpson(|x| x * x * normal_density(x), a, b, panels) / mass;
    (mean, second - mean * mean)
}

/// Sample mean, variance, and a 95% half-width for the *variance* of one
/// coordinate of a chain, via the fourth central moment.
pub fn variance_with_half_width(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let hw = 1.96 * ((m4 - var * var).max(0.0) / n).sqrt();
    (mean, var, hw)
}
