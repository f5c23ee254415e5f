//! Batch runner: one CLI invocation per line, run in parallel, reported in order.

use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::cli::dispatch;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPECTRAL_BOUNDS_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineOutcome {
    pub line: String,
    pub exit: i32,
    pub stderr: String,
}

/// Non-empty, non-comment lines of a suite file.
pub fn suite_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

fn worker_count(jobs: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(available);
    cap.min(jobs).max(1)
}

fn run_line(line: &str) -> LineOutcome {
    let words: Vec<&str> = line.split_whitespace().collect();
    let mut stderr = Vec::new();
    let exit = if words.first() == Some(&"suite") {
        stderr.extend_from_slice(b"error: nested suites are not allowed\n");
        2
    } else {
        let args = std::iter::once("spectral-bounds").chain(words.iter().copied());
        dispatch(args, &mut std::io::sink(), &mut stderr)
    };
    LineOutcome {
        line: line.to_owned(),
        exit,
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

/// Runs every line and returns the outcomes in file order.
pub fn run_lines(lines: &[String]) -> Vec<LineOutcome> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<LineOutcome>>> = Mutex::new(vec![None; lines.len()]);
    std::thread::scope(|scope| {
        for _ in 0..worker_count(lines.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(line) = lines.get(i) else { break };
                let outcome = run_line(line);
                results.lock().expect("suite worker panicked")[i] = Some(outcome);
            });
        }
    });
    results
        .into_inner()
        .expect("suite worker panicked")
        .into_iter()
        .map(|o| o.expect("every line ran"))
        .collect()
}

/// Runs the suite at `path`. Exit code 0 if every line passed, 1 otherwise,
/// 2 if the file cannot be read.
pub fn run_suite(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    };
    let outcomes = run_lines(&suite_lines(&text));
    let mut failed = 0;
    for o in &outcomes {
        if o.exit == 0 {
            let _ = writeln!(out, "[PASS] {}", o.line);
        } else {
            failed += 1;
            let _ = writeln!(out, "[FAIL exit={}] {}", o.exit, o.line);
            for l in o.stderr.lines() {
                let _ = writeln!(out, "    {l}");
            }
        }
    }
    let _ = writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed);
    i32::from(failed > 0)
}
