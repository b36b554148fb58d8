#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn skel() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skel"));
    cmd.env_remove("SKEL_THREADS");
    cmd
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Where a case writes its artifact.
#[derive(Clone, Copy, Debug)]
pub enum Sink {
    Stdout,
    /// The case takes `--svg <path>`.
    Svg,
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub input: &'static str,
    pub sink: Sink,
}

impl Case {
    pub fn golden_path(&self) -> PathBuf {
        golden(self.name)
    }
}

/// Three fixtures, each run through build, spectrum and plot.
pub const CASES: [Case; 9] = [
    Case { name: "plane_build.json", input: "plane.csv", sink: Sink::Stdout, args: &["build", "--metric", "l1", "--beta", "1"] },
    Case { name: "plane_spectrum.csv", input: "plane.csv", sink: Sink::Stdout, args: &["spectrum", "--metric", "linf", "--betas", "0.5,1,1.5,2,3", "--output-format", "csv"] },
    Case { name: "plane_plot.svg", input: "plane.csv", sink: Sink::Svg, args: &["plot", "--metric", "linf", "--beta", "2", "--overlay", "0,4"] },
    Case { name: "space_build.csv", input: "space.json", sink: Sink::Stdout, args: &["build", "--metric", "linf", "--variant", "circle", "--beta", "1.3", "--output-format", "csv"] },
    Case { name: "space_spectrum.json", input: "space.json", sink: Sink::Stdout, args: &["spectrum", "--metric", "linf", "--betas", "0.8,1,2,2.7"] },
    Case { name: "space_plot.svg", input: "space.json", sink: Sink::Svg, args: &["plot", "--metric", "l1", "--beta", "1", "--axes", "0,2", "--width", "400"] },
    Case { name: "grid_build.json", input: "grid.csv", sink: Sink::Stdout, args: &["build", "--metric", "l1", "--beta", "0.8", "--algo", "brute"] },
    Case { name: "grid_spectrum.csv", input: "grid.csv", sink: Sink::Stdout, args: &["spectrum", "--metric", "l1", "--betas", "0.5,1,2,3", "--output-format", "csv"] },
    Case { name: "grid_plot.svg", input: "grid.csv", sink: Sink::Svg, args: &["plot", "--metric", "l1", "--variant", "circle", "--beta", "1.3", "--overlay", "4,9"] },
];

/// Runs a case with the given thread count and returns its artifact bytes.
pub fn run_case(case: &Case, threads: usize, scratch: &Path) -> Result<Vec<u8>, String> {
    let mut cmd = skel();
    cmd.args(case.args)
        .arg("--input")
        .arg(fixture(case.input))
        .arg("--threads")
        .arg(threads.to_string());
    let svg = scratch.join(format!("{}-{threads}.svg", case.name));
    if let Sink::Svg = case.sink {
        cmd.arg("--svg").arg(&svg);
    }
    let out: Output = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{} exited with {:?}: {}", case.name, out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    match case.sink {
        Sink::Stdout => Ok(out.stdout),
        Sink::Svg => std::fs::read(&svg).map_err(|e| e.to_string()),
    }
}

/// Compares every case against its golden file for several thread counts
/// and repeated runs. Returns one message per mismatch.
pub fn golden_mismatches() -> Vec<String> {
    let scratch = tempfile::tempdir().unwrap();
    let mut bad = Vec::new();
    for case in &CASES {
        let want = match std::fs::read(case.golden_path()) {
            Ok(b) => b,
            Err(e) => {
                bad.push(format!("{}: {e}", case.name));
                continue;
            }
        };
        for threads in [1, 1, 2, 4] {
            match run_case(case, threads, scratch.path()) {
                Ok(got) if got == want => {}
                Ok(_) => bad.push(format!("{} with {threads} threads differs from the golden file", case.name)),
                Err(e) => bad.push(e),
            }
        }
    }
    bad
}
