use heatlab_core::analysis::Verdict;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Everything needed to reproduce a run, written as `manifest.txt`.
pub struct Manifest {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub notes: Vec<(String, String)>,
    started: Instant,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            command: command.to_string(),
            config: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, verdict: Verdict) -> String {
        let mut s = format!("command={}\n", self.command);
        for (k, v) in &self.config {
            s.push_str(&format!("config.{k}={v}\n"));
        }
        for p in &self.inputs {
            s.push_str(&format!("input={}\n", p.display()));
        }
        for p in &self.outputs {
            s.push_str(&format!("output={}\n", p.display()));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning={w}\n"));
        }
        for (k, v) in &self.notes {
            s.push_str(&format!("{k}={v}\n"));
        }
        s.push_str(&format!("verdict={}\n", verdict.name()));
        s.push_str(&format!("wall_time_s={:.3}\n", self.started.elapsed().as_secs_f64()));
        s
    }
}

/// Output directory plus the manifest being assembled for it.
pub struct Run {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl Run {
    pub fn new(command: &str, dir: &Path) -> Self {
        Run {
            dir: dir.to_path_buf(),
            manifest: Manifest::new(command),
        }
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> anyhow::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.manifest.outputs.push(path);
        Ok(())
    }

    pub fn finish(self, verdict: Verdict) -> anyhow::Result<()> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.dir.join("manifest.txt"), self.manifest.render(verdict))?;
        Ok(())
    }
}
