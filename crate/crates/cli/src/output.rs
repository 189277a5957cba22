use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

use lebesgue_core::io::to_json_string;

/// Bad flags or flag combinations; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Where results go. Files get a `<path>.meta.json` companion holding the
/// timestamp, so the payload itself stays byte-identical across runs.
pub struct Output {
    path: Option<PathBuf>,
    argv: Vec<String>,
}

impl Output {
    pub fn new(path: Option<PathBuf>, argv: Vec<String>) -> Self {
        Output { path, argv }
    }

    pub fn json<T: Serialize>(&self, value: &T) -> anyhow::Result<()> {
        let s = to_json_string(value)?;
        self.bytes(|w| Ok(w.write_all(s.as_bytes())?))
    }

    pub fn bytes<F>(&self, f: F) -> anyhow::Result<()>
    where
        F: FnOnce(&mut dyn Write) -> anyhow::Result<()>,
    {
        match &self.path {
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                f(&mut lock)?;
                lock.flush()?;
            }
            Some(p) => {
                let mut buf = Vec::new();
                f(&mut buf)?;
                fs::write(p, buf).with_context(|| format!("writing {}", p.display()))?;
                let generated = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let meta = json!({
                    "generated": generated,
                    "version": env!("CARGO_PKG_VERSION"),
                    "argv": self.argv,
                });
                let mut mp = p.clone().into_os_string();
                mp.push(".meta.json");
                fs::write(&mp, to_json_string(&meta)?).with_context(|| format!("writing {}", mp.to_string_lossy()))?;
            }
        }
        Ok(())
    }
}
