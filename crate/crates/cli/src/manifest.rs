//! Run manifests: enough to replay a command and to tell which inputs it saw.

use std::io::Read;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    /// Path as given, `-` for standard input.
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as passed.
    pub argv: Vec<String>,
    /// Every flag of the subcommand after defaults are applied.
    pub flags: serde_json::Value,
    pub seeds: Vec<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub threads: usize,
    pub wall_seconds: f64,
}

/// Collects seeds and input digests while a command runs.
pub struct Context {
    started: Instant,
    pub seeds: Vec<u64>,
    pub inputs: Vec<InputDigest>,
    stdin: Option<Vec<u8>>,
}

impl Context {
    pub fn new(stdin: Option<Vec<u8>>) -> Self {
        Context { started: Instant::now(), seeds: Vec::new(), inputs: Vec::new(), stdin }
    }

    /// Reads a file, or standard input for `-`, and records its digest.
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = if path == Path::new("-") {
            match self.stdin.take() {
                Some(b) => b,
                None => {
                    let mut b = Vec::new();
                    std::io::stdin().read_to_end(&mut b).map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
                    b
                }
            }
        } else {
            std::fs::read(path).map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?
        };
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len(),
        });
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))
    }

    pub fn finish(self, command: &str, argv: &[String], flags: serde_json::Value) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            argv: argv.to_vec(),
            flags,
            seeds: self.seeds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs,
            threads: rayon::current_num_threads(),
            wall_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn stdin_buffer_is_recorded() {
        let mut ctx = Context::new(Some(b"2\n1\n".to_vec()));
        assert_eq!(ctx.read(Path::new("-")).unwrap(), "2\n1\n");
        assert_eq!(ctx.inputs[0].path, "-");
        assert_eq!(ctx.inputs[0].bytes, 4);
        let m = ctx.finish("x", &[], serde_json::Value::Null);
        assert_eq!(m.version, env!("CARGO_PKG_VERSION"));
    }
}
