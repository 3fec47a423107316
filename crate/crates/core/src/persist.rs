//! Versioned JSON envelopes for model and cache files.
//!
//! Every file is a single JSON object `{"format": "emocue", "version": 1, "kind": ...,
//! "payload": ...}`. Floats are written in shortest round-trip form and parsed exactly,
//! so a save/load cycle reproduces every parameter bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT: &str = "emocue";
pub const VERSION: u32 = 1;

#[derive(Serialize)]
struct EnvelopeRef<'a, T> {
    format: &'a str,
    version: u32,
    kind: &'a str,
    payload: &'a T,
}

#[derive(Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    kind: String,
    payload: T,
}

pub fn save<T: Serialize>(path: impl AsRef<Path>, kind: &str, payload: &T) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let env = EnvelopeRef {
        format: FORMAT,
        version: VERSION,
        kind,
        payload,
    };
    serde_json::to_writer(&mut w, &env).map_err(|e| Error::parse(path.display().to_string(), e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn load<T: DeserializeOwned>(path: impl AsRef<Path>, kind: &str) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let env: Envelope<T> = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| Error::parse(path.display().to_string(), e))?;
    if env.format != FORMAT || env.version != VERSION {
        return Err(Error::parse(
            path.display().to_string(),
            format!("unsupported file format {} v{}", env.format, env.version),
        ));
    }
    if env.kind != kind {
        return Err(Error::parse(
            path.display().to_string(),
            format!("expected a `{kind}` file, found `{}`", env.kind),
        ));
    }
    Ok(env.payload)
}
