use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ghz::draw_event;
use super::TwinBeamState;
use crate::error::{Error, Result};
use crate::kernels::{Efficiency, HomodyneSample, LOConfig};
use crate::rng::generate_blocks;

/// One two-mode outcome as stored: the LO angle is kept as `cos 2 theta`,
/// the variable it is drawn in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeRecord {
    pub x: f64,
    pub cos2theta: f64,
    pub psi0: f64,
    pub psi1: f64,
}

impl TwoModeRecord {
    pub fn to_sample(&self, efficiency: Efficiency) -> Result<HomodyneSample> {
        HomodyneSample::new(
            self.x,
            LOConfig::from_cos2theta(self.cos2theta, self.psi0, self.psi1)?,
            efficiency,
        )
    }
}

/// What generated a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateDescriptor {
    TwinBeam { xi_re: f64, xi_im: f64, eta: Efficiency },
    Ghz { eta: Efficiency },
}

impl StateDescriptor {
    pub fn twin_beam(state: &TwinBeamState, eta: Efficiency) -> Self {
        StateDescriptor::TwinBeam {
            xi_re: state.xi().re,
            xi_im: state.xi().im,
            eta,
        }
    }

    pub fn efficiency(&self) -> Efficiency {
        match *self {
            StateDescriptor::TwinBeam { eta, .. } | StateDescriptor::Ghz { eta } => eta,
        }
    }

    pub fn twin_beam_state(&self) -> Option<TwinBeamState> {
        match *self {
            StateDescriptor::TwinBeam { xi_re, xi_im, .. } => {
                TwinBeamState::new(Complex64::new(xi_re, xi_im)).ok()
            }
            StateDescriptor::Ghz { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StateDescriptor::TwinBeam { .. } => "twin-beam",
            StateDescriptor::Ghz { .. } => "ghz",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleData {
    TwinBeam(Vec<TwoModeRecord>),
    Ghz(Vec<[TwoModeRecord; 3]>),
}

/// A generated dataset together with everything needed to regenerate it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    seed: u64,
    descriptor: StateDescriptor,
    data: SampleData,
}

/// Draws `count` twin-beam outcomes.
pub fn sample_twin_beam(
    state: &TwinBeamState,
    eff: Efficiency,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::EmptySampleCount);
    }
    let records = generate_blocks(seed, count, |rng| state.draw(&eff, rng));
    Ok(SampleSet {
        seed,
        descriptor: StateDescriptor::twin_beam(state, eff),
        data: SampleData::TwinBeam(records),
    })
}

/// Draws `count` GHZ events, each with fresh random settings for all three beams.
pub fn sample_ghz(eff: Efficiency, count: usize, seed: u64) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::EmptySampleCount);
    }
    let events = generate_blocks(seed, count, |rng| draw_event(&eff, rng));
    Ok(SampleSet {
        seed,
        descriptor: StateDescriptor::Ghz { eta: eff },
        data: SampleData::Ghz(events),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleManifest {
    /// Decimal string: TOML integers are signed 64-bit.
    seed: String,
    count: u64,
    csv_sha256: String,
    state: StateDescriptor,
}

const TWIN_HEADER: [&str; 4] = ["x", "cos2theta", "psi0", "psi1"];
const GHZ_HEADER: [&str; 12] = [
    "x1", "ct1", "po1", "pe1", "x2", "ct2", "po2", "pe2", "x3", "ct3", "po3", "pe3",
];

/// Path of the metadata file written next to a sample CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.toml")
}

struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

struct HashingReader<R> {
    inner: R,
    hasher: Sha256,
}

impl<R: Read> Read for HashingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::from(io),
            _ => unreachable!(),
        }
    } else {
        Error::Format(e.to_string())
    }
}

fn push_record(row: &mut Vec<String>, r: &TwoModeRecord) {
    for v in [r.x, r.cos2theta, r.psi0, r.psi1] {
        // shortest representation that parses back to the same double
        row.push(format!("{v:e}"));
    }
}

fn parse_record(fields: &[&str], line: u64) -> Result<TwoModeRecord> {
    let mut v = [0.0; 4];
    for (slot, f) in v.iter_mut().zip(fields) {
        *slot = f
            .trim()
            .parse()
            .map_err(|_| Error::Format(format!("line {line}: cannot parse {f:?} as a number")))?;
    }
    Ok(TwoModeRecord {
        x: v[0],
        cos2theta: v[1],
        psi0: v[2],
        psi1: v[3],
    })
}

impl SampleSet {
    /// Reproduces a dataset from its provenance.
    pub fn regenerate(descriptor: &StateDescriptor, seed: u64, count: usize) -> Result<SampleSet> {
        match descriptor {
            StateDescriptor::TwinBeam { xi_re, xi_im, eta } => {
                let state = TwinBeamState::new(Complex64::new(*xi_re, *xi_im))?;
                sample_twin_beam(&state, *eta, count, seed)
            }
            StateDescriptor::Ghz { eta } => sample_ghz(*eta, count, seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn descriptor(&self) -> &StateDescriptor {
        &self.descriptor
    }

    pub fn efficiency(&self) -> Efficiency {
        self.descriptor.efficiency()
    }

    pub fn data(&self) -> &SampleData {
        &self.data
    }

    pub fn len(&self) -> usize {
        match &self.data {
            SampleData::TwinBeam(v) => v.len(),
            SampleData::Ghz(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the CSV to `path` and the metadata record to [`sidecar_path`].
    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        let mut hw = HashingWriter {
            inner: BufWriter::new(file),
            hasher: Sha256::new(),
        };
        {
            let mut w = csv::Writer::from_writer(&mut hw);
            let mut row = Vec::with_capacity(12);
            match &self.data {
                SampleData::TwinBeam(records) => {
                    w.write_record(TWIN_HEADER).map_err(csv_err)?;
                    for r in records {
                        row.clear();
                        push_record(&mut row, r);
                        w.write_record(&row).map_err(csv_err)?;
                    }
                }
                SampleData::Ghz(events) => {
                    w.write_record(GHZ_HEADER).map_err(csv_err)?;
                    for ev in events {
                        row.clear();
                        for r in ev {
                            push_record(&mut row, r);
                        }
                        w.write_record(&row).map_err(csv_err)?;
                    }
                }
            }
            w.flush()?;
        }
        hw.flush()?;
        let manifest = SampleManifest {
            seed: self.seed.to_string(),
            count: self.len() as u64,
            csv_sha256: hex::encode(hw.hasher.finalize()),
            state: self.descriptor,
        };
        let text = toml::to_string(&manifest).map_err(|e| Error::Format(e.to_string()))?;
        std::fs::write(sidecar_path(path), text)?;
        Ok(())
    }

    /// Reads a dataset written by [`SampleSet::write`], verifying the checksum
    /// and row count recorded in the metadata file.
    pub fn read(path: &Path) -> Result<SampleSet> {
        let meta_text = std::fs::read_to_string(sidecar_path(path))?;
        let manifest: SampleManifest =
            toml::from_str(&meta_text).map_err(|e| Error::Format(format!("sample metadata: {e}")))?;
        let seed: u64 = manifest
            .seed
            .parse()
            .map_err(|_| Error::Format(format!("sample metadata: bad seed {:?}", manifest.seed)))?;
        let mut hr = HashingReader {
            inner: BufReader::new(File::open(path)?),
            hasher: Sha256::new(),
        };
        let data = {
            let mut rdr = csv::Reader::from_reader(&mut hr);
            let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
            let mut record = csv::StringRecord::new();
            let mut line = 1u64;
            match manifest.state {
                StateDescriptor::TwinBeam { .. } => {
                    if header != TWIN_HEADER {
                        return Err(Error::Format(format!("unexpected twin-beam header {header:?}")));
                    }
                    let mut out = Vec::with_capacity(manifest.count as usize);
                    while rdr.read_record(&mut record).map_err(csv_err)? {
                        line += 1;
                        let fields: Vec<&str> = record.iter().collect();
                        out.push(parse_record(&fields, line)?);
                    }
                    SampleData::TwinBeam(out)
                }
                StateDescriptor::Ghz { .. } => {
                    if header != GHZ_HEADER {
                        return Err(Error::Format(format!("unexpected GHZ header {header:?}")));
                    }
                    let mut out = Vec::with_capacity(manifest.count as usize);
                    while rdr.read_record(&mut record).map_err(csv_err)? {
                        line += 1;
                        let fields: Vec<&str> = record.iter().collect();
                        out.push([
                            parse_record(&fields[0..4], line)?,
                            parse_record(&fields[4..8], line)?,
                            parse_record(&fields[8..12], line)?,
                        ]);
                    }
                    SampleData::Ghz(out)
                }
            }
        };
        // drain anything the CSV reader left unread so the hash covers the file
        std::io::copy(&mut hr, &mut std::io::sink())?;
        let digest = hex::encode(hr.hasher.finalize());
        if digest != manifest.csv_sha256 {
            return Err(Error::Format(format!(
                "checksum mismatch for {}: expected {}, found {digest}",
                path.display(),
                manifest.csv_sha256
            )));
        }
        let set = SampleSet {
            seed,
            descriptor: manifest.state,
            data,
        };
        if set.len() as u64 != manifest.count {
            return Err(Error::Format(format!(
                "metadata records {} rows, file has {}",
                manifest.count,
                set.len()
            )));
        }
        Ok(set)
    }
}
