//! Line-delimited JSON checkpoints with atomic-rename commits.
//!
//! A checkpoint file starts with one header line describing the scan,
//! followed, per committed block, by that block's records and a
//! closing `{"block_lo":..,"block_hi":..,"status":"done"}` marker.
//! Records after the last marker belong to an uncommitted block and
//! are discarded on resume.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ScanError, ScanRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct CheckpointHeader {
    pub scan: String,
    pub lo: u64,
    pub hi: u64,
    pub block_size: u64,
    pub residue_bound: u64,
    pub ratio_bound: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct BlockMarker {
    block_lo: u64,
    block_hi: u64,
    status: String,
}

pub(crate) struct Checkpoint {
    path: PathBuf,
    content: String,
    committed: BTreeMap<u64, (u64, Vec<ScanRecord>)>,
}

fn corrupt(path: &Path, line: usize, hint: &str) -> ScanError {
    ScanError::CorruptCheckpoint {
        path: path.display().to_string(),
        line,
        hint: hint.to_string(),
    }
}

impl Checkpoint {
    /// Open a checkpoint for this scan. With `resume` set an existing
    /// file is parsed and its committed blocks reused; otherwise any
    /// existing file is replaced.
    pub fn open(path: &Path, header: &CheckpointHeader, resume: bool) -> Result<Self, ScanError> {
        if resume && path.exists() {
            Self::load(path, header)
        } else {
            let mut content = serde_json::to_string(header).expect("header serializes");
            content.push('\n');
            Ok(Checkpoint {
                path: path.to_path_buf(),
                content,
                committed: BTreeMap::new(),
            })
        }
    }

    fn load(path: &Path, expected: &CheckpointHeader) -> Result<Self, ScanError> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| corrupt(path, 1, "file is empty; delete it to start over"))?;
        let header: CheckpointHeader = serde_json::from_str(first)
            .map_err(|_| corrupt(path, 1, "missing scan header; delete the file to start over"))?;
        if header != *expected {
            return Err(ScanError::CheckpointMismatch {
                path: path.display().to_string(),
            });
        }
        let mut committed = BTreeMap::new();
        let mut pending: Vec<ScanRecord> = Vec::new();
        let mut content = String::with_capacity(text.len());
        content.push_str(first);
        content.push('\n');
        let mut pending_text = String::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if let Ok(marker) = serde_json::from_str::<BlockMarker>(line) {
                if marker.status != "done" {
                    return Err(corrupt(path, idx + 1, "unknown block status"));
                }
                committed.insert(marker.block_lo, (marker.block_hi, std::mem::take(&mut pending)));
                content.push_str(&pending_text);
                pending_text.clear();
                content.push_str(line);
                content.push('\n');
            } else if let Ok(record) = serde_json::from_str::<ScanRecord>(line) {
                pending.push(record);
                pending_text.push_str(line);
                pending_text.push('\n');
            } else {
                return Err(corrupt(
                    path,
                    idx + 1,
                    "unparseable line; truncate the file to the last complete block or delete it",
                ));
            }
        }
        Ok(Checkpoint {
            path: path.to_path_buf(),
            content,
            committed,
        })
    }

    pub fn committed(&self) -> &BTreeMap<u64, (u64, Vec<ScanRecord>)> {
        &self.committed
    }

    /// Append one finished block and atomically rewrite the file.
    pub fn commit_block(
        &mut self,
        block_lo: u64,
        block_hi: u64,
        records: &[ScanRecord],
    ) -> Result<(), ScanError> {
        for r in records {
            self.content
                .push_str(&serde_json::to_string(r).expect("record serializes"));
            self.content.push('\n');
        }
        let marker = BlockMarker {
            block_lo,
            block_hi,
            status: "done".to_string(),
        };
        self.content
            .push_str(&serde_json::to_string(&marker).expect("marker serializes"));
        self.content.push('\n');
        self.committed
            .insert(block_lo, (block_hi, records.to_vec()));

        let tmp = self.path.with_extension("tmp");
        fs::write(&tmp, &self.content)?;
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}
