//! On-disk cache for distance tables.
//!
//! Format: magic bytes `"PADJ"`, format version `u8`, size `n` as `u8`,
//! move kind as `u8` (0 = transposition, 1 = prefix, 2 = suffix), then `n!`
//! distance bytes in lexicographic rank order. All fields are single bytes,
//! so endianness never enters.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::blockmoves::{BlockMoveKind, DistanceTable};
use crate::permutation::factorial_u64;
use crate::{Error, Result};

pub const CACHE_MAGIC: [u8; 4] = *b"PADJ";
pub const CACHE_VERSION: u8 = 1;

/// Largest size a cache file may declare; keeps a corrupt header from
/// provoking a factorial-sized allocation.
const MAX_CACHED_SIZE: u8 = 12;

pub fn write_distance_table<W: Write>(table: &DistanceTable, w: &mut W) -> Result<()> {
    w.write_all(&CACHE_MAGIC)?;
    w.write_all(&[CACHE_VERSION, table.n() as u8, table.kind().cache_byte()])?;
    w.write_all(table.entries())?;
    Ok(())
}

pub fn read_distance_table<R: Read>(r: &mut R) -> Result<DistanceTable> {
    let mut header = [0u8; 7];
    r.read_exact(&mut header)
        .map_err(|e| Error::Cache(format!("short header: {e}")))?;
    if header[..4] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic bytes".into()));
    }
    if header[4] != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "unsupported format version {}",
            header[4]
        )));
    }
    let n = header[5];
    if n > MAX_CACHED_SIZE {
        return Err(Error::Cache(format!("implausible size {n}")));
    }
    let kind = BlockMoveKind::from_cache_byte(header[6])
        .ok_or_else(|| Error::Cache(format!("unknown move kind byte {}", header[6])))?;
    let mut dist = vec![0u8; factorial_u64(n as usize) as usize];
    r.read_exact(&mut dist)
        .map_err(|e| Error::Cache(format!("short body: {e}")))?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Cache("trailing bytes after distance data".into()));
    }
    DistanceTable::from_parts(n as usize, kind, dist)
}

/// `pt-n07.padj` and friends.
pub fn cache_file_name(n: usize, kind: BlockMoveKind) -> String {
    format!("{kind}-n{n:02}.padj")
}

pub fn store_in_dir(dir: &Path, table: &DistanceTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(table.n(), table.kind()));
    let mut f = fs::File::create(&path)?;
    write_distance_table(table, &mut f)?;
    Ok(path)
}

/// `Ok(None)` when no cache file exists; `Err(Error::Cache)` when one
/// exists but fails validation (callers typically warn and rebuild).
pub fn load_from_dir(dir: &Path, n: usize, kind: BlockMoveKind) -> Result<Option<DistanceTable>> {
    let path = dir.join(cache_file_name(n, kind));
    if !path.exists() {
        return Ok(None);
    }
    let mut f = fs::File::open(&path)?;
    let table = read_distance_table(&mut f)?;
    if table.n() != n || table.kind() != kind {
        return Err(Error::Cache(format!(
            "{} holds a table for n={} kind={}",
            path.display(),
            table.n(),
            table.kind()
        )));
    }
    Ok(Some(table))
}
