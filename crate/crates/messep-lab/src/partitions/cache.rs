//! On-disk memo of character tables.
//!
//! Layout, all integers little-endian: magic `MLC1`, `u32` version, `u32` n,
//! `u32` number of partitions `m`; then `m` partitions as `u32` length
//! followed by `u32` parts; then the `m * m` table as row-major `i128`.

use super::{CharacterTable, Partition};
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "MESSEP_LAB_CACHE";
pub const CACHE_MAGIC: &[u8; 4] = b"MLC1";
pub const CACHE_VERSION: u32 = 1;

pub fn write_table(table: &CharacterTable, mut w: impl Write) -> Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&(table.n as u32).to_le_bytes())?;
    w.write_all(&(table.partitions.len() as u32).to_le_bytes())?;
    for p in &table.partitions {
        w.write_all(&(p.len() as u32).to_le_bytes())?;
        for &x in p.parts() {
            w.write_all(&(x as u32).to_le_bytes())?;
        }
    }
    for row in &table.values {
        for v in row {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_table(mut r: impl Read) -> Result<CharacterTable> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::invalid("character cache: bad magic"));
    }
    let version = read_u32(&mut r)?;
    if version != CACHE_VERSION {
        return Err(Error::invalid(format!("character cache: unsupported version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let m = read_u32(&mut r)? as usize;
    let mut partitions = Vec::with_capacity(m);
    for _ in 0..m {
        let len = read_u32(&mut r)? as usize;
        let parts = (0..len).map(|_| read_u32(&mut r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?;
        let p = Partition::new(&parts)?;
        if p.weight() != n {
            return Err(Error::invalid("character cache: partition weight mismatch"));
        }
        partitions.push(p);
    }
    let mut values = vec![vec![0i128; m]; m];
    for row in values.iter_mut() {
        for v in row.iter_mut() {
            let mut buf = [0u8; 16];
            r.read_exact(&mut buf)?;
            *v = i128::from_le_bytes(buf);
        }
    }
    Ok(CharacterTable { n, partitions, values })
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("characters-{n}.mlc"))
}

/// Character table of `S_n`, memoized under `$MESSEP_LAB_CACHE` when set.
/// A stale or corrupt cache file is rebuilt.
pub fn load_or_build_table(n: usize) -> Result<CharacterTable> {
    let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return Ok(CharacterTable::build(n));
    };
    let path = cache_path(&dir, n);
    if let Ok(file) = std::fs::File::open(&path) {
        if let Ok(table) = read_table(std::io::BufReader::new(file)) {
            if table.n == n {
                return Ok(table);
            }
        }
    }
    let table = CharacterTable::build(n);
    std::fs::create_dir_all(&dir)?;
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        write_table(&table, &mut w)?;
        w.flush()?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(table)
}
