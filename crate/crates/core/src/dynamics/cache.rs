//! On-disk ray cache: `rays.bin` holds little-endian records
//! `[n: u64][n x (re, im, level): f64]`, and `index.json` maps
//! `(c, angle, schedule hash)` to record offsets.

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ray::{RayStatus, RayTrace, TraceParams};
use super::QuadraticMap;
use crate::angles::Angle;
use crate::error::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "YOCCOZ_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub c: [f64; 2],
    pub angle: Angle,
    pub schedule: String,
    pub offset: u64,
    pub first_index: i64,
    pub status: RayStatus,
    pub landing: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CacheIndex {
    pub schema: String,
    pub entries: Vec<CacheEntry>,
}

pub struct RayCache {
    dir: PathBuf,
}

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

impl RayCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(RayCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    fn bin_path(&self) -> PathBuf {
        self.dir.join("rays.bin")
    }

    fn index_path(&self) -> PathBuf {
        self.dir.join("index.json")
    }

    pub fn index(&self) -> Result<CacheIndex> {
        match fs::read(self.index_path()) {
            Ok(bytes) => Ok(serde_json::from_slice(&bytes)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(CacheIndex {
                schema: "yoccoz.ray-cache.v1".into(),
                entries: Vec::new(),
            }),
            Err(e) => Err(e.into()),
        }
    }

    /// Appends traces not yet present for this map and schedule.
    pub fn store(&self, map: &QuadraticMap, params: &TraceParams, traces: &[RayTrace]) -> Result<()> {
        let mut index = self.index()?;
        let schedule = params.schedule_hash();
        let c = [map.c.re, map.c.im];
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.bin_path())?;
        let mut offset = file.seek(SeekFrom::End(0))?;
        let mut w = BufWriter::new(&mut file);
        for t in traces {
            let present = index
                .entries
                .iter()
                .any(|e| e.c == c && e.angle == t.angle && e.schedule == schedule);
            if present {
                continue;
            }
            w.write_all(&(t.points.len() as u64).to_le_bytes())?;
            for (z, g) in t.points.iter().zip(&t.levels) {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
                w.write_all(&g.to_le_bytes())?;
            }
            index.entries.push(CacheEntry {
                c,
                angle: t.angle.clone(),
                schedule: schedule.clone(),
                offset,
                first_index: t.first_index,
                status: t.status,
                landing: t.landing.map(|l| [l.re, l.im]),
            });
            offset += 8 + 24 * t.points.len() as u64;
        }
        w.flush()?;
        drop(w);
        let tmp = self.dir.join("index.json.tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(&index)?)?;
        fs::rename(tmp, self.index_path())?;
        Ok(())
    }

    /// All cached traces for this map and schedule.
    pub fn load(&self, map: &QuadraticMap, params: &TraceParams) -> Result<Vec<RayTrace>> {
        let index = self.index()?;
        let schedule = params.schedule_hash();
        let c = [map.c.re, map.c.im];
        let wanted: Vec<&CacheEntry> = index
            .entries
            .iter()
            .filter(|e| e.c == c && e.schedule == schedule)
            .collect();
        if wanted.is_empty() {
            return Ok(Vec::new());
        }
        let mut r = BufReader::new(File::open(self.bin_path())?);
        let mut out = Vec::with_capacity(wanted.len());
        for e in wanted {
            r.seek(SeekFrom::Start(e.offset))?;
            let n = read_u64(&mut r)? as usize;
            let mut points = Vec::with_capacity(n);
            let mut levels = Vec::with_capacity(n);
            for _ in 0..n {
                let re = read_f64(&mut r)?;
                let im = read_f64(&mut r)?;
                points.push(Complex64::new(re, im));
                levels.push(read_f64(&mut r)?);
            }
            out.push(RayTrace {
                angle: e.angle.clone(),
                first_index: e.first_index,
                points,
                levels,
                landing: e.landing.map(|l| Complex64::new(l[0], l[1])),
                status: e.status,
            });
        }
        Ok(out)
    }
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|e| Error::Parse(format!("truncated ray cache: {e}")))?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}
