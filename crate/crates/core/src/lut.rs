//! The trained coefficient table and its on-disk format.
//!
//! A table holds one 13-tap filter per class, together with the number of
//! training samples the class saw and whether the taps were actually solved
//! or fell back to the identity filter.
//!
//! File layout (`.tflt`), all integers little-endian:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "TFLT"
//! 4       1     version (1)
//! 5       1     aperture size (13)
//! 6       1     class bits (13 or 14)
//! 7       1     reserved (0)
//! 8       -     2^class_bits entries in ascending class order, each:
//!                 u64   sample count
//!                 u8    flag (0 solved, 1 identity fallback)
//!                 13 × f64 filter taps, aperture scan order
//! ```
//!
//! Total size is `8 + 2^class_bits * 113` bytes.

use std::fs;
use std::path::Path;

use crate::classify::{ClassId, APERTURE_SIZE, CENTER_INDEX};
use crate::{Error, Result};

pub const LUT_MAGIC: [u8; 4] = *b"TFLT";
pub const LUT_VERSION: u8 = 1;

/// Magic, version, aperture size, class bits, one reserved zero byte.
pub const HEADER_LEN: usize = 8;

/// Serialized size of one class entry: count + flag + 13 taps.
pub const ENTRY_LEN: usize = 8 + 1 + APERTURE_SIZE * 8;

/// How a class's taps were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveFlag {
    /// Least-squares solution of the class's normal equations.
    Solved,
    /// Identity filter: too few samples or a singular system.
    IdentityFallback,
}

impl SolveFlag {
    fn to_byte(self) -> u8 {
        match self {
            SolveFlag::Solved => 0,
            SolveFlag::IdentityFallback => 1,
        }
    }

    fn from_byte(byte: u8) -> Result<Self> {
        match byte {
            0 => Ok(SolveFlag::Solved),
            1 => Ok(SolveFlag::IdentityFallback),
            other => Err(Error::LutFormat(format!("unknown solve flag {other}"))),
        }
    }
}

/// Taps and training metadata for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub weights: [f64; APERTURE_SIZE],
    pub count: u64,
    pub flag: SolveFlag,
}

impl TableEntry {
    /// The identity filter: weight 1 at the aperture center.
    pub fn identity(count: u64) -> Self {
        let mut weights = [0.0; APERTURE_SIZE];
        weights[CENTER_INDEX] = 1.0;
        TableEntry {
            weights,
            count,
            flag: SolveFlag::IdentityFallback,
        }
    }
}

/// A complete per-class filter bank, indexed by [`ClassId`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    class_bits: u8,
    entries: Vec<TableEntry>,
}

impl CoefficientTable {
    /// Wraps entries for every class of a `class_bits`-bit classifier.
    /// `entries.len()` must equal `2^class_bits`.
    pub fn new(class_bits: u8, entries: Vec<TableEntry>) -> Result<Self> {
        validate_class_bits(class_bits)?;
        if entries.len() != 1usize << class_bits {
            return Err(Error::LutFormat(format!(
                "{} entries do not fill a {class_bits}-bit table",
                entries.len()
            )));
        }
        Ok(CoefficientTable {
            class_bits,
            entries,
        })
    }

    /// A table that leaves every pixel unchanged.
    pub fn identity(class_bits: u8) -> Result<Self> {
        validate_class_bits(class_bits)?;
        let entries = vec![TableEntry::identity(0); 1usize << class_bits];
        CoefficientTable::new(class_bits, entries)
    }

    pub fn class_bits(&self) -> u8 {
        self.class_bits
    }

    pub fn num_classes(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, class: ClassId) -> Option<&TableEntry> {
        self.entries.get(class.index())
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    /// Exact file size of a serialized table.
    pub fn file_len(class_bits: u8) -> u64 {
        HEADER_LEN as u64 + (1u64 << class_bits) * ENTRY_LEN as u64
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(Self::file_len(self.class_bits) as usize);
        bytes.extend_from_slice(&LUT_MAGIC);
        bytes.push(LUT_VERSION);
        bytes.push(APERTURE_SIZE as u8);
        bytes.push(self.class_bits);
        bytes.push(0);
        for entry in &self.entries {
            bytes.extend_from_slice(&entry.count.to_le_bytes());
            bytes.push(entry.flag.to_byte());
            for w in &entry.weights {
                bytes.extend_from_slice(&w.to_le_bytes());
            }
        }
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::LutFormat("file shorter than the header".into()));
        }
        if bytes[0..4] != LUT_MAGIC {
            return Err(Error::LutFormat("bad magic, not a coefficient table".into()));
        }
        if bytes[4] != LUT_VERSION {
            return Err(Error::LutFormat(format!(
                "unsupported version {} (expected {LUT_VERSION})",
                bytes[4]
            )));
        }
        if bytes[5] as usize != APERTURE_SIZE {
            return Err(Error::LutFormat(format!(
                "aperture size {} (expected {APERTURE_SIZE})",
                bytes[5]
            )));
        }
        let class_bits = bytes[6];
        validate_class_bits(class_bits).map_err(|_| {
            Error::LutFormat(format!("class bits {class_bits} out of range"))
        })?;
        if bytes[7] != 0 {
            return Err(Error::LutFormat("reserved byte is not zero".into()));
        }
        let expected = Self::file_len(class_bits);
        if bytes.len() as u64 != expected {
            return Err(Error::LutFormat(format!(
                "{} bytes, expected {expected} for {class_bits} class bits",
                bytes.len()
            )));
        }
        let classes = 1usize << class_bits;
        let mut entries = Vec::with_capacity(classes);
        let mut cursor = HEADER_LEN;
        for _ in 0..classes {
            let count = u64::from_le_bytes(bytes[cursor..cursor + 8].try_into().unwrap());
            let flag = SolveFlag::from_byte(bytes[cursor + 8])?;
            cursor += 9;
            let mut weights = [0.0f64; APERTURE_SIZE];
            for w in &mut weights {
                *w = f64::from_le_bytes(bytes[cursor..cursor + 8].try_into().unwrap());
                cursor += 8;
            }
            entries.push(TableEntry {
                weights,
                count,
                flag,
            });
        }
        CoefficientTable::new(class_bits, entries)
    }

    pub fn write_to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn validate_class_bits(class_bits: u8) -> Result<()> {
    // Classes are addressed with u16 and always include the 13 ADRC bits.
    if !(APERTURE_SIZE as u8..=16).contains(&class_bits) {
        return Err(Error::InvalidParameter(format!(
            "class bits must be in 13..=16 (got {class_bits})"
        )));
    }
    Ok(())
}
