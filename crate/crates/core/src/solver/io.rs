//! Tablebase files.
//!
//! Layout, all little-endian: magic `CSTB`, version byte 0x01, material id
//! as length-prefixed text, entry count as u32, then one 5-byte record per
//! slot: flags byte (bits 0-1 win/draw/loss, bit 2 invalid slot, bit 3
//! terminal), mate distance as u16 (0xFFFF for none), packed move as u16
//! (0xFFFF for none). The block structure is not stored; it is recomputed
//! from the material id, which names it uniquely.

use std::fs;
use std::path::Path;

use super::material::MaterialSig;
use super::table::{StrategyTable, Wdl};
use super::{SolverError, TableParseError};

const MAGIC: &[u8; 4] = b"CSTB";
const VERSION: u8 = 0x01;

/// Writes the table; `load_table` restores it bit-exactly.
pub fn save_table(table: &StrategyTable, dest: impl AsRef<Path>) -> Result<(), SolverError> {
    let id = table.material_id();
    let count = table.slot_count();
    let mut bytes = Vec::with_capacity(4 + 1 + 1 + id.len() + 4 + 5 * count as usize);
    bytes.extend_from_slice(MAGIC);
    bytes.push(VERSION);
    bytes.push(u8::try_from(id.len()).expect("material id fits a length byte"));
    bytes.extend_from_slice(id.as_bytes());
    bytes.extend_from_slice(&u32::try_from(count).expect("entry count fits u32").to_le_bytes());
    for i in 0..count as usize {
        bytes.push(table.flags[i]);
        bytes.extend_from_slice(&table.dtm[i].to_le_bytes());
        bytes.extend_from_slice(&table.mv[i].to_le_bytes());
    }
    fs::write(dest, bytes)?;
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], TableParseError> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or(
            TableParseError::Truncated {
                expected: (self.at + n) as u64,
                actual: self.bytes.len() as u64,
            },
        )?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }
}

/// Reads a table written by [`save_table`].
pub fn load_table(source: impl AsRef<Path>) -> Result<StrategyTable, SolverError> {
    let bytes = fs::read(source)?;
    let mut r = Reader { bytes: &bytes, at: 0 };

    if r.take(4).map_err(|_| TableParseError::UnrecognizedFormat)? != MAGIC {
        return Err(TableParseError::UnrecognizedFormat.into());
    }
    let version = r.take(1)?[0];
    if version != VERSION {
        return Err(TableParseError::Version(version).into());
    }
    let id_len = r.take(1)?[0] as usize;
    let id = std::str::from_utf8(r.take(id_len)?)
        .map_err(|_| TableParseError::MaterialId)?
        .to_string();
    let sig = MaterialSig::parse(&id).map_err(|_| TableParseError::MaterialId)?;
    let count = u32::from_le_bytes(r.take(4)?.try_into().unwrap()) as u64;

    let mut table = StrategyTable::skeleton(sig);
    if count != table.slot_count() {
        return Err(TableParseError::EntryCount {
            material: id,
            expected: table.slot_count(),
            found: count,
        }
        .into());
    }
    let expected_len = (r.at as u64) + 5 * count;
    if bytes.len() as u64 != expected_len {
        return Err(TableParseError::Truncated {
            expected: expected_len,
            actual: bytes.len() as u64,
        }
        .into());
    }
    for i in 0..count as usize {
        let rec = r.take(5).expect("length verified");
        if Wdl::from_bits(rec[0] & 0b11).is_none() {
            return Err(TableParseError::Entry(i as u64).into());
        }
        table.flags[i] = rec[0];
        table.dtm[i] = u16::from_le_bytes([rec[1], rec[2]]);
        table.mv[i] = u16::from_le_bytes([rec[3], rec[4]]);
    }
    Ok(table)
}
