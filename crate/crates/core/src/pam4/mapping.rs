//! Gray-coded PAM4 symbol mapping.

use crate::error::{Error, Result};
use crate::sigcore::BitSequence;

/// Nominal levels before any adjustment.
pub const NOMINAL_LEVELS: [f64; 4] = [-3.0, -1.0, 1.0, 3.0];
/// Decision thresholds midway between the nominal levels.
pub const NOMINAL_THRESHOLDS: [f64; 3] = [-2.0, 0.0, 2.0];

/// Bit pair carried by each level index: 00, 01, 11, 10.
const GRAY: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

fn level_index(b0: u8, b1: u8) -> usize {
    match (b0, b1) {
        (0, 0) => 0,
        (0, 1) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

pub fn pam4_map(bits: &BitSequence, levels: &[f64; 4]) -> Result<Vec<f64>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::Framing(format!(
            "PAM4 needs an even number of bits, got {}",
            bits.len()
        )));
    }
    Ok(bits
        .bits()
        .chunks_exact(2)
        .map(|p| levels[level_index(p[0], p[1])])
        .collect())
}

/// Slice against `thresholds` and undo the Gray map. A sample exactly on a
/// threshold resolves to the lower region.
pub fn pam4_demap(symbols: &[f64], thresholds: &[f64; 3], levels: &[f64; 4]) -> Result<BitSequence> {
    check_increasing("thresholds", thresholds)?;
    check_increasing("levels", levels)?;
    let mut out = Vec::with_capacity(symbols.len() * 2);
    for &s in symbols {
        out.extend_from_slice(&GRAY[slice_index(s, thresholds)]);
    }
    Ok(BitSequence::from_trusted(out))
}

/// Decision region of `x`: the number of thresholds strictly below it.
pub fn slice_index(x: f64, thresholds: &[f64; 3]) -> usize {
    thresholds.iter().filter(|&&t| x > t).count()
}

pub fn level_adjust(levels: &[f64; 4], adjustment: &[f64; 4]) -> Result<[f64; 4]> {
    let out = std::array::from_fn(|i| levels[i] + adjustment[i]);
    if out.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidAdjustment(out));
    }
    Ok(out)
}

fn check_increasing(name: &'static str, v: &[f64]) -> Result<()> {
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(name, "must be strictly increasing"));
    }
    Ok(())
}
