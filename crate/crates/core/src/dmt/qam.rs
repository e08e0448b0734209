//! Gray-coded square and rectangular QAM.
//!
//! `b` bits split into `ceil(b/2)` in-phase and `floor(b/2)` quadrature bits,
//! each axis a Gray-labelled PAM. Odd orders are therefore rectangular
//! (2×1, 4×2, 8×4, 16×8); one bit degenerates to BPSK on the real axis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sigcore::BitSequence;

pub const MAX_QAM_BITS: u8 = 8;

#[derive(Debug, Clone)]
pub struct Constellation {
    bits: u8,
    i_bits: u8,
    q_bits: u8,
    scale: f64,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn inverse_gray(mut g: usize) -> usize {
    let mut i = g;
    while g > 0 {
        g >>= 1;
        i ^= g;
    }
    i
}

fn read_bits(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

impl Constellation {
    pub fn new(bits: u8) -> Result<Self> {
        if !(1..=MAX_QAM_BITS).contains(&bits) {
            return Err(Error::UnsupportedOrder(bits as u32));
        }
        let i_bits = bits.div_ceil(2);
        let q_bits = bits / 2;
        let mi = (1usize << i_bits) as f64;
        let mq = (1usize << q_bits) as f64;
        let energy = (mi * mi - 1.0) / 3.0 + (mq * mq - 1.0) / 3.0;
        Ok(Self {
            bits,
            i_bits,
            q_bits,
            scale: 1.0 / energy.sqrt(),
        })
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn size(&self) -> usize {
        1 << self.bits
    }

    fn axis_level(index: usize, axis_bits: u8) -> f64 {
        2.0 * index as f64 - ((1usize << axis_bits) - 1) as f64
    }

    /// Point for a group of `bits()` bits, MSB first.
    pub fn map(&self, group: &[u8]) -> Complex64 {
        let (ib, qb) = group.split_at(self.i_bits as usize);
        let ii = inverse_gray(read_bits(ib));
        let qi = inverse_gray(read_bits(qb));
        let q = if self.q_bits == 0 {
            0.0
        } else {
            Self::axis_level(qi, self.q_bits)
        };
        Complex64::new(Self::axis_level(ii, self.i_bits), q) * self.scale
    }

    /// Point labelled by the integer `label` (bit pattern, MSB first).
    pub fn point(&self, label: usize) -> Complex64 {
        let group: Vec<u8> = (0..self.bits)
            .rev()
            .map(|s| ((label >> s) & 1) as u8)
            .collect();
        self.map(&group)
    }

    fn axis_slice(x: f64, axis_bits: u8) -> usize {
        let m = 1usize << axis_bits;
        let idx = ((x + (m - 1) as f64) / 2.0).round();
        idx.clamp(0.0, (m - 1) as f64) as usize
    }

    /// Nearest-point decision, appending the bit label to `out`.
    pub fn slice_into(&self, y: Complex64, out: &mut Vec<u8>) {
        let y = y / self.scale;
        let gi = gray(Self::axis_slice(y.re, self.i_bits));
        for s in (0..self.i_bits).rev() {
            out.push(((gi >> s) & 1) as u8);
        }
        if self.q_bits > 0 {
            let gq = gray(Self::axis_slice(y.im, self.q_bits));
            for s in (0..self.q_bits).rev() {
                out.push(((gq >> s) & 1) as u8);
            }
        }
    }
}

pub fn qam_map(bits: &BitSequence, order_bits: u8) -> Result<Vec<Complex64>> {
    let c = Constellation::new(order_bits)?;
    if !bits.len().is_multiple_of(order_bits as usize) {
        return Err(Error::Framing(format!(
            "{} bits do not fill whole {order_bits}-bit symbols",
            bits.len()
        )));
    }
    Ok(bits.bits().chunks_exact(order_bits as usize).map(|g| c.map(g)).collect())
}

pub fn qam_demap(symbols: &[Complex64], order_bits: u8) -> Result<BitSequence> {
    let c = Constellation::new(order_bits)?;
    let mut out = Vec::with_capacity(symbols.len() * order_bits as usize);
    for &s in symbols {
        c.slice_into(s, &mut out);
    }
    Ok(BitSequence::from_trusted(out))
}
