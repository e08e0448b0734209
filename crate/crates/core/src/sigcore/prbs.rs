//! Maximal-length PRBS generators.

use super::signal::BitSequence;
use crate::error::{Error, Result};

/// Feedback taps `(n, m)` for the polynomial `x^n + x^m + 1`.
fn taps(order: u32) -> Result<(u32, u32)> {
    match order {
        7 => Ok((7, 6)),
        15 => Ok((15, 14)),
        23 => Ok((23, 18)),
        31 => Ok((31, 28)),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// Fibonacci LFSR. `seed[i]` initializes stage `i + 1` (stage 1 holds the
/// newest bit). Each step emits `stage_n XOR stage_m` and shifts it in.
#[derive(Debug, Clone)]
pub struct Prbs {
    state: u32,
    n: u32,
    m: u32,
    mask: u32,
}

impl Prbs {
    pub fn new(order: u32, seed: &[u8]) -> Result<Self> {
        let (n, m) = taps(order)?;
        if seed.len() != n as usize {
            return Err(Error::param(
                "seed",
                format!("expected {n} register bits, got {}", seed.len()),
            ));
        }
        let mut state = 0u32;
        for (i, &b) in seed.iter().enumerate() {
            if b > 1 {
                return Err(Error::param("seed", "register bits must be 0 or 1"));
            }
            state |= u32::from(b) << i;
        }
        if state == 0 {
            return Err(Error::InvalidSeed);
        }
        let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(Self { state, n, m, mask })
    }

    /// Generator seeded from an integer; the register is filled from a mixed
    /// copy of `seed` and forced nonzero.
    pub fn from_integer_seed(order: u32, seed: u64) -> Result<Self> {
        let (n, _) = taps(order)?;
        let mixed = super::noise::splitmix64(seed);
        let mut bits: Vec<u8> = (0..n).map(|i| ((mixed >> i) & 1) as u8).collect();
        if bits.iter().all(|&b| b == 0) {
            bits[0] = 1;
        }
        Self::new(order, &bits)
    }

    pub fn next_bit(&mut self) -> u8 {
        let fb = ((self.state >> (self.n - 1)) ^ (self.state >> (self.m - 1))) & 1;
        self.state = ((self.state << 1) | fb) & self.mask;
        fb as u8
    }
}

impl Iterator for Prbs {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        Some(self.next_bit())
    }
}

/// `length` bits of the PRBS of the given order from `seed`.
pub fn prbs_generate(order: u32, length: usize, seed: &[u8]) -> Result<BitSequence> {
    if length == 0 {
        return Err(Error::param("length", "must be at least 1"));
    }
    let gen = Prbs::new(order, seed)?;
    Ok(BitSequence::from_trusted(gen.take(length).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift register kept as an explicit array of stages.
    fn reference_prbs7(seed: [u8; 7], len: usize) -> Vec<u8> {
        let mut reg = seed;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let fb = reg[6] ^ reg[5];
            for i in (1..7).rev() {
                reg[i] = reg[i - 1];
            }
            reg[0] = fb;
            out.push(fb);
        }
        out
    }

    #[test]
    fn prbs7_all_ones_matches_hand_iteration() {
        let got = prbs_generate(7, 8, &[1; 7]).unwrap();
        // stages 7 and 6 stay 1 for six shifts, then the first 1 arrives
        assert_eq!(got.bits(), &[0, 0, 0, 0, 0, 0, 1, 0]);
        assert_eq!(got.bits(), reference_prbs7([1; 7], 8).as_slice());
    }

    #[test]
    fn prbs7_matches_reference_register_for_other_seeds() {
        let seed = [1, 0, 0, 1, 0, 1, 1];
        let got = prbs_generate(7, 500, &seed).unwrap();
        assert_eq!(got.bits(), reference_prbs7(seed, 500).as_slice());
    }

    #[test]
    fn prbs7_period_is_127() {
        let b = prbs_generate(7, 254, &[0, 1, 1, 0, 1, 0, 1]).unwrap();
        let b = b.bits();
        assert_eq!(&b[..127], &b[127..]);
        for p in 1..127 {
            assert_ne!(&b[..10], &b[p..p + 10], "shorter period {p}");
        }
    }

    #[test]
    fn one_period_balance() {
        for order in [7u32, 15, 23] {
            let period = (1usize << order) - 1;
            let gen = Prbs::from_integer_seed(order, 42).unwrap();
            let ones: usize = gen.take(period).map(usize::from).sum();
            assert_eq!(ones, 1 << (order - 1), "order {order}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(prbs_generate(7, 8, &[0; 7]).unwrap_err(), Error::InvalidSeed);
        assert_eq!(
            prbs_generate(9, 8, &[1; 9]).unwrap_err(),
            Error::UnsupportedOrder(9)
        );
    }

    #[test]
    fn deterministic() {
        let a = Prbs::from_integer_seed(31, 7).unwrap().take(1000).collect::<Vec<_>>();
        let b = Prbs::from_integer_seed(31, 7).unwrap().take(1000).collect::<Vec<_>>();
        assert_eq!(a, b);
    }
}
