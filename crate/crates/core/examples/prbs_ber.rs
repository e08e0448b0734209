//! Generate a PRBS, flip a few bits and count errors with a confidence interval.

use ddlink::sigcore::{ber_count, prbs_generate, BitSequence, Prbs, KR4_FEC_THRESHOLD};

fn main() -> ddlink::Result<()> {
    // PRBS7 repeats after 127 bits
    let p7 = prbs_generate(7, 254, &[1; 7])?;
    assert_eq!(p7.bits()[..127], p7.bits()[127..]);
    println!("PRBS7 period check ok, first 16 bits: {:?}", &p7.bits()[..16]);

    let n = 1 << 20;
    let tx = BitSequence::new(Prbs::from_integer_seed(31, 42)?.take(n).collect())?;
    let mut rx = tx.clone().into_bits();
    for i in (0..n).step_by(40_000) {
        rx[i] ^= 1;
    }
    let report = ber_count(&tx, &BitSequence::new(rx)?, KR4_FEC_THRESHOLD)?;
    let (lo, hi) = report.wilson_interval();
    println!(
        "{} errors in {} bits: BER {:.2e} (95% CI {:.2e}..{:.2e}), KR4 pass: {}",
        report.bit_errors, report.bits_compared, report.ber, lo, hi, report.pass
    );
    Ok(())
}
