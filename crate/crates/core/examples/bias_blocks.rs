//! Sign of the second-moment lower order term over blocks of consecutive
//! primes, with a histogram of the block means written as SVG.
//!
//! `cargo run --release --example bias_blocks -- [family] [primes]`

use ecmoments::bias::{block_stats, histogram, residual_series, HalfExponent};
use ecmoments::corpus;
use ecmoments::modular::PrimeList;
use ecmoments::svg::emit_histogram_svg;
use ecmoments::trace::moment_sums;
use rayon::prelude::*;

fn main() -> ecmoments::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "rank1-1-t-m1-mt1-0".into());
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let family = corpus::by_name(&name).expect("unknown family");
    let primes = PrimeList::first(count + 2);
    let jobs: Vec<_> = primes.range(3, count + 2).collect();
    let records = jobs
        .par_iter()
        .map(|&(i, p)| moment_sums(&family, i, p, 2))
        .collect::<ecmoments::Result<Vec<_>>>()?;

    // closed-form families carry no p^(3/2) term
    let exponent = if family.template().is_some() {
        HalfExponent::whole(1)
    } else {
        HalfExponent::from_halves(3)
    };
    let series = residual_series(&records, 2, exponent)?;
    println!("{name}: (S2 - p^2) / p^{exponent} over {} primes", series.len());
    for size in [50, 10] {
        let report = block_stats(&series, size)?;
        println!(
            "blocks of {size}: {} positive, {} negative, grand mean {:.4}, p-value {:.4}",
            report.n_positive, report.n_negative, report.grand_mean, report.binomial_p_value
        );
        let svg = emit_histogram_svg(&histogram(&report, 10)?, &format!("{name}, blocks of {size}"));
        let path = std::env::temp_dir().join(format!("{name}-b{size}.svg"));
        std::fs::write(&path, svg)?;
        println!("  histogram: {}", path.display());
    }
    Ok(())
}
