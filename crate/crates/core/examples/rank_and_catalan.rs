//! Rank from the first moment, and the odd moments against `-C_{k+1} rank`.

use ecmoments::bias::{catalan_check, nagao_rank_estimate};
use ecmoments::corpus;
use ecmoments::modular::PrimeList;
use ecmoments::trace::moment_sums;
use rayon::prelude::*;

fn main() -> ecmoments::Result<()> {
    let primes = PrimeList::first(150);
    let jobs: Vec<_> = primes.range(3, 150).collect();
    let x = primes.last().expect("primes");
    for name in ["lin-1-0-0-m1-t", "rank1-1-t-m1-mt1-0", "quartic"] {
        let family = corpus::by_name(name).expect("built-in family");
        let rank = family.expected_rank().unwrap_or(0);
        let records = jobs
            .par_iter()
            .map(|&(i, p)| moment_sums(&family, i, p, 5))
            .collect::<ecmoments::Result<Vec<_>>>()?;
        println!("{name} (rank {rank}): estimate at x = {x}: {:.3}", nagao_rank_estimate(&records, x)?);
        for k in 1..=2 {
            let c = catalan_check(&records, k, rank)?;
            println!(
                "  mean S{}/p^{} = {:.3}, predicted {:.0}",
                2 * k + 1,
                k + 1,
                c.observed_mean,
                c.predicted
            );
        }
    }
    Ok(())
}
