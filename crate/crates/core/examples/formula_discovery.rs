//! Per-congruence-class search for `S2 = p^2 + a p + b`.
//!
//! The twisted template splits cleanly mod 4; the rank 2 family admits no
//! such formula.

use ecmoments::corpus;
use ecmoments::discovery::{discover, summarize, FitMode};
use ecmoments::modular::PrimeList;
use ecmoments::trace::moment_sums;

fn main() -> ecmoments::Result<()> {
    let primes = PrimeList::first(120);
    for (name, (e, f, g)) in [("tw-1-0-0-t-0", (2, 0, 0)), ("rank2-1-t-m19-mt1-0", (2, 1, 0))] {
        let family = corpus::by_name(name).expect("built-in family");
        let records = primes
            .range(3, 120)
            .map(|(i, p)| moment_sums(&family, i, p, 2))
            .collect::<ecmoments::Result<Vec<_>>>()?;
        let fits = discover(&records, e, f, g, FitMode::default())?;
        println!("{name}, modulus 2^{e} 3^{f} 5^{g}:");
        for fit in &fits {
            println!("  {fit}");
        }
        println!("  verdict: {:?}", summarize(&fits));
    }
    Ok(())
}
