//! Exact power sums `S_r(p) = sum_t a_t(p)^r` for every corpus family.

use ecmoments::corpus;
use ecmoments::modular::PrimeList;
use ecmoments::trace::moment_sums;

fn main() -> ecmoments::Result<()> {
    let primes = PrimeList::first(30);
    let p = primes.nth(30).expect("30 primes");
    println!("p = {p}");
    for family in corpus::corpus() {
        let rec = moment_sums(&family, 30, p, 7)?;
        let sums: Vec<String> = rec.sums().iter().map(|s| s.to_string()).collect();
        println!("{:<24} {}", family.name(), sums.join(" "));
    }
    Ok(())
}
