//! Exact comparison of computed first and second moments with the closed
//! forms of the three template shapes.

use ecmoments::closed_form::verify_family;
use ecmoments::corpus;
use ecmoments::modular::PrimeList;
use ecmoments::trace::moment_sums;

fn main() -> ecmoments::Result<()> {
    let primes = PrimeList::first(100);
    for family in corpus::corpus().into_iter().filter(|f| f.template().is_some()) {
        let records = primes
            .range(3, 100)
            .map(|(i, p)| moment_sums(&family, i, p, 2))
            .collect::<ecmoments::Result<Vec<_>>>()?;
        let report = verify_family(&family, &records)?;
        let last = report.checks.last().expect("checked primes");
        println!(
            "{:<16} {:<40} {:>3} primes exact, e.g. p = {}: S1 = {}, S2 = {}",
            report.family,
            report.template.to_string(),
            report.checked(),
            last.p,
            last.s1,
            last.s2
        );
        assert!(report.all_passed());
    }
    Ok(())
}
