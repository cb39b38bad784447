//! Closed-form character sums against direct summation.
//!
//! `cargo run --example legendre_sums -- 101`

use ecmoments::modular::{legendre_symbol, linear_legendre_sum, quadratic_legendre_sum, LegendreTable};

fn main() -> ecmoments::Result<()> {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(101);
    let table = LegendreTable::new(p)?;
    let residues = (1..p).filter(|&a| table.get(a) == 1).count();
    println!("p = {p}: {residues} nonzero squares, chi(-1) = {}, chi(2) = {}", table.symbol(-1), table.symbol(2));

    for (a, b) in [(1, 0), (3, 7), (0, 5)] {
        let direct: i64 = (0..p as i128).map(|x| legendre_symbol(a * x + b, p).unwrap() as i64).sum();
        println!("sum chi({a}x + {b}) = {} (direct {direct})", linear_legendre_sum(a, b, p)?);
    }
    for (a, b, c) in [(1, 0, -1), (2, 3, 1), (1, 2, 1), (1, 0, -3)] {
        let direct: i64 = (0..p as i128)
            .map(|x| legendre_symbol(a * x * x + b * x + c, p).unwrap() as i64)
            .sum();
        println!(
            "sum chi({a}x^2 + {b}x + {c}) = {} (direct {direct})",
            quadratic_legendre_sum(a, b, c, p)?
        );
    }
    Ok(())
}
