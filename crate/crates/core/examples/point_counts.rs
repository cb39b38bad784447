//! Traces of Frobenius on the fibers of a family, checked against a
//! brute-force point count and the Hasse bound.

use ecmoments::corpus;
use ecmoments::trace::{point_count_oracle, trace_of_fiber};
use ecmoments::LegendreTable;

fn main() -> ecmoments::Result<()> {
    let family = corpus::by_name("rank1-1-t-m1-mt1-0").expect("built-in family");
    let p = 43;
    let table = LegendreTable::new(p)?;
    let reduced = family.reduce_mod(p)?;
    println!("{family}");
    println!("short form mod {p}, t = 0..{}:", p - 1);
    println!("{:>3} {:>3} {:>3} {:>6} {:>6} {:>9}", "t", "A", "B", "a_t", "#E", "singular");
    for t in 0..p {
        let fiber = reduced.fiber(t);
        let a = trace_of_fiber(&fiber, &table);
        let count = point_count_oracle(&fiber);
        assert_eq!(a, p as i64 - count as i64);
        if !fiber.is_singular() {
            assert!((a * a) as u64 <= 4 * p);
        }
        println!("{t:>3} {:>3} {:>3} {a:>6} {count:>6} {:>9}", fiber.a, fiber.b, fiber.is_singular());
    }
    Ok(())
}
