//! Sums of `sym_k` over the Frobenius angles of a family, which should be
//! of size `sqrt(p)` rather than `p`.

use ecmoments::corpus;
use ecmoments::trace::sym_sum;

fn main() -> ecmoments::Result<()> {
    let family = corpus::by_name("rank2-1-t-m19-mt1-0").expect("built-in family");
    for p in [101u64, 401, 1009] {
        let row: Vec<String> = (1..=6)
            .map(|k| sym_sum(&family, p, k).map(|s| format!("{:8.2}", s.value / (p as f64).sqrt())))
            .collect::<ecmoments::Result<_>>()?;
        println!("p = {p:>4}: sum sym_k / sqrt(p), k = 1..6: {}", row.join(" "));
    }
    Ok(())
}
