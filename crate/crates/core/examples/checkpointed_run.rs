//! A resumable batch run: moments to CSV, an interruption, a resume, and
//! the text report with histograms.

use ecmoments::corpus;
use ecmoments::run::{run_moments, run_report, RunConfig};

fn main() -> ecmoments::Result<()> {
    let out_dir = std::env::temp_dir().join("ecmoments-run");
    let families = vec![
        corpus::by_name("lin-1-0-0-m1-t").expect("built-in family"),
        corpus::quartic_template_family(),
    ];
    let config = RunConfig {
        end: 80,
        block_size: 25,
        out_dir: out_dir.clone(),
        checkpoint_every: 16,
        ..RunConfig::default()
    };
    let path = run_moments(&config, &families)?;
    let full = std::fs::read_to_string(&path)?;

    // simulate a crash halfway through the last row
    std::fs::write(&path, &full[..full.len() - 12])?;
    run_moments(&RunConfig { resume: true, ..config.clone() }, &families)?;
    assert_eq!(std::fs::read_to_string(&path)?, full);

    let report = run_report(&path, &config, &families)?;
    print!("{}", report.text);
    println!("{} histograms in {}", report.histograms.len(), out_dir.display());
    Ok(())
}
