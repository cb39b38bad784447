//! Loads families from a TOML file and prints their invariants.
//!
//! `cargo run --example family_file -- families.toml`; without an argument
//! the built-in corpus plus the rank 6 family is written out and re-read.

use std::path::PathBuf;

use ecmoments::config::{families_to_toml, parse_family_file};
use ecmoments::corpus;

fn main() -> ecmoments::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let mut all = corpus::corpus();
            all.push(corpus::rank_six_family());
            let path = std::env::temp_dir().join("ecmoments-families.toml");
            std::fs::write(&path, families_to_toml(&all))?;
            path
        }
    };
    for family in parse_family_file(&path)? {
        let inv = family.invariants();
        let (a, b) = family.short_form();
        println!("{family}");
        println!("  c4 = {}\n  c6 = {}", inv.c4, inv.c6);
        println!("  short form: y^2 = x^3 + ({a}) x + ({b})");
        match family.template() {
            Some(t) => println!("  template: {t}"),
            None => println!("  no closed-form template"),
        }
    }
    Ok(())
}
