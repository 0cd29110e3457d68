//! Draws Kostlan sections and round-trips them through the text and binary record formats.

use std::sync::Arc;

use randci::kostlan::{read_records, sample, BasisSet, RngSeed, SectionRecord};
use randci::{AmbientSpace, BundleSystem};

fn main() -> randci::Result<()> {
    let x = AmbientSpace::new(vec![1, 1])?;
    let b = BundleSystem::uniform(&x, 1, 3)?;
    let space = Arc::new(BasisSet::new(&x, &b)?);
    println!("{} coefficients per section", space.bases().iter().map(|m| m.len()).sum::<usize>());

    let mut text = String::new();
    let mut binary = Vec::new();
    for t in 0..4 {
        let s = sample(&space, RngSeed::new(7, t, 0));
        println!("trial {t}: |s| = {:.4}", s.norm_l2());
        let rec = SectionRecord::from_section(&s)?;
        text.push_str(&rec.to_json_line());
        text.push('\n');
        rec.write_binary(&mut binary).expect("write to a Vec");
    }

    let from_text = read_records(text.as_bytes())?;
    let from_binary = read_records(&binary)?;
    assert_eq!(from_text, from_binary);
    println!("{} records, {} bytes as text, {} bytes as binary", from_text.len(), text.len(), binary.len());
    Ok(())
}
