//! Ramification portraits: parse, validate, export and synthesize generators.

use treemono::portrait::{synthesize_model, Portrait};

const TEXT: &str = "\
critical c1 deg=2
critical c2 deg=2
map c1 -> p
map p -> c1
map c2 -> c2
";

fn main() -> treemono::Result<()> {
    let p = Portrait::parse(TEXT)?;
    println!("Y-portrait: {}", p.validate_y().valid);
    println!("{}", p.export_dot());
    let m = synthesize_model(&p)?;
    println!("{}", m.listing());

    let bad = Portrait::parse("critical c1 deg=2\ncritical c2 deg=2\nmap c1 -> q\nmap q -> q\nmap c2 -> c2\n")?;
    println!("violators: {:?}", bad.validate_y().violators);
    Ok(())
}
