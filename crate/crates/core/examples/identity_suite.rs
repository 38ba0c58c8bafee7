// The identity suite, then the same suite with a corrupted filter bank.

use anidecay::io::{identity_suite, verify_identities};
use anidecay::littlewood_paley::Profile;

pub fn run_example() -> anidecay::Result<()> {
    let report = verify_identities()?;
    print!("{report}");
    let bad = identity_suite(Profile::Corrupted)?;
    let failed: Vec<&str> = bad.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    println!("corrupted bank fails: {failed:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
