//! Run the entire structural check suite for one type and player count —
//! the same thing `coxeter verify --type C --n 3` does.
//!
//! Run: `cargo run --release --example verify_everything`

use coxeter_interchange::signed::RootType;
use coxeter_interchange::verify::{verify_type, VerifyOptions};

fn main() -> coxeter_interchange::Result<()> {
    let opts = VerifyOptions::default();
    for (rt, n) in [(RootType::B, 3), (RootType::C, 3), (RootType::D, 4)] {
        let report = verify_type(rt, n, &opts)?;
        print!("{}", report.render());
        assert!(report.all_passed());
    }
    Ok(())
}
