//! Print the generator catalog of each type as JSON: the minimum-size
//! neutral structures whose reversals are the interchange-graph edges.
//!
//! Run: `cargo run --release --example generator_catalog`

use coxeter_interchange::generators::catalog_json;
use coxeter_interchange::signed::RootType;

fn main() {
    for rt in RootType::ALL {
        println!("type {rt}:");
        println!(
            "{}",
            serde_json::to_string_pretty(&catalog_json(rt)).unwrap()
        );
    }
}
