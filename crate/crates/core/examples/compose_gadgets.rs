//! Writes the stock two-track gadgets, stacked from the parts, into the
//! directory given as the first argument (default `gadgets`).

use std::path::PathBuf;

use tantrix::compiler::{compose, stock_plans};
use tantrix::gadgets::{part_library, serialize_gadget};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "gadgets".into()));
    let parts = part_library();
    for plan in stock_plans() {
        let g = compose(&plan, &parts).unwrap_or_else(|e| panic!("{e}"));
        let path = dir.join(format!("{}.gadget", plan.name.to_lowercase()));
        let text = format!(
            "# stacked from parts by the compose_gadgets example\n{}",
            serialize_gadget(&g)
        );
        std::fs::write(&path, text).unwrap();
        println!("{} tiles {} height {}", plan.name, g.cells.len(), g.height);
    }
}
