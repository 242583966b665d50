use displab::grid::RadialGrid;
use displab::potential::{resonance_coupling_sweep, RadialPotential};
use std::sync::Arc;

fn main() {
    let g = Arc::new(RadialGrid::new(4, 1e-3, 24.0, 3, 8));
    let base = RadialPotential::preset("gaussian").unwrap();
    let cs: Vec<f64> = (2..26).map(|i| 0.5 * i as f64).collect();
    let (rows, crossing) = resonance_coupling_sweep(&base, &cs, g, 0.02);
    for (c, s) in &rows {
        println!("g = {c:8.2}  ssv = {s:.6e}");
    }
    println!("crossing below 0.02: {crossing:?}");
}
