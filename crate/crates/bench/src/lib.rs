//! Shared inputs for the criterion benches.

use orthoprob_core::formats::{gen_mo, parse_greechie};
use orthoprob_core::OrthoLattice;

/// Lattices of increasing size used across the benches.
pub fn bench_lattices() -> Vec<(&'static str, OrthoLattice)> {
    vec![
        ("mo-4", gen_mo(4).unwrap()),
        ("mo-8", gen_mo(8).unwrap()),
        (
            "pentagon",
            parse_greechie("gre 1\nblock a b c\nblock c d e\nblock e f g\nblock g h i\nblock i j a\n")
                .unwrap(),
        ),
    ]
}
