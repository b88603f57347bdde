//! Instance files, result records, CSV tables and SVG figures.

mod instance;
mod record;
mod run;
mod svg;

pub use instance::{parse_instance, parse_str, Instance, NetMethod, Task, Tolerances};
pub use record::format_number;
pub use run::{
    execute, run, RunOptions, RunOutput, EXIT_CERTIFIED, EXIT_ERROR, EXIT_UNCERTIFIED, FIGURE_FILE,
    RECORD_FILE, TABLE_FILE,
};

/// Golden instances shipped with the crate, addressable by name.
pub const GOLDEN: [(&str, &str); 8] = [
    (
        "square-corners",
        include_str!("../../instances/square-corners.toml"),
    ),
    (
        "equilateral-disks",
        include_str!("../../instances/equilateral-disks.toml"),
    ),
    ("line-gap", include_str!("../../instances/line-gap.toml")),
    (
        "x-space-sweep",
        include_str!("../../instances/x-space-sweep.toml"),
    ),
    (
        "equilateral-intersect",
        include_str!("../../instances/equilateral-intersect.toml"),
    ),
    (
        "square-two-net",
        include_str!("../../instances/square-two-net.toml"),
    ),
    (
        "triangle-fermat",
        include_str!("../../instances/triangle-fermat.toml"),
    ),
    (
        "triangle-oracle",
        include_str!("../../instances/triangle-oracle.toml"),
    ),
];

pub fn golden(name: &str) -> Option<&'static str> {
    GOLDEN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}
