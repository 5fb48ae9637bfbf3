//! Cellular homotopies: pushes of edges up through conjugation cells, and
//! null-homotopies of loops recorded as replayable move lists.

mod diagram;
mod rows;

pub use diagram::{
    fp_complement_trivialize, replay, trivialize_bounded, Avoid, DiagramCertificate, Move, MoveOp, ReplayReport,
    Trivialization, DIAGRAM_SCHEMA,
};
pub use rows::{
    build_corner, build_push, build_string, verify_levels, CellKind, CellularHomotopy, HCell, HomotopyKind,
    LevelCertificate, Row,
};
