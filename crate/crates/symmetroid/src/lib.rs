//! File formats, certificates, witness catalogs and the command line for
//! quintic symmetroid node computations.
//!
//! The numerical work lives in `symmetroid-core`; this crate adds what
//! needs `std`: pencil and witness files, certificate output, a rayon
//! executor, the per-process start-solution cache and the `cmd_*`
//! functions behind the `symmetroid` binary.

pub mod certificate;
pub mod cmd;
pub mod exec;
pub mod families;
pub mod session;
pub mod text;
pub mod witness;

pub use cmd::{
    cmd_catalog, cmd_certify, cmd_climb, cmd_family, cmd_grid, cmd_solve, CatalogAction, CliError, ClimbStart, Exit,
};
pub use exec::Pool;
pub use session::RunConfig;
pub use text::{Number, ParseError, PencilText};
pub use witness::{load_witness, save_witness, verify_catalog, Catalog, CatalogReport, WitnessRecord};
