//! Root solving, global arrangements of root branches, and numeric
//! smoothness and integrability probes.

pub mod arrange;
pub mod contact;
pub mod precise;
pub mod probe;
pub mod roots;
pub mod sobolev;

pub use arrange::{arrange, default_grid, local_matching, Matching, RootTrajectories, Strategy};
pub use contact::contact_profile;
pub use precise::precise_roots;
pub use probe::{smoothness_probe, BranchProbe, ProbeVerdict};
pub use roots::{roots_at, roots_at_f64, RootSample};
pub use sobolev::{sobolev_probe, SobolevReport};
