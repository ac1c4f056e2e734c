//! Mapping classes of a genus-g handlebody that fix its sphere system.
//!
//! The crate builds, from the ground up, the algebra needed to work with the
//! group of isotopy classes of homeomorphisms of a handlebody that preserve a
//! distinguished collection of meridian disks:
//!
//! * [`freegroup`]: freely reduced words and certified automorphisms of a
//!   free group.
//! * [`surface`]: the fundamental group of a closed orientable surface, with
//!   a small-cancellation normal form that decides the word problem.
//! * [`braid2`]: two marked points moving in a disk with holes; the named
//!   generator set (a rotor, anchored hole twists, freewheeling pair pushes)
//!   acts on the fundamental group of the complement and satisfies one
//!   defining relation.
//! * [`arcs`]: straightening classes of an arc in the boundary surface, the
//!   generator action on them, and the factorization of a class into a
//!   product of generators.
//! * [`width`]: crossing schedules of a straightening homotopy, their width,
//!   and the rewrite that keeps every prefix count nonnegative.
//! * [`numerics`]: radial damping profiles, the Jacobian of the damped
//!   straightening map, and the determinant scan that certifies when the
//!   final straightening stage is an embedding.
//! * [`cli`]: the command line surface over all of the above.
//!
//! The `examples/` directory exercises each capability end to end; start
//! with `relations` and `factor_arc`.

pub mod arcs;
pub mod braid2;
pub mod cli;
pub mod freegroup;
pub mod numerics;
pub mod surface;
pub mod width;

pub use arcs::{ArcClass, GenKind, GoeritzError, GoeritzGen, GoeritzWord, HandlebodyModel};
pub use width::{CrossEvent, Schedule, WidthError};
pub use braid2::{B2Gen, Braid2Elt, Braid2Error, PlanarModel};
pub use freegroup::{FAut, FWord, FreeGroupError};
pub use numerics::{
    mat::Mat, BumpProfile, GridSpec, KappaProfile, NumericsError, RadialProfile, Stage5Report,
    WorrisomeReport,
};
pub use surface::{SurfaceError, SurfaceGroup, SurfaceWord};
