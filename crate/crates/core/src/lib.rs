//! Wandering and colliding segments for affine maps of complex tori and
//! their Lattès quotients, decided with exact quadratic arithmetic.

pub mod cli;
pub mod lattes;
pub mod lattice;
pub mod line_orbit;
pub mod mirror;
pub mod numbers;
pub mod segment;
pub mod torus_map;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/numbers.md")]
struct GuideNumbers;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/maps.md")]
struct GuideMaps;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/lines.md")]
struct GuideLines;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/segments.md")]
struct GuideSegments;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sphere.md")]
struct GuideSphere;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
struct GuideCli;
