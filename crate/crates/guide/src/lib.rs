//! The book under `book/`, compiled so its code blocks run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[doc = include_str!("../../../book/src/connectivity.md")]
pub mod connectivity {}

#[doc = include_str!("../../../book/src/gate-errors.md")]
pub mod gate_errors {}

#[doc = include_str!("../../../book/src/surface-code.md")]
pub mod surface_code {}

#[doc = include_str!("../../../book/src/distillation.md")]
pub mod distillation {}

#[doc = include_str!("../../../book/src/architecture.md")]
pub mod architecture {}

#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
