//! Exact polynomial models of singular foliations.
//!
//! A singular foliation is represented by a finite list of polynomial vector
//! fields on a chart, i.e. a Zariski-open subset of `Q^n` obtained by
//! removing the zero sets of finitely many polynomials. The module it
//! generates is always considered after saturation by those polynomials, so
//! it models the foliation on the open domain rather than on all of `Q^n`.
//! Compactly supported smooth vector fields are replaced by this polynomial
//! model; every module is given by generators, which is how the local finite
//! generation of a foliation enters.
//!
//! Every positive claim the crate makes (membership, equality, involutivity,
//! submersivity) carries an explicit certificate that is re-checked by
//! expansion before it is returned.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod geometry;
pub mod foliation;
pub mod pullback;
pub mod morita;
pub mod gallery;
