//! The finite-window scattering map `U(c + T, c − T)` around the middle slice
//! `c` of the lattice. No limit `T → ∞` is taken.

use crate::waveeq::{Propagator, Scheme, SliceHamiltonian};
use crate::{CMatrix, Error, Result};

/// Index of the middle slice, `(nt − 1) / 2`.
pub fn window_center(nt: usize) -> usize {
    (nt - 1) / 2
}

/// `U(c + T, c − T)` for a half-width of `half_width` slices, evolved with
/// Crank–Nicolson.
pub fn finite_window_evolution<H: SliceHamiltonian + ?Sized>(h: &H, half_width: usize) -> Result<CMatrix> {
    finite_window_from(&Propagator::new(h, Scheme::CrankNicolson)?, half_width)
}

/// [`finite_window_evolution`] from an existing propagator.
pub fn finite_window_from(p: &Propagator, half_width: usize) -> Result<CMatrix> {
    let nt = p.lattice().nt();
    let c = window_center(nt);
    if half_width > c || c + half_width >= nt {
        return Err(Error::TimeRange { t0: c.saturating_sub(half_width), t1: c + half_width, nt });
    }
    p.operator(c + half_width, c - half_width)
}
