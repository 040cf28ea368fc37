//! Random test objects: states, unitaries, isometries and channels.
//!
//! Everything takes an explicit RNG so callers control seeding.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{DensityMatrix, KrausSet};
use crate::linalg::{ComplexMatrix, C64};

/// Entries with independent standard normal real and imaginary parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, d, d);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the diagonal phases of R removed).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..d {
        let z = r[(j, j)];
        let phase = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        u.column_mut(j).apply(|x| *x *= phase);
    }
    u
}

/// `rows x cols` matrix with orthonormal columns, `rows >= cols`.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    unitary(rng, rows).columns(0, cols).into_owned()
}

/// Normalized Gram matrix of a square Ginibre factor (full-rank almost surely).
pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    density_of_rank(rng, d, d)
}

pub fn density_of_rank<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, d, rank);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    DensityMatrix::from_trusted(rho.unscale(tr))
}

/// Random trace-preserving Kraus set with `n` operators of shape `d_out x d_in`,
/// cut from a random Stinespring isometry.
pub fn kraus<R: Rng + ?Sized>(rng: &mut R, d_in: usize, d_out: usize, n: usize) -> KrausSet {
    let w = isometry(rng, d_out * n, d_in);
    let ops = (0..n)
        .map(|e| DMatrix::from_fn(d_out, d_in, |j, i| w[(j * n + e, i)]))
        .collect();
    KrausSet::new(ops).expect("random Kraus operators have consistent shapes")
}
