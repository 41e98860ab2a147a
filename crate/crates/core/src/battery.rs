//! Fixed small algebras used across the test suites and the `all` command.

use crate::algebra::{Algebra, LieAlgebraSpec};
use crate::linalg::Mat;
use crate::rat::{rint, rzero};

/// Standard block form `omega(d_i ^ d_{i+1}) = 1` on consecutive pairs.
pub fn standard_omega(dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    for b in 0..dim / 2 {
        *m.at_mut(2 * b, 2 * b + 1) = rint(1);
        *m.at_mut(2 * b + 1, 2 * b) = rint(-1);
    }
    m
}

/// Abelian, dim 2, chi = 0.
pub fn a2() -> Algebra {
    Algebra::new(LieAlgebraSpec::abelian(2, vec![rzero(); 2], standard_omega(2))).unwrap()
}

/// Nonabelian Frobenius: `[d1, d2] = d1`, chi = 0.
pub fn f2() -> Algebra {
    let mut spec = LieAlgebraSpec::abelian(2, vec![rzero(); 2], standard_omega(2));
    spec.c[0][1][0] = rint(1);
    spec.c[1][0][0] = rint(-1);
    Algebra::new(spec).unwrap()
}

/// Same bracket as `f2` but with the trace form chi = x^2.
pub fn x2() -> Algebra {
    let mut spec = LieAlgebraSpec::abelian(2, vec![rzero(), rint(1)], standard_omega(2));
    spec.c[0][1][0] = rint(1);
    spec.c[1][0][0] = rint(-1);
    Algebra::new(spec).unwrap()
}

/// Abelian, dim 4, chi = 0.
pub fn a4() -> Algebra {
    Algebra::new(LieAlgebraSpec::abelian(4, vec![rzero(); 4], standard_omega(4))).unwrap()
}

/// Direct sum of two copies of `f2` with block omega.
pub fn f4() -> Algebra {
    let mut spec = LieAlgebraSpec::abelian(4, vec![rzero(); 4], standard_omega(4));
    spec.c[0][1][0] = rint(1);
    spec.c[1][0][0] = rint(-1);
    spec.c[2][3][2] = rint(1);
    spec.c[3][2][2] = rint(-1);
    Algebra::new(spec).unwrap()
}

/// The named battery, in a fixed order.
pub fn all() -> Vec<(&'static str, Algebra)> {
    vec![
        ("A2", a2()),
        ("F2", f2()),
        ("X2", x2()),
        ("A4", a4()),
        ("F4", f4()),
    ]
}
