use super::problem::HingePotential;
use crate::scalar::Scalar;

/// Closed-form minimizer of `potential(x) + (rho/2) |x - center|^2` over the
/// potential's local variables, where `center = consensus - dual`.
///
/// The hinge depends on `x` only through `c . x`, so the minimizer is
/// `center - beta c` for some `beta >= 0`:
/// - argument non-positive at the center: `beta = 0`;
/// - linear hinge: `beta = w / rho` if that keeps the argument non-negative,
///   otherwise the projection onto the hinge's zero set;
/// - squared hinge: `beta = 2 w t / (rho + 2 w |c|^2)` with `t` the argument
///   at the center.
pub fn prox_step<T: Scalar>(potential: &HingePotential<T>, center: &[T], rho: T, out: &mut [T]) {
    let coeffs = potential.coeffs();
    out[..coeffs.len()].copy_from_slice(&center[..coeffs.len()]);
    let t = potential.linear(center);
    if potential.weight <= T::zero() || t <= T::zero() {
        return;
    }
    let norm2: T = coeffs.iter().map(|&c| c * c).sum();
    if norm2 <= T::zero() {
        return;
    }
    let w = potential.weight;
    let beta = if potential.squared {
        let two = T::lit(2.0);
        two * w * t / (rho + two * w * norm2)
    } else {
        let step = w / rho;
        if t - step * norm2 >= T::zero() {
            step
        } else {
            t / norm2
        }
    };
    for (o, &c) in out.iter_mut().zip(coeffs) {
        *o -= beta * c;
    }
}
