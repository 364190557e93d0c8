//! Element-wise maps shared by every solver: the sign function, the L1
//! proximal operator (soft thresholding), the orthant alignment `pi`,
//! the pseudo-gradient `psi`, and the passive alignment `phi`.
//!
//! All operators allocate fresh outputs; the previous iterate stays
//! intact for the solver's update rule.

use crate::numcore::ParamVector;
use crate::{Error, Result};

/// Nonnegative shrinkage amount (eta * lambda in the solvers).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Argument(format!(
                "threshold must be finite and nonnegative, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Sign with exact-zero middle branch. `-0.0` compares equal to zero, so
/// orthant membership never depends on the IEEE sign of zero.
pub fn sign(t: f64) -> i32 {
    if t > 0.0 {
        1
    } else if t < 0.0 {
        -1
    } else {
        0
    }
}

/// Soft thresholding: `sign(y_i) * max(|y_i| - t, 0)` per coordinate.
pub fn prox_l1(y: &ParamVector, t: Threshold) -> ParamVector {
    let t = t.value();
    let out = y
        .iter()
        .map(|&yi| f64::from(sign(yi)) * (yi.abs() - t).max(0.0))
        .collect();
    ParamVector::new(out).expect("shrinkage of finite input is finite")
}

/// Keeps `x_i` where its sign matches the reference sign, zeroing the
/// rest.
pub fn align_pi(x: &ParamVector, reference: &ParamVector) -> Result<ParamVector> {
    check_len(x, reference)?;
    let out = x
        .iter()
        .zip(reference.iter())
        .map(|(&xi, &ri)| if sign(xi) == sign(ri) { xi } else { 0.0 })
        .collect();
    ParamVector::new(out)
}

/// Pseudo-gradient: shifts `v` by the L1 subgradient choice dictated by
/// the sign of `x`, with the five-branch rule at `x_i = 0`.
pub fn pseudo_grad(v: &ParamVector, x: &ParamVector, lambda: f64) -> Result<ParamVector> {
    check_len(v, x)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Argument(format!(
            "lambda must be finite and nonnegative, got {lambda}"
        )));
    }
    let out = v
        .iter()
        .zip(x.iter())
        .map(|(&vi, &xi)| {
            if xi > 0.0 {
                vi + lambda
            } else if xi < 0.0 {
                vi - lambda
            } else if vi + lambda < 0.0 {
                vi + lambda
            } else if vi - lambda > 0.0 {
                vi - lambda
            } else {
                0.0
            }
        })
        .collect();
    ParamVector::new(out)
}

/// Passive alignment: zeroes coordinates that flipped sign against the
/// reference or fall inside the shrinkage band, and shrinks the rest by
/// `rho` toward zero.
///
/// At the band boundary `|x_i| == rho` the shrink branch applies and
/// lands exactly at zero, so both readings of the strict inequality
/// coincide.
pub fn align_phi(x: &ParamVector, reference: &ParamVector, rho: Threshold) -> Result<ParamVector> {
    check_len(x, reference)?;
    let rho = rho.value();
    let out = x
        .iter()
        .zip(reference.iter())
        .map(|(&xi, &ri)| {
            if sign(xi) * sign(ri) == -1 || xi.abs() < rho {
                0.0
            } else {
                xi - rho * f64::from(sign(xi))
            }
        })
        .collect();
    ParamVector::new(out)
}

fn check_len(u: &ParamVector, v: &ParamVector) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(values: &[f64]) -> ParamVector {
        ParamVector::from_slice(values).unwrap()
    }

    #[test]
    fn sign_branches() {
        assert_eq!(sign(3.5), 1);
        assert_eq!(sign(-2.0), -1);
        assert_eq!(sign(0.0), 0);
        assert_eq!(sign(-0.0), 0);
    }

    #[test]
    fn prox_shrinks_elementwise() {
        let y = pv(&[3.0, -1.0, 0.5]);
        let out = prox_l1(&y, Threshold::new(1.0).unwrap());
        assert_eq!(out.as_slice(), &[2.0, 0.0, 0.0]);
    }

    #[test]
    fn prox_zero_threshold_is_identity() {
        let y = pv(&[1.5, -2.25, 0.0, 4.0]);
        assert_eq!(prox_l1(&y, Threshold::new(0.0).unwrap()), y);
    }

    #[test]
    fn prox_fixes_zero() {
        let y = pv(&[0.0, 0.0]);
        assert_eq!(
            prox_l1(&y, Threshold::new(0.5).unwrap()).as_slice(),
            &[0.0, 0.0]
        );
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(Threshold::new(-0.1).is_err());
    }

    #[test]
    fn pi_keeps_matching_signs() {
        let x = pv(&[1.0, -2.0, 3.0]);
        let r = pv(&[0.5, 1.0, 0.0]);
        assert_eq!(align_pi(&x, &r).unwrap().as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn pi_self_reference_identity() {
        let d = pv(&[1.0, -2.0, 0.0, 4.5]);
        assert_eq!(align_pi(&d, &d).unwrap(), d);
    }

    #[test]
    fn pi_sign_cases() {
        let x = pv(&[-1.0, -1.0]);
        let r = pv(&[-2.0, 3.0]);
        assert_eq!(align_pi(&x, &r).unwrap().as_slice(), &[-1.0, 0.0]);
    }

    #[test]
    fn pi_idempotent_against_fixed_reference() {
        let x = pv(&[1.0, -2.0, 3.0, 0.0]);
        let r = pv(&[0.5, 1.0, 0.0, -1.0]);
        let once = align_pi(&x, &r).unwrap();
        let twice = align_pi(&once, &r).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn pseudo_grad_branches() {
        let out = pseudo_grad(&pv(&[2.0, -3.0]), &pv(&[1.0, -1.0]), 1.0).unwrap();
        assert_eq!(out.as_slice(), &[3.0, -4.0]);
        let out = pseudo_grad(&pv(&[-2.0]), &pv(&[0.0]), 1.0).unwrap();
        assert_eq!(out.as_slice(), &[-1.0]);
        let out = pseudo_grad(&pv(&[0.5]), &pv(&[0.0]), 1.0).unwrap();
        assert_eq!(out.as_slice(), &[0.0]);
        let out = pseudo_grad(&pv(&[2.0]), &pv(&[0.0]), 1.0).unwrap();
        assert_eq!(out.as_slice(), &[1.0]);
    }

    #[test]
    fn pseudo_grad_collapses_at_zero_lambda() {
        let v = pv(&[2.0, -3.0, 0.0, 0.5]);
        let x = pv(&[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(pseudo_grad(&v, &x, 0.0).unwrap(), v);
    }

    #[test]
    fn phi_branches() {
        let x = pv(&[2.0, -0.3, 1.0]);
        let r = pv(&[1.0, 1.0, -1.0]);
        let out = align_phi(&x, &r, Threshold::new(0.5).unwrap()).unwrap();
        assert_eq!(out.as_slice(), &[1.5, 0.0, 0.0]);
    }

    #[test]
    fn phi_small_magnitude_zeroed() {
        let out = align_phi(&pv(&[0.4]), &pv(&[1.0]), Threshold::new(0.5).unwrap()).unwrap();
        assert_eq!(out.as_slice(), &[0.0]);
    }

    #[test]
    fn phi_zero_rho_self_reference_identity() {
        let x = pv(&[1.0, -2.0, 0.0]);
        assert_eq!(
            align_phi(&x, &x, Threshold::new(0.0).unwrap()).unwrap(),
            x
        );
    }

    #[test]
    fn phi_zero_reference_still_shrinks() {
        let out = align_phi(&pv(&[1.0]), &pv(&[0.0]), Threshold::new(0.25).unwrap()).unwrap();
        assert_eq!(out.as_slice(), &[0.75]);
    }

    #[test]
    fn phi_boundary_lands_on_zero() {
        let out = align_phi(&pv(&[0.5, -0.5]), &pv(&[1.0, -1.0]), Threshold::new(0.5).unwrap())
            .unwrap();
        assert_eq!(out.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn phi_agrees_with_prox_when_reference_allows() {
        // Wherever ref_i == 0 or sign(x_i) == sign(ref_i), phi equals prox.
        let x = pv(&[2.0, -1.5, 0.2, 0.0, -3.0]);
        let r = pv(&[1.0, -4.0, 0.0, 0.0, -0.1]);
        let t = Threshold::new(0.6).unwrap();
        let phi = align_phi(&x, &r, t).unwrap();
        let prox = prox_l1(&x, t);
        for i in 0..x.len() {
            assert_eq!(phi[i], prox[i], "coordinate {i}");
        }
    }

    #[test]
    fn length_mismatch_everywhere() {
        let a = pv(&[1.0]);
        let b = pv(&[1.0, 2.0]);
        assert!(align_pi(&a, &b).is_err());
        assert!(pseudo_grad(&a, &b, 0.0).is_err());
        assert!(align_phi(&a, &b, Threshold::new(0.0).unwrap()).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn vec_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-10.0f64..10.0, len)
        }

        proptest! {
            #[test]
            fn prox_nonexpansive(x in vec_strategy(6), y in vec_strategy(6), t in 0.0f64..3.0) {
                let t = Threshold::new(t).unwrap();
                let xv = pv(&x);
                let yv = pv(&y);
                let lhs = prox_l1(&xv, t).sub(&prox_l1(&yv, t)).unwrap().norm();
                let rhs = xv.sub(&yv).unwrap().norm();
                prop_assert!(lhs <= rhs + 1e-12);
            }

            #[test]
            fn phi_nonexpansive_fixed_reference(
                x in vec_strategy(6),
                y in vec_strategy(6),
                z in vec_strategy(6),
                t in 0.0f64..3.0,
            ) {
                let t = Threshold::new(t).unwrap();
                let (xv, yv, zv) = (pv(&x), pv(&y), pv(&z));
                let lhs = align_phi(&xv, &zv, t)
                    .unwrap()
                    .sub(&align_phi(&yv, &zv, t).unwrap())
                    .unwrap()
                    .norm();
                let rhs = xv.sub(&yv).unwrap().norm();
                prop_assert!(lhs <= rhs + 1e-12);
            }

            #[test]
            fn phi_suppresses_magnitudes(x in vec_strategy(6), z in vec_strategy(6), t in 0.0f64..3.0) {
                let out = align_phi(&pv(&x), &pv(&z), Threshold::new(t).unwrap()).unwrap();
                for (o, xi) in out.iter().zip(&x) {
                    prop_assert!(o.abs() <= (xi.abs() - t).max(0.0) + 1e-15);
                }
            }

            #[test]
            fn operators_are_elementwise(
                x in vec_strategy(5),
                z in vec_strategy(5),
                t in 0.0f64..2.0,
            ) {
                // Reversing all inputs reverses the outputs identically.
                let perm = |v: &[f64]| -> Vec<f64> { v.iter().rev().copied().collect() };
                let th = Threshold::new(t).unwrap();

                let direct = align_phi(&pv(&x), &pv(&z), th).unwrap();
                let permuted = align_phi(&pv(&perm(&x)), &pv(&perm(&z)), th).unwrap();
                prop_assert_eq!(perm(direct.as_slice()), permuted.as_slice().to_vec());

                let direct = pseudo_grad(&pv(&x), &pv(&z), t).unwrap();
                let permuted = pseudo_grad(&pv(&perm(&x)), &pv(&perm(&z)), t).unwrap();
                prop_assert_eq!(perm(direct.as_slice()), permuted.as_slice().to_vec());

                let direct = align_pi(&pv(&x), &pv(&z)).unwrap();
                let permuted = align_pi(&pv(&perm(&x)), &pv(&perm(&z))).unwrap();
                prop_assert_eq!(perm(direct.as_slice()), permuted.as_slice().to_vec());

                let direct = prox_l1(&pv(&x), th);
                let permuted = prox_l1(&pv(&perm(&x)), th);
                prop_assert_eq!(perm(direct.as_slice()), permuted.as_slice().to_vec());
            }
        }
    }
}
