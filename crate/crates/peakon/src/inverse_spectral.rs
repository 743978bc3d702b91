//! Reconstruction of the discrete string from Weyl-function data by
//! Stieltjes continued-fraction peeling, including reconstruction from
//! spectral-chart data.
//!
//! The peeling works on polynomial-fraction representations throughout and is
//! exact whenever the input coefficients are exact rationals. Values at
//! infinity are leading-coefficient ratios after degree normalization, never
//! evaluations at a large argument; the top coefficient of every subtraction
//! is cancelled structurally rather than left to rounding.

use crate::error::{Error, Result};
use crate::herglotz::Herglotz;
use crate::poly::RatFn;
use crate::scalar::{Rat, Scalar};
use crate::spectral_flow::{chart_weyl_function, ChartKind, SpectralChart};
use crate::string::DiscreteString;

/// Relative tolerance for the floating normalization checks
/// (`Omega_0(0) = 4`, `E_0(0) = -1/4`).
const NORMALIZATION_TOL: f64 = 1e-10;
/// Relative threshold below which a floating peeling remainder counts as zero.
const REMAINDER_TOL: f64 = 1e-8;
/// Total-length tolerance accepted from a floating reconstruction.
const RECONSTRUCT_LENGTH_TOL: f64 = 1e-8;

/// Which Weyl function the data represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylFlavor {
    /// `psi/phi` form: value 4 at zero, constant term the left gap.
    Omega0,
    /// `-phi/psi` form: value -1/4 at zero, constant term `-1/left gap`.
    E0,
}

/// A Weyl function tagged with its flavor, validated for reconstruction.
#[derive(Clone, Debug)]
pub struct WeylData<T: Scalar> {
    function: Herglotz<T>,
    flavor: WeylFlavor,
}

impl<T: Scalar> WeylData<T> {
    /// Validates the flavor normalization at zero and, when pole/residue data
    /// is attached, positivity of poles and residues.
    pub fn new(function: Herglotz<T>, flavor: WeylFlavor) -> Result<Self> {
        let value = function.eval(&T::zero())?;
        let expected = match flavor {
            WeylFlavor::Omega0 => 4.0,
            WeylFlavor::E0 => -0.25,
        };
        let ok = if T::EXACT {
            let expected_exact = match flavor {
                WeylFlavor::Omega0 => T::from_int(4),
                WeylFlavor::E0 => -T::one() / T::from_int(4),
            };
            value == expected_exact
        } else {
            (value.to_f64() - expected).abs() <= NORMALIZATION_TOL * expected.abs()
        };
        if !ok {
            return Err(Error::NormalizationViolation {
                flavor: match flavor {
                    WeylFlavor::Omega0 => "Omega0",
                    WeylFlavor::E0 => "E0",
                },
                value: value.to_f64(),
                expected,
            });
        }
        if let Some(sum) = function.sum_form() {
            for (k, g) in sum.poles.iter().enumerate() {
                if !(*g > T::zero()) {
                    return Err(Error::InvalidInput(format!(
                        "pole {k} = {g} not positive"
                    )));
                }
            }
            for (k, r) in sum.residues.iter().enumerate() {
                if !(*r > T::zero()) {
                    return Err(Error::InvalidInput(format!(
                        "residue {k} = {r} not positive"
                    )));
                }
            }
        }
        Ok(WeylData { function, flavor })
    }

    pub fn function(&self) -> &Herglotz<T> {
        &self.function
    }

    pub fn flavor(&self) -> WeylFlavor {
        self.flavor
    }
}

/// Peels gaps and masses off the large-argument expansion of `Omega_0`.
///
/// The continued fraction is
/// `Omega_0 = l_0 + 1/(-m_1 x + 1/(l_1 + 1/(-m_2 x + ... + 1/l_N)))`,
/// so alternating reciprocals expose one gap (value at infinity of the
/// bounded tail) and one mass (negated linear-growth coefficient) per turn.
/// Every extracted quantity must be positive, and after the last mass the
/// remainder must vanish identically.
pub fn reconstruct<T: Scalar>(w: &WeylData<T>) -> Result<DiscreteString<T>> {
    let f = w.function.exact_fraction();
    let omega = match w.flavor {
        WeylFlavor::Omega0 => f,
        // Omega_0 = -1/E_0.
        WeylFlavor::E0 => RatFn::new(f.den.neg(), f.num),
    };
    let n_masses = w.function.n_poles();
    let (gaps, masses) = peel(omega, n_masses)?;
    DiscreteString::with_length_tol(
        gaps.iter().map(|g| T::from_rat(g)).collect(),
        masses.iter().map(|m| T::from_rat(m)).collect(),
        RECONSTRUCT_LENGTH_TOL,
    )
}

/// Runs the peeling in exact rational arithmetic: floating inputs have been
/// lifted losslessly beforehand, so each subtraction cancels its top
/// coefficient exactly and no precision is lost inside the classically
/// ill-conditioned recursion. Only the final remainder test is
/// tolerance-aware (the lifted data need not be an exact Weyl function).
fn peel(start: RatFn<Rat>, n_masses: usize) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let mut u = start;
    let mut gaps: Vec<Rat> = Vec::with_capacity(n_masses + 1);
    let mut masses: Vec<Rat> = Vec::with_capacity(n_masses);

    for step in 0..=n_masses {
        // Gap: value of the bounded tail at infinity (leading-coefficient
        // ratio). Subtracting it cancels the top coefficient exactly.
        let Some(l) = u.value_at_infinity() else {
            return Err(Error::DegreeMismatch(format!(
                "unbounded tail at step {step}"
            )));
        };
        if !(l > Rat::zero()) {
            return Err(Error::NonHerglotzRemainder {
                step,
                what: "gap",
                value: l.to_f64(),
            });
        }
        let scale = u.num.max_abs_coeff();
        let r = u.sub_const(&l);
        gaps.push(l);

        if step == n_masses {
            // All masses extracted: the remainder must vanish. Lifted
            // floating data leaves a residue at its working scale; exact
            // data leaves an exact zero (and trivially passes).
            let rem = r.num.max_abs_coeff();
            if rem > REMAINDER_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::DegreeMismatch(format!(
                    "remainder of relative size {:e} left after {n_masses} masses",
                    rem / scale.max(f64::MIN_POSITIVE)
                )));
            }
            break;
        }
        if r.num.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "remainder vanished after {} masses, expected {n_masses}",
                masses.len()
            )));
        }

        // Mass: negated linear-growth coefficient of 1/r.
        let h = r.recip();
        let (dn, dd) = (h.num.degree(), h.den.degree());
        let grows_linearly = matches!((dn, dd), (Some(dn), Some(dd)) if dn == dd + 1);
        if !grows_linearly {
            return Err(Error::DegreeMismatch(format!(
                "tail reciprocal at step {step} has degrees {dn:?}/{dd:?}"
            )));
        }
        let m = -(h.num.leading().unwrap().clone() / h.den.leading().unwrap().clone());
        if !(m > Rat::zero()) {
            return Err(Error::NonHerglotzRemainder {
                step,
                what: "mass",
                value: m.to_f64(),
            });
        }
        let bounded = h.add_linear(&m);
        if bounded.num.degree() > bounded.den.degree() {
            return Err(Error::DegreeMismatch(format!(
                "linear growth did not cancel at step {step}"
            )));
        }
        masses.push(m);
        u = bounded.recip();
    }

    let total: f64 = gaps.iter().map(Scalar::to_f64).sum();
    if (total - 4.0).abs() > RECONSTRUCT_LENGTH_TOL {
        return Err(Error::NormalizationViolation {
            flavor: "total length",
            value: total,
            expected: 4.0,
        });
    }
    Ok((gaps, masses))
}

/// Rebuilds the string behind a spectral chart: the chart's Weyl function is
/// reassembled from roots and residues (constant term resolved by
/// normalization), unwound to `Omega_0` by Moebius inversion in exact lifted
/// arithmetic, and peeled.
pub fn from_chart(chart: &SpectralChart) -> Result<DiscreteString<f64>> {
    if chart.n() == 0 {
        return Ok(DiscreteString::empty());
    }
    let f = chart_weyl_function(chart)?.exact_fraction();
    let parameter = chart.parameter.to_rat();
    let omega = match chart.kind {
        ChartKind::C => {
            // Omega_0 = C - 1/E_0^C = (C num - den)/num.
            let num = f.num.scale(&parameter).sub(&f.den);
            RatFn::new(num, f.num)
        }
        ChartKind::F => {
            // E_0 = F - 1/Omega_0^F, then Omega_0 = -1/E_0 = -num/(F num - den).
            let e0_num = f.num.scale(&parameter).sub(&f.den);
            RatFn::new(f.num.neg(), e0_num)
        }
    };
    let value0 = omega.eval(&Rat::zero()).to_f64();
    if (value0 - 4.0).abs() > 1e-7 {
        return Err(Error::NormalizationViolation {
            flavor: "Omega0",
            value: value0,
            expected: 4.0,
        });
    }
    let (gaps, masses) = peel(omega, chart.n())?;
    DiscreteString::with_length_tol(
        gaps.iter().map(Scalar::to_f64).collect(),
        masses.iter().map(Scalar::to_f64).collect(),
        RECONSTRUCT_LENGTH_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::spectral_flow::{chart, evolve, HamiltonianSpec};
    use crate::string::{from_peakons, to_peakons, weyl_omega0, weyl_omega0_exact, PeakonState};

    #[test]
    fn one_peakon_reconstruction() {
        let omega = Herglotz::new(2.0, vec![0.25], vec![0.5]).unwrap();
        let w = WeylData::new(omega, WeylFlavor::Omega0).unwrap();
        let d = reconstruct(&w).unwrap();
        assert!((d.gaps()[0] - 2.0).abs() < 1e-12);
        assert!((d.gaps()[1] - 2.0).abs() < 1e-12);
        assert!((d.masses()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_reconstructs_to_empty_string() {
        let w = WeylData::new(Herglotz::constant(4.0), WeylFlavor::Omega0).unwrap();
        let d = reconstruct(&w).unwrap();
        assert_eq!(d.n_masses(), 0);
        assert_eq!(d.gaps(), &[4.0]);
    }

    #[test]
    fn e0_flavor_reconstructs_through_inversion() {
        let e0 = Herglotz::new(-0.5, vec![0.5], vec![0.125]).unwrap();
        let w = WeylData::new(e0, WeylFlavor::E0).unwrap();
        let d = reconstruct(&w).unwrap();
        assert!((d.gaps()[0] - 2.0).abs() < 1e-12);
        assert!((d.masses()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_round_trip_two_masses() {
        let d: DiscreteString<Rat> = DiscreteString::new(
            vec![Rat::from_int(2), Rat::new(2, 3), Rat::new(4, 3)],
            vec![Rat::from_int(2), Rat::new(9, 4)],
        )
        .unwrap();
        let omega = weyl_omega0_exact(&d);
        let w = WeylData::new(omega, WeylFlavor::Omega0).unwrap();
        let back = reconstruct(&w).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn float_round_trip_five_masses() {
        let d = DiscreteString::new(
            vec![0.37, 0.82, 0.45, 1.11, 0.63, 0.62],
            vec![1.7, 0.35, 2.2, 0.8, 1.05],
        )
        .unwrap();
        let omega = weyl_omega0(&d).unwrap();
        let w = WeylData::new(omega, WeylFlavor::Omega0).unwrap();
        let back = reconstruct(&w).unwrap();
        for k in 0..d.gaps().len() {
            assert!(
                (back.gaps()[k] - d.gaps()[k]).abs() < 1e-10 * d.gaps()[k],
                "gap {k}"
            );
        }
        for k in 0..d.masses().len() {
            assert!(
                (back.masses()[k] - d.masses()[k]).abs() < 1e-10 * d.masses()[k],
                "mass {k}"
            );
        }
    }

    #[test]
    fn negative_residue_rejected() {
        let bad = Herglotz::new_signed(2.0, vec![0.25, 0.5], vec![0.5, -0.1]).unwrap();
        assert!(WeylData::new(bad, WeylFlavor::Omega0).is_err());
    }

    #[test]
    fn wrong_normalization_rejected() {
        let f = Herglotz::new(2.0, vec![0.25], vec![0.4]).unwrap();
        assert!(matches!(
            WeylData::new(f, WeylFlavor::Omega0),
            Err(Error::NormalizationViolation { .. })
        ));
    }

    #[test]
    fn chart_round_trips() {
        let s = PeakonState::new(vec![-0.9, 0.4, 1.6], vec![1.1, 0.7, 1.8], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        for (kind, params) in [
            (ChartKind::C, vec![0.0, -1.0, 0.5 * d.left_gap()]),
            (ChartKind::F, vec![0.0, 1.0, -0.5 / d.left_gap()]),
        ] {
            for &p in &params {
                let ch = chart(&d, kind, p).unwrap();
                let back = from_chart(&ch).unwrap();
                for k in 0..d.gaps().len() {
                    assert!(
                        (back.gaps()[k] - d.gaps()[k]).abs() < 1e-8,
                        "{kind:?} parameter {p}: gap {k}"
                    );
                }
                for k in 0..d.masses().len() {
                    assert!(
                        (back.masses()[k] - d.masses()[k]).abs() < 1e-8,
                        "{kind:?} parameter {p}: mass {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn evolve_then_reconstruct_translates_one_peakon() {
        let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        let ch = chart(&d, ChartKind::C, 0.0).unwrap();
        let h1 = HamiltonianSpec::h1(ChartKind::C, 0.0);
        for &t in &[0.5, 1.0, 3.0] {
            let moved = evolve(&ch, &h1, t).unwrap();
            let d_t = from_chart(&moved).unwrap();
            let s_t = to_peakons(&d_t, t).unwrap();
            assert!(
                (s_t.positions()[0] - t).abs() < 1e-9,
                "translation flow at t = {t}"
            );
            assert!((s_t.momenta()[0] - 1.0).abs() < 1e-9);
        }
    }
}
