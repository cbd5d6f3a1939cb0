//! Discrete rational transfer functions in z⁻¹.

pub mod discretize;
pub mod grid;
pub mod poly;
pub mod roots;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use discretize::{discretizers, ContinuousSecondOrder, Discretizer, Tustin, ZeroOrderHold};
pub use grid::{FrequencyGrid, Spacing};

/// Default stability margin: a pole counts as stable when |p| < 1 − ε.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Relative tolerance under which two sample times are considered equal.
const TS_RTOL: f64 = 1e-12;

/// `num(z⁻¹) / den(z⁻¹)` with coefficients in ascending powers of z⁻¹.
///
/// The denominator is always normalized to a leading coefficient of one,
/// and trailing zero coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TfRepr")]
pub struct DiscreteTransferFunction {
    num: Vec<f64>,
    den: Vec<f64>,
    ts: f64,
}

#[derive(Deserialize)]
struct TfRepr {
    num: Vec<f64>,
    den: Vec<f64>,
    ts: f64,
}

impl TryFrom<TfRepr> for DiscreteTransferFunction {
    type Error = Error;
    fn try_from(r: TfRepr) -> Result<Self> {
        Self::new(r.num, r.den, r.ts)
    }
}

impl DiscreteTransferFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>, ts: f64) -> Result<Self> {
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(Error::InvalidTransferFunction(format!(
                "sample time must be positive and finite, got {ts}"
            )));
        }
        if den.is_empty() {
            return Err(Error::InvalidTransferFunction("empty denominator".into()));
        }
        if num.iter().chain(den.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidTransferFunction(
                "non-finite coefficient".into(),
            ));
        }
        let a0 = den[0];
        if a0 == 0.0 {
            return Err(Error::InvalidTransferFunction(
                "leading denominator coefficient must be nonzero".into(),
            ));
        }
        let mut num = if num.is_empty() { vec![0.0] } else { num };
        let mut den = den;
        num.iter_mut().for_each(|c| *c /= a0);
        den.iter_mut().for_each(|c| *c /= a0);
        poly::trim(&mut num);
        poly::trim(&mut den);
        Ok(Self { num, den, ts })
    }

    pub fn constant(k: f64, ts: f64) -> Result<Self> {
        Self::new(vec![k], vec![1.0], ts)
    }

    /// Pure delay z⁻ᵏ.
    pub fn delay(steps: usize, ts: f64) -> Result<Self> {
        let mut num = vec![0.0; steps + 1];
        num[steps] = 1.0;
        Self::new(num, vec![1.0], ts)
    }

    /// Discrete accumulator `ts / (1 − z⁻¹)`.
    pub fn integrator(ts: f64) -> Result<Self> {
        Self::new(vec![ts], vec![1.0, -1.0], ts)
    }

    /// Backward difference `(1 − z⁻¹) / ts`.
    pub fn difference(ts: f64) -> Result<Self> {
        Self::new(vec![1.0 / ts, -1.0 / ts], vec![1.0], ts)
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn ts(&self) -> f64 {
        self.ts
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.ts
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0.0)
    }

    /// Strictly proper in the sampled sense: no direct feedthrough.
    pub fn is_strictly_proper(&self) -> bool {
        self.num[0] == 0.0
    }

    /// Evaluates at an arbitrary point given as w = z⁻¹.
    pub fn eval_z_inv(&self, w: Complex64) -> Complex64 {
        poly::eval(&self.num, w) / poly::eval(&self.den, w)
    }

    /// Frequency response at `omega` rad/s, i.e. the value at z = e^{iωTs}.
    ///
    /// Negative frequencies are accepted and give the complex conjugate of
    /// the positive-frequency value.
    pub fn eval_freq(&self, omega: f64) -> Result<Complex64> {
        let w = Complex64::from_polar(1.0, -omega * self.ts);
        let d = poly::eval(&self.den, w);
        // zero up to the rounding error of evaluating the polynomial
        let scale: f64 = self.den.iter().map(|a| a.abs()).sum();
        if d.norm() <= 64.0 * f64::EPSILON * scale {
            return Err(Error::PoleOnUnitCircle { omega });
        }
        Ok(poly::eval(&self.num, w) / d)
    }

    /// Value at z = 1.
    pub fn dc_gain(&self) -> Result<f64> {
        self.eval_freq(0.0).map(|v| v.re)
    }

    /// Order used for the z-domain polynomials: max(deg num, deg den).
    fn order(&self) -> usize {
        poly::degree(&self.num).max(poly::degree(&self.den))
    }

    fn z_polynomial(coeffs: &[f64], order: usize) -> Vec<f64> {
        let mut desc: Vec<f64> = coeffs.to_vec();
        desc.resize(order + 1, 0.0);
        desc
    }

    /// Roots of the denominator in z. Delays in the numerator that exceed
    /// the denominator degree contribute poles at the origin.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let desc = Self::z_polynomial(&self.den, self.order());
        roots::roots_descending(&desc)
    }

    /// Finite zeros in z.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let desc = Self::z_polynomial(&self.num, self.order());
        roots::roots_descending(&desc)
    }

    pub fn is_stable(&self) -> Result<bool> {
        self.is_stable_with_margin(STABILITY_MARGIN)
    }

    pub fn is_stable_with_margin(&self, margin: f64) -> Result<bool> {
        Ok(self.poles()?.iter().all(|p| p.norm() < 1.0 - margin))
    }

    /// Largest pole modulus.
    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self.poles()?.iter().map(|p| p.norm()).fold(0.0, f64::max))
    }

    fn check_ts(&self, other: &Self) -> Result<()> {
        let scale = self.ts.abs().max(other.ts.abs());
        if (self.ts - other.ts).abs() > TS_RTOL * scale {
            return Err(Error::SampleTimeMismatch {
                left: self.ts,
                right: other.ts,
            });
        }
        Ok(())
    }

    pub fn series(&self, other: &Self) -> Result<Self> {
        self.check_ts(other)?;
        Self::new(
            poly::mul(&self.num, &other.num),
            poly::mul(&self.den, &other.den),
            self.ts,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ts(other)?;
        let num = poly::add(
            &poly::mul(&self.num, &other.den),
            &poly::mul(&other.num, &self.den),
        );
        Self::new(num, poly::mul(&self.den, &other.den), self.ts)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: {
                let mut n = poly::scale(&self.num, k);
                poly::trim(&mut n);
                n
            },
            den: self.den.clone(),
            ts: self.ts,
        }
    }

    /// Negative feedback: `forward / (1 + forward·back)`.
    pub fn feedback(&self, back: &Self) -> Result<Self> {
        self.check_ts(back)?;
        let num = poly::mul(&self.num, &back.den);
        let den = poly::add(
            &poly::mul(&self.den, &back.den),
            &poly::mul(&self.num, &back.num),
        );
        if den[0] == 0.0 {
            return Err(Error::AlgebraicLoop(
                "1 + F·B vanishes at z⁻¹ = 0".into(),
            ));
        }
        Self::new(num, den, self.ts)
    }

    /// Cancels pole/zero pairs closer than `tol` and rebuilds the rational
    /// function from the remaining roots. Nothing is cancelled implicitly
    /// elsewhere in the crate.
    pub fn minreal(&self, tol: f64) -> Result<Self> {
        if self.is_zero() {
            return Self::new(vec![0.0], vec![1.0], self.ts);
        }
        let mut poles = self.poles()?;
        let mut zeros = self.zeros()?;
        let mut i = 0;
        while i < zeros.len() {
            let hit = poles
                .iter()
                .enumerate()
                .filter(|(_, p)| (**p - zeros[i]).norm() < tol)
                .min_by(|a, b| {
                    (*a.1 - zeros[i])
                        .norm()
                        .partial_cmp(&(*b.1 - zeros[i]).norm())
                        .unwrap()
                })
                .map(|(j, _)| j);
            match hit {
                Some(j) => {
                    poles.swap_remove(j);
                    zeros.swap_remove(i);
                }
                None => i += 1,
            }
        }
        let delay = self.num.iter().position(|&c| c != 0.0).unwrap_or(0);
        let lead = self.num[delay];
        let mut num = vec![0.0; delay];
        num.extend(poly::scale(&poly::from_reciprocal_roots(&zeros), lead));
        let den = poly::from_reciprocal_roots(&poles);
        Self::new(num, den, self.ts)
    }

    /// Runs the difference equation over `input` from rest.
    pub fn filter(&self, input: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; input.len()];
        for k in 0..input.len() {
            let mut acc = 0.0;
            for (i, &b) in self.num.iter().enumerate() {
                if i > k {
                    break;
                }
                acc += b * input[k - i];
            }
            for (j, &a) in self.den.iter().enumerate().skip(1) {
                if j > k {
                    break;
                }
                acc -= a * y[k - j];
            }
            y[k] = acc;
        }
        y
    }

    pub fn impulse_response(&self, len: usize) -> Vec<f64> {
        let mut u = vec![0.0; len];
        if len > 0 {
            u[0] = 1.0;
        }
        self.filter(&u)
    }

    pub fn step_response(&self, len: usize) -> Vec<f64> {
        self.filter(&vec![1.0; len])
    }
}

impl fmt::Display for DiscreteTransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(p: &[f64]) -> String {
            let terms: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| match i {
                    0 => format!("{c}"),
                    1 => format!("{c}·z⁻¹"),
                    _ => format!("{c}·z⁻{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
        write!(
            f,
            "({}) / ({}), Ts = {} s",
            side(&self.num),
            side(&self.den),
            self.ts
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tf(num: &[f64], den: &[f64], ts: f64) -> DiscreteTransferFunction {
        DiscreteTransferFunction::new(num.to_vec(), den.to_vec(), ts).unwrap()
    }

    #[test]
    fn identity_evaluates_to_one() {
        let one = tf(&[1.0], &[1.0], 0.1);
        for w in [0.0, 1.0, 10.0, PI / 0.1] {
            assert_eq!(one.eval_freq(w).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn unit_delay_at_nyquist() {
        let d = DiscreteTransferFunction::delay(1, 0.5).unwrap();
        let v = d.eval_freq(PI / 0.5).unwrap();
        assert_relative_eq!(v.re, -1.0, epsilon = 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn vehicle_dc_value() {
        let g = tf(
            &[0.0, 0.01262, -0.01236],
            &[1.0, -2.957, 2.915, -0.9581],
            0.05,
        );
        // 0.00026 / -0.0001
        assert_relative_eq!(g.dc_gain().unwrap(), -2.6, max_relative = 1e-9);
    }

    #[test]
    fn pole_on_unit_circle_is_reported() {
        let integ = DiscreteTransferFunction::integrator(0.1).unwrap();
        assert!(matches!(
            integ.eval_freq(0.0),
            Err(Error::PoleOnUnitCircle { .. })
        ));
    }

    #[test]
    fn normalizes_leading_denominator() {
        let g = tf(&[2.0], &[2.0, -1.0], 1.0);
        assert_eq!(g.den(), &[1.0, -0.5]);
        assert_eq!(g.num(), &[1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DiscreteTransferFunction::new(vec![1.0], vec![0.0, 1.0], 1.0).is_err());
        assert!(DiscreteTransferFunction::new(vec![1.0], vec![], 1.0).is_err());
        assert!(DiscreteTransferFunction::new(vec![1.0], vec![1.0], 0.0).is_err());
        assert!(DiscreteTransferFunction::new(vec![f64::NAN], vec![1.0], 1.0).is_err());
    }

    #[test]
    fn first_order_poles_and_stability() {
        let g = tf(&[1.0], &[1.0, -0.5], 1.0);
        let p = g.poles().unwrap();
        assert_eq!(p.len(), 1);
        assert_relative_eq!(p[0].re, 0.5, epsilon = 1e-14);
        assert!(g.is_stable().unwrap());
        assert!(!tf(&[1.0], &[1.0, -2.0], 1.0).is_stable().unwrap());
    }

    #[test]
    fn factored_poles() {
        let g = tf(&[1.0], &[1.0, -0.75, 0.125], 1.0);
        let mut p: Vec<f64> = g.poles().unwrap().iter().map(|c| c.re).collect();
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(p[0], 0.25, epsilon = 1e-12);
        assert_relative_eq!(p[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn delay_adds_origin_poles() {
        let d = DiscreteTransferFunction::delay(3, 1.0).unwrap();
        let p = d.poles().unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|c| c.norm() == 0.0));
        assert!(d.is_stable().unwrap());
    }

    #[test]
    fn series_with_identity() {
        let one = tf(&[1.0], &[1.0], 0.05);
        let g = tf(&[0.0, 0.3], &[1.0, -0.7], 0.05);
        assert_eq!(one.series(&g).unwrap(), g);
    }

    #[test]
    fn constant_feedback() {
        let k = tf(&[4.0], &[1.0], 1.0);
        let one = tf(&[1.0], &[1.0], 1.0);
        let cl = k.feedback(&one).unwrap();
        assert_relative_eq!(cl.dc_gain().unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn sample_time_mismatch() {
        let a = tf(&[1.0], &[1.0], 0.1);
        let b = tf(&[1.0], &[1.0], 0.2);
        assert!(matches!(a.series(&b), Err(Error::SampleTimeMismatch { .. })));
        assert!(a.add(&b).is_err());
        assert!(a.feedback(&b).is_err());
    }

    #[test]
    fn feedback_keeps_common_factors() {
        // (1 - 0.5z⁻¹)/(1 - 0.5z⁻¹) stays second order after feedback
        let g = tf(&[1.0, -0.5], &[1.0, -0.5], 1.0);
        let h = tf(&[0.0, 1.0], &[1.0], 1.0);
        let cl = g.feedback(&h).unwrap();
        assert_eq!(cl.den().len(), 3);
        let reduced = cl.minreal(1e-8).unwrap();
        assert_eq!(reduced.den().len(), 2);
        for w in [0.1, 1.0, 2.0] {
            let a = cl.eval_freq(w).unwrap();
            let b = reduced.eval_freq(w).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn filter_matches_impulse_of_first_order() {
        let g = tf(&[0.0, 1.0], &[1.0, -0.5], 1.0);
        let h = g.impulse_response(5);
        assert_eq!(h, vec![0.0, 1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn json_roundtrip_shape() {
        let g = tf(&[0.0, 0.01262, -0.01236], &[1.0, -2.957, 2.915, -0.9581], 0.05);
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.starts_with("{\"num\":[0.0,0.01262,-0.01236],\"den\":[1.0,"));
        let back: DiscreteTransferFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"num":[1.0],"den":[0.0],"ts":0.1}"#;
        assert!(serde_json::from_str::<DiscreteTransferFunction>(bad).is_err());
    }
}
