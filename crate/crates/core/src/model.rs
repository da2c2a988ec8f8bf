//! Closed-form mathematics of the Goodwin system
//!
//! ```text
//! u'/u = -(alpha + gamma) + rho * v
//! v'/v = (1 - u) / sigma - (alpha + beta)
//! ```
//!
//! where `u` is the wage share and `v` the employment rate. The real wage
//! follows the linear Phillips curve `w'/w = -gamma + rho * v`.

use core::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};

/// Structural constants of the model, all per year except `sigma` (years).
///
/// `gamma` and `rho` may be negative; only `sigma` is constrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodwinParameters {
    /// Productivity growth rate.
    pub alpha: f64,
    /// Labour-force growth rate.
    pub beta: f64,
    /// Capital-to-output ratio.
    pub sigma: f64,
    /// Phillips-curve intercept magnitude.
    pub gamma: f64,
    /// Phillips-curve slope.
    pub rho: f64,
}

impl GoodwinParameters {
    pub const fn new(alpha: f64, beta: f64, sigma: f64, gamma: f64, rho: f64) -> Self {
        Self {
            alpha,
            beta,
            sigma,
            gamma,
            rho,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("alpha", self.alpha)?;
        ensure_finite("beta", self.beta)?;
        ensure_finite("sigma", self.sigma)?;
        ensure_finite("gamma", self.gamma)?;
        ensure_finite("rho", self.rho)?;
        if self.sigma <= 0.0 {
            return Err(Error::Parameter {
                name: "sigma",
                reason: "must be strictly positive",
            });
        }
        Ok(())
    }

    /// Same growth and capital constants, different Phillips curve.
    pub const fn with_phillips(self, gamma: f64, rho: f64) -> Self {
        Self { gamma, rho, ..self }
    }

    /// `alpha + gamma`, the wage-share decay rate at zero employment.
    #[inline]
    pub fn wage_pressure(&self) -> f64 {
        self.alpha + self.gamma
    }

    /// `1/sigma - (alpha + beta)`, the employment growth rate at zero wage share.
    #[inline]
    pub fn accumulation_margin(&self) -> f64 {
        1.0 / self.sigma - (self.alpha + self.beta)
    }

    /// True when both equilibrium coordinates are finite and lie in the
    /// economically meaningful ranges `0 < u* < 1` and `v* > 0`.
    pub fn admits_interior_equilibrium(&self) -> bool {
        if self.rho == 0.0 {
            return false;
        }
        let u_star = 1.0 - (self.alpha + self.beta) * self.sigma;
        let v_star = (self.alpha + self.gamma) / self.rho;
        u_star > 0.0 && u_star < 1.0 && v_star > 0.0
    }
}

/// A point `(u, v)` in phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    /// Wage share.
    pub u: f64,
    /// Employment rate.
    pub v: f64,
}

impl State {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn in_positive_quadrant(&self) -> bool {
        self.u > 0.0 && self.v > 0.0
    }

    pub fn distance(&self, other: &State) -> f64 {
        libm::hypot(self.u - other.u, self.v - other.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub u_star: f64,
    pub v_star: f64,
    /// See [`GoodwinParameters::admits_interior_equilibrium`].
    pub interior: bool,
}

impl EquilibriumPoint {
    pub const fn state(&self) -> State {
        State::new(self.u_star, self.v_star)
    }
}

/// Unchecked right-hand side; the integrator's inner loop.
#[inline]
pub(crate) fn rhs(s: State, p: &GoodwinParameters) -> (f64, f64) {
    let du = s.u * (-(p.alpha + p.gamma) + p.rho * s.v);
    let dv = s.v * ((1.0 - s.u) / p.sigma - (p.alpha + p.beta));
    (du, dv)
}

/// Time derivative `(du/dt, dv/dt)` at `s`.
pub fn vector_field(s: State, p: &GoodwinParameters) -> Result<(f64, f64)> {
    p.validate()?;
    if !s.is_finite() {
        return Err(Error::Domain("state must be finite"));
    }
    Ok(rhs(s, p))
}

/// Centre of the closed orbits. Out-of-range points are returned, not
/// rejected; inspect [`EquilibriumPoint::interior`].
pub fn equilibrium(p: &GoodwinParameters) -> Result<EquilibriumPoint> {
    p.validate()?;
    if p.rho == 0.0 {
        return Err(Error::EquilibriumUndefined);
    }
    Ok(EquilibriumPoint {
        u_star: 1.0 - (p.alpha + p.beta) * p.sigma,
        v_star: (p.alpha + p.gamma) / p.rho,
        interior: p.admits_interior_equilibrium(),
    })
}

/// Linearised cycle length in years, `2 pi / sqrt((alpha+gamma)(1/sigma - alpha - beta))`.
pub fn period(p: &GoodwinParameters) -> Result<f64> {
    p.validate()?;
    let radicand = p.wage_pressure() * p.accumulation_margin();
    if !(radicand > 0.0) {
        return Err(Error::PeriodUndefined { radicand });
    }
    Ok(2.0 * PI / libm::sqrt(radicand))
}

/// Lotka-Volterra first integral
///
/// `H(u, v) = u/sigma - (1/sigma - alpha - beta) ln u + rho v - (alpha + gamma) ln v`
///
/// Along any solution `dH/dt = (u/sigma - c)(rho v - a) + (rho v - a)(c - u/sigma) = 0`
/// with `a = alpha + gamma`, `c = 1/sigma - alpha - beta`.
pub fn first_integral(s: State, p: &GoodwinParameters) -> Result<f64> {
    p.validate()?;
    if !s.is_finite() {
        return Err(Error::Domain("state must be finite"));
    }
    if !s.in_positive_quadrant() {
        return Err(Error::Domain("first integral needs u > 0 and v > 0"));
    }
    Ok(hamiltonian(s, p))
}

#[inline]
pub(crate) fn hamiltonian(s: State, p: &GoodwinParameters) -> f64 {
    s.u / p.sigma - p.accumulation_margin() * libm::log(s.u) + p.rho * s.v
        - p.wage_pressure() * libm::log(s.v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const AUSTRALIA: GoodwinParameters =
        GoodwinParameters::new(0.0166, 0.0226, 2.4994, 0.6236, 0.6710);
    const UK: GoodwinParameters = GoodwinParameters::new(0.0221, 0.003690, 2.5694, 0.1854, 0.219);

    fn round_to(x: f64, decimals: i32) -> f64 {
        let f = 10f64.powi(decimals);
        (x * f).round() / f
    }

    #[test]
    fn australia_vector_field_matches_direct_arithmetic() {
        let s = State::new(0.90, 0.95);
        let (du, dv) = vector_field(s, &AUSTRALIA).unwrap();
        let du_expected = 0.90 * (-0.6402 + 0.6710 * 0.95);
        let dv_expected = 0.95 * ((1.0 - 0.90) / 2.4994 - 0.0392);
        assert!((du - du_expected).abs() < 1e-15);
        assert!((dv - dv_expected).abs() < 1e-15);
    }

    #[test]
    fn zero_slope_decouples_wage_share_from_employment() {
        let p = AUSTRALIA.with_phillips(0.6236, 0.0);
        for v in [0.1, 0.5, 0.95, 3.0] {
            let (du, _) = vector_field(State::new(0.8, v), &p).unwrap();
            assert_eq!(du, -0.8 * (0.0166 + 0.6236));
        }
    }

    #[test]
    fn vector_field_rejects_bad_inputs() {
        let bad_sigma = GoodwinParameters {
            sigma: 0.0,
            ..AUSTRALIA
        };
        assert!(matches!(
            vector_field(State::new(0.9, 0.9), &bad_sigma),
            Err(Error::Parameter { name: "sigma", .. })
        ));
        assert!(matches!(
            vector_field(State::new(f64::NAN, 0.9), &AUSTRALIA),
            Err(Error::Domain(_))
        ));
        let bad_alpha = GoodwinParameters {
            alpha: f64::INFINITY,
            ..AUSTRALIA
        };
        assert!(vector_field(State::new(0.9, 0.9), &bad_alpha).is_err());
    }

    #[test]
    fn australia_equilibrium_rounds_to_printed_cells() {
        let eq = equilibrium(&AUSTRALIA).unwrap();
        assert_eq!(round_to(eq.u_star, 2), 0.90);
        assert_eq!(round_to(eq.v_star, 2), 0.95);
        assert!(eq.interior);
    }

    #[test]
    fn us_recomputed_harvie_coefficients_give_above_full_employment() {
        // Harvie-scale US with the recomputed negative intercept.
        let p = GoodwinParameters::new(0.0111, 0.0206, 1.7751, -8.42, -7.92);
        let eq = equilibrium(&p).unwrap();
        assert_eq!(round_to(eq.v_star, 2), 1.06);
        assert!(eq.interior);
    }

    #[test]
    fn germany_recomputed_rho_gives_096() {
        let p = GoodwinParameters::new(0.0329, 0.004142, 2.4941, 0.8549, 0.9244);
        assert_eq!(round_to(equilibrium(&p).unwrap().v_star, 2), 0.96);
    }

    #[test]
    fn zero_growth_gives_full_wage_share() {
        for sigma in [0.5, 2.0, 7.0] {
            let p = GoodwinParameters::new(0.02, -0.02, sigma, 0.5, 0.6);
            assert_eq!(equilibrium(&p).unwrap().u_star, 1.0);
        }
    }

    #[test]
    fn zero_rho_has_no_equilibrium() {
        assert_eq!(
            equilibrium(&AUSTRALIA.with_phillips(0.6, 0.0)),
            Err(Error::EquilibriumUndefined)
        );
    }

    #[test]
    fn out_of_range_equilibrium_is_returned_with_flag() {
        // Germany with Harvie's printed coefficients.
        let p = GoodwinParameters::new(0.0329, 0.004142, 2.4941, 85.49, 65.55);
        let eq = equilibrium(&p).unwrap();
        assert_eq!(round_to(eq.v_star, 2), 1.30);
        assert!(eq.interior);
        let negative = GoodwinParameters::new(0.0111, 0.0206, 1.7751, 8.42, -7.92);
        let eq = equilibrium(&negative).unwrap();
        assert!(eq.v_star < 0.0);
        assert!(!eq.interior);
    }

    #[test]
    fn periods_match_printed_cells() {
        assert!((period(&AUSTRALIA).unwrap() - 13.07).abs() <= 0.01);
        assert!((period(&UK).unwrap() - 22.88).abs() <= 0.01);
        let harvie = AUSTRALIA.with_phillips(62.36, 67.10);
        assert!((period(&harvie).unwrap() - 1.32).abs() <= 0.01);
    }

    #[test]
    fn us_corrected_period_is_undefined() {
        let us = GoodwinParameters::new(0.0111, 0.0206, 1.7751, -0.0842, -0.0792);
        assert!(matches!(period(&us), Err(Error::PeriodUndefined { radicand }) if radicand < 0.0));
    }

    #[test]
    fn first_integral_is_deterministic_and_domain_checked() {
        let s = State::new(0.7, 0.93);
        let h = first_integral(s, &AUSTRALIA).unwrap();
        assert_eq!(h - first_integral(s, &AUSTRALIA).unwrap(), 0.0);
        assert!(first_integral(State::new(0.0, 0.9), &AUSTRALIA).is_err());
        assert!(first_integral(State::new(0.9, -0.1), &AUSTRALIA).is_err());
    }

    #[test]
    fn first_integral_minimum_sits_at_equilibrium() {
        // Grid-search oracle over (0, 2] x (0, 2] at resolution 1e-3.
        let eq = equilibrium(&AUSTRALIA).unwrap();
        let (mut best, mut at) = (f64::INFINITY, (0usize, 0usize));
        for i in 1..=2000 {
            for j in 1..=2000 {
                let s = State::new(i as f64 * 1e-3, j as f64 * 1e-3);
                let h = hamiltonian(s, &AUSTRALIA);
                if h < best {
                    best = h;
                    at = (i, j);
                }
            }
        }
        let grid = State::new(at.0 as f64 * 1e-3, at.1 as f64 * 1e-3);
        assert!(grid.distance(&eq.state()) < 1e-3);
        let h_star = first_integral(eq.state(), &AUSTRALIA).unwrap();
        assert!(h_star <= best);
    }

    #[test]
    fn first_integral_time_derivative_vanishes() {
        // Central finite difference of H along the vector field.
        let eps = 1e-6;
        for s in [
            State::new(0.7, 0.93),
            State::new(0.95, 0.99),
            State::new(0.3, 0.5),
        ] {
            let (du, dv) = rhs(s, &AUSTRALIA);
            let fwd = State::new(s.u + eps * du, s.v + eps * dv);
            let bwd = State::new(s.u - eps * du, s.v - eps * dv);
            let d = (hamiltonian(fwd, &AUSTRALIA) - hamiltonian(bwd, &AUSTRALIA)) / (2.0 * eps);
            assert!(d.abs() < 1e-9, "dH/dt = {d}");
        }
    }

    fn params() -> impl Strategy<Value = GoodwinParameters> {
        (
            0.0..0.06f64,
            -0.01..0.03f64,
            0.5..5.0f64,
            -1.5..1.5f64,
            prop_oneof![-1.5..-0.01f64, 0.01..1.5f64],
        )
            .prop_map(|(a, b, s, g, r)| GoodwinParameters::new(a, b, s, g, r))
    }

    proptest! {
        #[test]
        fn equilibrium_is_a_fixed_point(p in params()) {
            let eq = equilibrium(&p).unwrap();
            let (du, dv) = vector_field(eq.state(), &p).unwrap();
            prop_assert!(du.abs() < 1e-12 && dv.abs() < 1e-12, "({du}, {dv})");
        }

        #[test]
        fn factor_of_100_biases_employment_downward(
            alpha in 1e-4..0.06f64, gamma in 1e-3..2.0f64, rho in 1e-3..2.0f64,
        ) {
            let p = GoodwinParameters::new(alpha, 0.01, 2.5, gamma, rho);
            let correct = equilibrium(&p).unwrap().v_star;
            let inflated = equilibrium(&p.with_phillips(100.0 * gamma, 100.0 * rho)).unwrap().v_star;
            prop_assert!(inflated < correct);
        }

        #[test]
        fn wage_share_ignores_phillips_curve(p in params(), g in -2.0..2.0f64, r in 0.01..2.0f64) {
            let a = equilibrium(&p).unwrap().u_star;
            let b = equilibrium(&p.with_phillips(g, r)).unwrap().u_star;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn period_depends_on_gamma_only_through_alpha_plus_gamma(
            p in params(), shift in -0.02..0.02f64, r in 0.01..2.0f64,
        ) {
            prop_assume!(period(&p).is_ok());
            let q = GoodwinParameters {
                alpha: p.alpha + shift,
                gamma: p.gamma - shift,
                beta: p.beta - shift,
                rho: r,
                ..p
            };
            let (t0, t1) = (period(&p).unwrap(), period(&q).unwrap());
            prop_assert!((t0 - t1).abs() <= 1e-9 * t0);
        }
    }
}
