//! Numerical integration of the Goodwin system with first-integral drift
//! monitoring, and cycle-period measurement on a Poincaré section.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{equilibrium, hamiltonian, rhs, GoodwinParameters, State};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_DRIFT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classical fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Dormand-Prince 5(4) with a mixed absolute/relative per-step tolerance.
    Adaptive { tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Fixed step, or the initial step for [`Method::Adaptive`] (years).
    pub step: f64,
    /// Horizon (years).
    pub t_end: f64,
    pub method: Method,
    /// Largest tolerated `|H(t) - H(0)|` before the run is aborted.
    pub drift_tolerance: f64,
}

impl IntegratorConfig {
    pub fn rk4(t_end: f64) -> Self {
        Self {
            step: DEFAULT_STEP,
            t_end,
            method: Method::Rk4,
            drift_tolerance: DEFAULT_DRIFT_TOLERANCE,
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }

    pub fn with_drift_tolerance(self, drift_tolerance: f64) -> Self {
        Self {
            drift_tolerance,
            ..self
        }
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Config("step must be positive and finite"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config("t_end must be positive and finite"));
        }
        if !(self.drift_tolerance > 0.0) {
            return Err(Error::Config("drift tolerance must be positive"));
        }
        if let Method::Adaptive { tolerance } = self.method {
            if !(tolerance > 0.0 && tolerance.is_finite()) {
                return Err(Error::Config(
                    "adaptive tolerance must be positive and finite",
                ));
            }
        }
        Ok(())
    }
}

/// Time-indexed solution with the first integral evaluated at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: GoodwinParameters,
    times: Vec<f64>,
    states: Vec<State>,
    h_values: Vec<f64>,
}

impl Trajectory {
    fn start(params: GoodwinParameters, s0: State, capacity: usize) -> Self {
        let mut traj = Self {
            params,
            times: Vec::with_capacity(capacity),
            states: Vec::with_capacity(capacity),
            h_values: Vec::with_capacity(capacity),
        };
        traj.times.push(0.0);
        traj.states.push(s0);
        traj.h_values.push(hamiltonian(s0, &params));
        traj
    }

    /// Appends a sample after checking the quadrant and drift bounds.
    fn push(&mut self, t: f64, s: State, drift_tolerance: f64) -> Result<()> {
        if !s.is_finite() {
            return Err(Error::NonFinite { time: t });
        }
        if !s.in_positive_quadrant() {
            return Err(Error::LeftQuadrant {
                time: t,
                u: s.u,
                v: s.v,
            });
        }
        let h = hamiltonian(s, &self.params);
        let drift = libm::fabs(h - self.h_values[0]);
        if !(drift <= drift_tolerance) {
            return Err(Error::DriftExceeded {
                time: t,
                drift,
                tolerance: drift_tolerance,
            });
        }
        self.times.push(t);
        self.states.push(s);
        self.h_values.push(h);
        Ok(())
    }

    pub fn params(&self) -> &GoodwinParameters {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn h_values(&self) -> &[f64] {
        &self.h_values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial(&self) -> State {
        self.states[0]
    }

    pub fn max_drift(&self) -> f64 {
        let h0 = self.h_values[0];
        self.h_values
            .iter()
            .fold(0.0, |m, h| f64::max(m, libm::fabs(h - h0)))
    }

    /// Linear interpolation between recorded samples; `None` outside the
    /// recorded time span.
    pub fn state_at(&self, t: f64) -> Option<State> {
        let last = *self.times.last()?;
        if !(t >= self.times[0] && t <= last) {
            return None;
        }
        let i = self.times.partition_point(|&x| x <= t);
        if i == self.times.len() {
            return self.states.last().copied();
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (a, b) = (self.states[i - 1], self.states[i]);
        let f = (t - t0) / (t1 - t0);
        Some(State::new(a.u + f * (b.u - a.u), a.v + f * (b.v - a.v)))
    }

    /// Phase-space distance between the start and the interpolated state
    /// one `period` later.
    pub fn closure_error(&self, period: f64) -> Option<f64> {
        self.state_at(self.times[0] + period)
            .map(|s| s.distance(&self.initial()))
    }
}

#[inline]
fn offset(s: State, h: f64, terms: &[(f64, (f64, f64))]) -> State {
    let (mut du, mut dv) = (0.0, 0.0);
    for &(c, (ku, kv)) in terms {
        du += c * ku;
        dv += c * kv;
    }
    State::new(s.u + h * du, s.v + h * dv)
}

pub(crate) fn rk4_step(s: State, p: &GoodwinParameters, h: f64) -> State {
    let k1 = rhs(s, p);
    let k2 = rhs(offset(s, 0.5 * h, &[(1.0, k1)]), p);
    let k3 = rhs(offset(s, 0.5 * h, &[(1.0, k2)]), p);
    let k4 = rhs(offset(s, h, &[(1.0, k3)]), p);
    offset(s, h / 6.0, &[(1.0, k1), (2.0, k2), (2.0, k3), (1.0, k4)])
}

/// One Dormand-Prince step; returns the fifth-order solution and the
/// embedded error estimate.
fn dopri_step(s: State, p: &GoodwinParameters, h: f64) -> (State, (f64, f64)) {
    let k1 = rhs(s, p);
    let k2 = rhs(offset(s, h, &[(1.0 / 5.0, k1)]), p);
    let k3 = rhs(offset(s, h, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]), p);
    let k4 = rhs(
        offset(
            s,
            h,
            &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)],
        ),
        p,
    );
    let k5 = rhs(
        offset(
            s,
            h,
            &[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, k2),
                (64448.0 / 6561.0, k3),
                (-212.0 / 729.0, k4),
            ],
        ),
        p,
    );
    let k6 = rhs(
        offset(
            s,
            h,
            &[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, k2),
                (46732.0 / 5247.0, k3),
                (49.0 / 176.0, k4),
                (-5103.0 / 18656.0, k5),
            ],
        ),
        p,
    );
    let next = offset(
        s,
        h,
        &[
            (35.0 / 384.0, k1),
            (500.0 / 1113.0, k3),
            (125.0 / 192.0, k4),
            (-2187.0 / 6784.0, k5),
            (11.0 / 84.0, k6),
        ],
    );
    let k7 = rhs(next, p);
    let e = [
        71.0 / 57600.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [k1, k3, k4, k5, k6, k7];
    let (mut eu, mut ev) = (0.0, 0.0);
    for (c, k) in e.iter().zip(ks.iter()) {
        eu += c * k.0;
        ev += c * k.1;
    }
    (next, (h * eu, h * ev))
}

fn check_inputs(p: &GoodwinParameters, s0: State, cfg: &IntegratorConfig) -> Result<()> {
    p.validate()?;
    cfg.validate()?;
    if !s0.is_finite() {
        return Err(Error::NonFinite { time: 0.0 });
    }
    if !s0.in_positive_quadrant() {
        return Err(Error::Domain(
            "initial state must lie in the open positive quadrant",
        ));
    }
    Ok(())
}

/// Integrates from `s0` over `[0, cfg.t_end]`, recording every accepted step.
///
/// Aborts when the first integral drifts further than `cfg.drift_tolerance`
/// from its initial value, which signals a step that is too coarse.
pub fn simulate(p: &GoodwinParameters, s0: State, cfg: &IntegratorConfig) -> Result<Trajectory> {
    check_inputs(p, s0, cfg)?;
    match cfg.method {
        Method::Rk4 => simulate_rk4(p, s0, cfg),
        Method::Adaptive { tolerance } => simulate_adaptive(p, s0, cfg, tolerance),
    }
}

fn simulate_rk4(p: &GoodwinParameters, s0: State, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let full = libm::floor(cfg.t_end / cfg.step) as usize;
    let remainder = cfg.t_end - full as f64 * cfg.step;
    let partial = remainder > 1e-12 * cfg.t_end;
    let mut traj = Trajectory::start(*p, s0, full + 2);
    let mut s = s0;
    for i in 1..=full {
        s = rk4_step(s, p, cfg.step);
        let t = if !partial && i == full {
            cfg.t_end
        } else {
            i as f64 * cfg.step
        };
        traj.push(t, s, cfg.drift_tolerance)?;
    }
    if partial {
        s = rk4_step(s, p, remainder);
        traj.push(cfg.t_end, s, cfg.drift_tolerance)?;
    }
    Ok(traj)
}

fn simulate_adaptive(
    p: &GoodwinParameters,
    s0: State,
    cfg: &IntegratorConfig,
    tolerance: f64,
) -> Result<Trajectory> {
    let mut traj = Trajectory::start(*p, s0, 1024);
    let (mut t, mut s, mut h) = (0.0, s0, cfg.step);
    let min_step = 1e-14 * cfg.t_end;
    while t < cfg.t_end {
        let last = t + h >= cfg.t_end;
        let step = if last { cfg.t_end - t } else { h };
        let (next, (eu, ev)) = dopri_step(s, p, step);
        let scale_u = tolerance * (1.0 + f64::max(libm::fabs(s.u), libm::fabs(next.u)));
        let scale_v = tolerance * (1.0 + f64::max(libm::fabs(s.v), libm::fabs(next.v)));
        let err = f64::max(libm::fabs(eu) / scale_u, libm::fabs(ev) / scale_v);
        if !err.is_finite() {
            return Err(Error::NonFinite { time: t + step });
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            t = if last { cfg.t_end } else { t + step };
            s = next;
            traj.push(t, s, cfg.drift_tolerance)?;
            if !last {
                h = step * factor;
            }
        } else {
            h = step * factor;
            if h < min_step {
                return Err(Error::StepUnderflow { time: t });
            }
        }
    }
    Ok(traj)
}

/// Integrates with fixed RK4 substeps no longer than `max_step` and records
/// only the `count` grid points `0, interval, 2 interval, ...`.
pub fn simulate_sampled(
    p: &GoodwinParameters,
    s0: State,
    interval: f64,
    count: usize,
    max_step: f64,
    drift_tolerance: f64,
) -> Result<Trajectory> {
    let horizon = interval * count.saturating_sub(1) as f64;
    let cfg = IntegratorConfig {
        step: max_step,
        t_end: horizon.max(interval),
        method: Method::Rk4,
        drift_tolerance,
    };
    check_inputs(p, s0, &cfg)?;
    if !(interval > 0.0 && interval.is_finite()) {
        return Err(Error::Config(
            "sampling interval must be positive and finite",
        ));
    }
    let substeps = libm::ceil(interval / max_step).max(1.0) as usize;
    let h = interval / substeps as f64;
    let mut traj = Trajectory::start(*p, s0, count);
    let mut s = s0;
    for i in 1..count {
        for _ in 0..substeps {
            s = rk4_step(s, p, h);
        }
        traj.push(i as f64 * interval, s, drift_tolerance)?;
    }
    Ok(traj)
}

/// Mean revolution time from successive same-direction crossings of the
/// ray `{u = u*, v > v*}`, with crossing times linearly interpolated.
pub fn measure_period(traj: &Trajectory) -> Result<f64> {
    let eq = equilibrium(&traj.params)?;
    let mut first: Option<(bool, f64)> = None;
    let mut last_time = 0.0;
    let mut crossings = 0usize;
    for i in 1..traj.len() {
        let d0 = traj.states[i - 1].u - eq.u_star;
        let d1 = traj.states[i].u - eq.u_star;
        let upward = d0 < 0.0 && d1 >= 0.0;
        let downward = d0 >= 0.0 && d1 < 0.0;
        if !(upward || downward) {
            continue;
        }
        let f = -d0 / (d1 - d0);
        let (a, b) = (traj.states[i - 1], traj.states[i]);
        if a.v + f * (b.v - a.v) <= eq.v_star {
            continue;
        }
        let t = traj.times[i - 1] + f * (traj.times[i] - traj.times[i - 1]);
        match first {
            None => {
                first = Some((upward, t));
                last_time = t;
                crossings = 1;
            }
            Some((direction, _)) if direction == upward => {
                last_time = t;
                crossings += 1;
            }
            Some(_) => {}
        }
    }
    match first {
        Some((_, t0)) if crossings >= 2 => Ok((last_time - t0) / (crossings - 1) as f64),
        _ => Err(Error::InsufficientData(
            "fewer than two crossings of the Poincaré section",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::period;

    const AUSTRALIA: GoodwinParameters =
        GoodwinParameters::new(0.0166, 0.0226, 2.4994, 0.6236, 0.6710);
    const MEANS: State = State::new(0.6867, 0.949);

    #[test]
    fn equilibrium_start_stays_put() {
        let eq = equilibrium(&AUSTRALIA).unwrap().state();
        for method in [Method::Rk4, Method::Adaptive { tolerance: 1e-10 }] {
            let traj = simulate(
                &AUSTRALIA,
                eq,
                &IntegratorConfig::rk4(20.0).with_method(method),
            )
            .unwrap();
            for s in traj.states() {
                assert!(s.distance(&eq) < 1e-10);
            }
        }
    }

    #[test]
    fn equilibrium_trajectory_has_no_period() {
        let eq = equilibrium(&AUSTRALIA).unwrap().state();
        let traj = simulate(&AUSTRALIA, eq, &IntegratorConfig::rk4(30.0)).unwrap();
        assert!(matches!(
            measure_period(&traj),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn rk4_lands_exactly_on_horizon() {
        let traj = simulate(
            &AUSTRALIA,
            MEANS,
            &IntegratorConfig::rk4(1.0).with_step(0.3),
        )
        .unwrap();
        assert_eq!(traj.times(), &[0.0, 0.3, 0.6, 0.8999999999999999, 1.0][..]);
        assert!(traj.times().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(traj.states().len(), traj.h_values().len());
    }

    #[test]
    fn orbit_from_means_closes() {
        let traj = simulate(&AUSTRALIA, MEANS, &IntegratorConfig::rk4(30.0)).unwrap();
        let t = measure_period(&traj).unwrap();
        assert!(t > period(&AUSTRALIA).unwrap());
        assert!(traj.closure_error(t).unwrap() < 1e-4);
        // Nearest recorded sample after the first half-revolution.
        let nearest = traj
            .times()
            .iter()
            .zip(traj.states())
            .filter(|(&tt, _)| tt > 0.5 * t)
            .map(|(_, s)| s.distance(&MEANS))
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-4);
    }

    #[test]
    fn small_amplitude_period_matches_linearisation() {
        let eq = equilibrium(&AUSTRALIA).unwrap();
        let s0 = State::new(eq.u_star + 1e-3, eq.v_star);
        let traj = simulate(&AUSTRALIA, s0, &IntegratorConfig::rk4(3.0 * 13.07)).unwrap();
        let measured = measure_period(&traj).unwrap();
        assert!((measured - 13.07).abs() < 0.05, "{measured}");
    }

    #[test]
    fn halving_the_step_cuts_drift_by_about_sixteen() {
        let coarse = simulate(
            &AUSTRALIA,
            MEANS,
            &IntegratorConfig::rk4(14.0)
                .with_step(0.2)
                .with_drift_tolerance(1.0),
        )
        .unwrap()
        .max_drift();
        let fine = simulate(
            &AUSTRALIA,
            MEANS,
            &IntegratorConfig::rk4(14.0)
                .with_step(0.1)
                .with_drift_tolerance(1.0),
        )
        .unwrap()
        .max_drift();
        let ratio = coarse / fine;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn coarse_step_trips_the_drift_monitor() {
        let cfg = IntegratorConfig::rk4(30.0)
            .with_step(0.5)
            .with_drift_tolerance(1e-9);
        assert!(matches!(
            simulate(&AUSTRALIA, MEANS, &cfg),
            Err(Error::DriftExceeded { .. })
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for cfg in [
            IntegratorConfig::rk4(10.0).with_step(0.0),
            IntegratorConfig::rk4(0.0),
            IntegratorConfig::rk4(10.0).with_drift_tolerance(0.0),
            IntegratorConfig::rk4(10.0).with_method(Method::Adaptive { tolerance: -1.0 }),
        ] {
            assert!(matches!(
                simulate(&AUSTRALIA, MEANS, &cfg),
                Err(Error::Config(_))
            ));
        }
        assert!(matches!(
            simulate(
                &AUSTRALIA,
                State::new(-0.1, 0.9),
                &IntegratorConfig::rk4(1.0)
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn huge_step_leaves_the_quadrant() {
        let cfg = IntegratorConfig::rk4(50.0)
            .with_step(10.0)
            .with_drift_tolerance(f64::INFINITY);
        let err = simulate(&AUSTRALIA, State::new(0.2, 0.2), &cfg).unwrap_err();
        assert!(
            matches!(err, Error::LeftQuadrant { .. } | Error::NonFinite { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn adaptive_run_conserves_the_first_integral() {
        let cfg = IntegratorConfig::rk4(30.0)
            .with_step(0.1)
            .with_method(Method::Adaptive { tolerance: 1e-10 });
        let traj = simulate(&AUSTRALIA, MEANS, &cfg).unwrap();
        assert!(traj.max_drift() < 1e-6);
        assert_eq!(*traj.times().last().unwrap(), 30.0);
        assert!(traj.len() < 30_000);
        let t = measure_period(&traj).unwrap();
        let reference =
            measure_period(&simulate(&AUSTRALIA, MEANS, &IntegratorConfig::rk4(30.0)).unwrap())
                .unwrap();
        assert!((t - reference).abs() < 1e-3);
    }

    #[test]
    fn sampled_grid_agrees_with_dense_run() {
        let sampled = simulate_sampled(&AUSTRALIA, MEANS, 1.0, 11, 1e-3, 1e-6).unwrap();
        let dense = simulate(&AUSTRALIA, MEANS, &IntegratorConfig::rk4(10.0)).unwrap();
        assert_eq!(sampled.len(), 11);
        for (t, s) in sampled.times().iter().zip(sampled.states()) {
            assert!(dense.state_at(*t).unwrap().distance(s) < 1e-9);
        }
    }

    #[test]
    fn state_at_is_bounded_to_the_recorded_span() {
        let traj = simulate(&AUSTRALIA, MEANS, &IntegratorConfig::rk4(1.0)).unwrap();
        assert!(traj.state_at(-0.1).is_none());
        assert!(traj.state_at(1.1).is_none());
        assert_eq!(traj.state_at(0.0), Some(MEANS));
    }
}
