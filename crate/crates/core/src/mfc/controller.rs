use super::config::IpdConfig;

/// One first-order section of the filtered derivative
/// D(z) = (1/Ts)·(1 − z⁻¹)/(C + (1 − C)·z⁻¹).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct DerivativeSection {
    x_prev: f64,
    d_prev: f64,
}

impl DerivativeSection {
    fn step(&mut self, x: f64, c: f64, ts: f64) -> f64 {
        let d = ((x - self.x_prev) / ts - (1.0 - c) * self.d_prev) / c;
        self.x_prev = x;
        self.d_prev = d;
        d
    }
}

/// Cascade of identical derivative sections, i.e. Dⁿ(z).
#[derive(Debug, Clone, PartialEq)]
struct DerivativeChain {
    sections: Vec<DerivativeSection>,
}

impl DerivativeChain {
    fn new(order: usize) -> Self {
        Self {
            sections: vec![DerivativeSection::default(); order],
        }
    }

    fn step(&mut self, x: f64, c: f64, ts: f64) -> f64 {
        self.sections
            .iter_mut()
            .fold(x, |signal, s| s.step(signal, c, ts))
    }

    fn reset(&mut self) {
        self.sections.iter_mut().for_each(|s| *s = DerivativeSection::default());
    }
}

/// Runtime memory of an iPD controller.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    f_hat: f64,
    u_prev: f64,
    y_chain: DerivativeChain,
    y_ref_chain: DerivativeChain,
    e_chain: DerivativeChain,
}

impl ControllerState {
    pub fn new(cfg: &IpdConfig) -> Self {
        let n = cfg.n.as_usize();
        Self {
            f_hat: 0.0,
            u_prev: 0.0,
            y_chain: DerivativeChain::new(n),
            y_ref_chain: DerivativeChain::new(n),
            e_chain: DerivativeChain::new(1),
        }
    }

    pub fn reset(&mut self) {
        self.f_hat = 0.0;
        self.u_prev = 0.0;
        self.y_chain.reset();
        self.y_ref_chain.reset();
        self.e_chain.reset();
    }

    pub fn f_hat(&self) -> f64 {
        self.f_hat
    }

    pub fn u_prev(&self) -> f64 {
        self.u_prev
    }

    /// One sample of the control law
    /// u = (−F̂ + y_r⁽ⁿ⁾ + Kp·e + Kd·ė)/α with F̂ = ŷ⁽ⁿ⁾ − α·u(t_{k−1}).
    ///
    /// The reference derivative is only fed forward when `servo` is set;
    /// its filter chain is advanced either way. The returned action is
    /// stored as the previous action; call [`Self::record_applied`] if the
    /// plant actually received something else (saturation).
    pub fn step(&mut self, cfg: &IpdConfig, y_meas: f64, y_ref: f64, servo: bool) -> f64 {
        let (c, ts) = (cfg.c, cfg.ts);
        let y_deriv = self.y_chain.step(y_meas, c, ts);
        let ref_deriv = self.y_ref_chain.step(y_ref, c, ts);
        let e = y_ref - y_meas;
        let e_dot = self.e_chain.step(e, c, ts);

        self.f_hat = y_deriv - cfg.alpha * self.u_prev;
        let feedforward = if servo { ref_deriv } else { 0.0 };
        let u = (-self.f_hat + feedforward + cfg.kp * e + cfg.kd * e_dot) / cfg.alpha;
        self.u_prev = u;
        u
    }

    /// Overrides the stored previous action with the one really applied.
    pub fn record_applied(&mut self, u: f64) {
        self.u_prev = u;
    }
}

/// Configuration and state bundled together.
#[derive(Debug, Clone, PartialEq)]
pub struct IpdController {
    pub cfg: IpdConfig,
    state: ControllerState,
}

impl IpdController {
    pub fn new(cfg: IpdConfig) -> Self {
        Self {
            state: ControllerState::new(&cfg),
            cfg,
        }
    }

    pub fn step(&mut self, y_meas: f64, y_ref: f64, servo: bool) -> f64 {
        self.state.step(&self.cfg, y_meas, y_ref, servo)
    }

    pub fn record_applied(&mut self, u: f64) {
        self.state.record_applied(u);
    }

    pub fn state(&self) -> &ControllerState {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state.reset();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfc::Order;

    #[test]
    fn rest_stays_at_rest() {
        let cfg = IpdConfig::first_order(2.0, 1.0, 3.0, 4.0, 0.01).unwrap();
        let mut s = ControllerState::new(&cfg);
        for _ in 0..10 {
            assert_eq!(s.step(&cfg, 0.0, 0.0, true), 0.0);
        }
    }

    #[test]
    fn one_step_hand_computation() {
        let cfg = IpdConfig::first_order(2.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let mut s = ControllerState::new(&cfg);
        let u = s.step(&cfg, 0.0, 1.0, true);
        assert_eq!(u, 1.0);
        assert_eq!(s.f_hat(), 0.0);
    }

    #[test]
    fn derivative_of_constant_decays() {
        let cfg = IpdConfig::first_order(1.0, 0.0, 0.0, 4.0, 0.01).unwrap();
        let mut chain = DerivativeChain::new(1);
        let mut d = 0.0;
        for _ in 0..(200.0 * cfg.c) as usize {
            d = chain.step(3.7, cfg.c, cfg.ts);
        }
        assert!(d.abs() < 1e-9, "{d}");
    }

    #[test]
    fn second_order_chain_differentiates_twice() {
        // t² sampled: second backward difference with C = 1 is exactly 2
        let ts = 0.1;
        let mut chain = DerivativeChain::new(2);
        let mut d = 0.0;
        for k in 0..10 {
            let t = k as f64 * ts;
            d = chain.step(t * t, 1.0, ts);
        }
        assert!((d - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reset_clears_memory() {
        let cfg = IpdConfig::new(Order::Second, 5.0, 1.0, 1.0, 2.0, 0.1).unwrap();
        let fresh = ControllerState::new(&cfg);
        let mut s = fresh.clone();
        s.step(&cfg, 1.0, 2.0, true);
        assert_ne!(s, fresh);
        s.reset();
        assert_eq!(s, fresh);
    }

    #[test]
    fn record_applied_overrides_previous_action() {
        let cfg = IpdConfig::first_order(2.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let mut c = IpdController::new(cfg);
        let u = c.step(0.0, 10.0, false);
        assert_eq!(u, 5.0);
        c.record_applied(1.0);
        assert_eq!(c.state().u_prev(), 1.0);
    }
}
