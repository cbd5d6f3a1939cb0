use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order n of the ultra-local model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn as_usize(self) -> usize {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = Error;
    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidParameter(format!(
                "ultra-local model order must be 1 or 2, got {n}"
            ))),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.as_usize() as u8
    }
}

/// Design parameters of an iPD controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpdConfig {
    pub n: Order,
    pub alpha: f64,
    pub kp: f64,
    pub kd: f64,
    pub c: f64,
    pub ts: f64,
}

impl IpdConfig {
    pub fn new(n: Order, alpha: f64, kp: f64, kd: f64, c: f64, ts: f64) -> Result<Self> {
        let cfg = Self {
            n,
            alpha,
            kp,
            kd,
            c,
            ts,
        };
        cfg.validate()?;
        for w in cfg.warnings() {
            log::warn!("{w}");
        }
        Ok(cfg)
    }

    pub fn first_order(alpha: f64, kp: f64, kd: f64, c: f64, ts: f64) -> Result<Self> {
        Self::new(Order::First, alpha, kp, kd, c, ts)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.alpha, self.kp, self.kd, self.c, self.ts]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidParameter("non-finite iPD parameter".into()));
        }
        if self.alpha == 0.0 {
            return Err(Error::InvalidParameter("alpha must be nonzero".into()));
        }
        if self.c == 0.0 {
            return Err(Error::InvalidParameter("filter parameter C must be nonzero".into()));
        }
        if self.ts <= 0.0 {
            return Err(Error::InvalidParameter("sample time must be positive".into()));
        }
        Ok(())
    }

    /// Pole of the derivative filter, (C − 1)/C.
    pub fn filter_pole(&self) -> f64 {
        (self.c - 1.0) / self.c
    }

    /// Non-fatal issues; an improper derivative filter is reported but
    /// accepted.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.filter_pole().abs() >= 1.0 {
            out.push(format!(
                "derivative filter pole (C-1)/C = {} is not inside the unit circle (C = {})",
                self.filter_pole(),
                self.c
            ));
        }
        out
    }

    pub fn with_gains(&self, kp: f64, kd: f64) -> Self {
        Self { kp, kd, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let cfg = IpdConfig::first_order(170.06, 48.98, 64.92, 4.0, 0.01).unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            s,
            r#"{"n":1,"alpha":170.06,"kp":48.98,"kd":64.92,"c":4.0,"ts":0.01}"#
        );
        let back: IpdConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_order() {
        let s = r#"{"n":3,"alpha":1.0,"kp":1.0,"kd":1.0,"c":1.0,"ts":0.1}"#;
        assert!(serde_json::from_str::<IpdConfig>(s).is_err());
    }

    #[test]
    fn invariants() {
        assert!(IpdConfig::first_order(0.0, 1.0, 1.0, 1.0, 0.1).is_err());
        assert!(IpdConfig::first_order(1.0, 1.0, 1.0, 0.0, 0.1).is_err());
        assert!(IpdConfig::first_order(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn improper_filter_warns_but_is_accepted() {
        let cfg = IpdConfig::first_order(1.0, 1.0, 1.0, 0.25, 0.1).unwrap();
        assert_eq!(cfg.filter_pole(), -3.0);
        assert_eq!(cfg.warnings().len(), 1);
        let ok = IpdConfig::first_order(1.0, 1.0, 1.0, 4.0, 0.1).unwrap();
        assert!(ok.warnings().is_empty());
    }
}
