use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::tf::DiscreteTransferFunction;

/// Difference-equation realization of a strictly proper plant.
///
/// Each sample first reads the output y_k (which only depends on past
/// inputs), then receives the input u_k.
#[derive(Debug, Clone)]
pub struct PlantState {
    b: Vec<f64>,
    a: Vec<f64>,
    u_hist: VecDeque<f64>,
    y_hist: VecDeque<f64>,
}

impl PlantState {
    pub fn new(tf: &DiscreteTransferFunction) -> Result<Self> {
        if !tf.is_strictly_proper() {
            return Err(Error::AlgebraicLoop(
                "plant has direct feedthrough (b0 != 0); simulation needs a strictly proper plant"
                    .into(),
            ));
        }
        let b = tf.num().to_vec();
        let a = tf.den().to_vec();
        Ok(Self {
            u_hist: VecDeque::from(vec![0.0; b.len()]),
            y_hist: VecDeque::from(vec![0.0; a.len()]),
            b,
            a,
        })
    }

    /// Computes and stores y_k.
    pub fn output(&mut self) -> f64 {
        // u_hist[0] = u_{k-1}, y_hist[0] = y_{k-1}
        let mut y = 0.0;
        for (i, &bi) in self.b.iter().enumerate().skip(1) {
            y += bi * self.u_hist[i - 1];
        }
        for (j, &aj) in self.a.iter().enumerate().skip(1) {
            y -= aj * self.y_hist[j - 1];
        }
        self.y_hist.push_front(y);
        self.y_hist.truncate(self.a.len());
        y
    }

    /// Stores u_k.
    pub fn input(&mut self, u: f64) {
        self.u_hist.push_front(u);
        self.u_hist.truncate(self.b.len());
    }
}
