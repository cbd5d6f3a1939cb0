use std::fmt::Write;

/// Time-indexed record of a closed-loop run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimTrace {
    pub ts: f64,
    pub t: Vec<f64>,
    pub y_ref: Vec<f64>,
    pub y: Vec<f64>,
    pub e: Vec<f64>,
    pub u: Vec<f64>,
    pub inner: Option<InnerTrace>,
    /// Set when the run was aborted by the divergence guard.
    pub diverged: bool,
}

/// Inner-loop signals of a cascade run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InnerTrace {
    pub y_ref: Vec<f64>,
    pub y: Vec<f64>,
    pub e: Vec<f64>,
}

impl SimTrace {
    pub fn new(ts: f64) -> Self {
        Self {
            ts,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub(crate) fn push(&mut self, y_ref: f64, y: f64, u: f64) {
        let k = self.t.len();
        self.t.push(k as f64 * self.ts);
        self.y_ref.push(y_ref);
        self.y.push(y);
        self.e.push(y_ref - y);
        self.u.push(u);
    }

    pub(crate) fn push_inner(&mut self, y_ref: f64, y: f64) {
        let inner = self.inner.get_or_insert_with(InnerTrace::default);
        inner.y_ref.push(y_ref);
        inner.y.push(y);
        inner.e.push(y_ref - y);
    }

    /// Largest |e| over the run.
    pub fn max_abs_error(&self) -> f64 {
        self.e.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV with columns t,y_ref,y,e,u (plus inner_y_ref,inner_y,inner_e for
    /// cascade runs).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,y_ref,y,e,u");
        if self.inner.is_some() {
            s.push_str(",inner_y_ref,inner_y,inner_e");
        }
        s.push('\n');
        for k in 0..self.len() {
            write!(
                s,
                "{},{},{},{},{}",
                self.t[k], self.y_ref[k], self.y[k], self.e[k], self.u[k]
            )
            .unwrap();
            if let Some(inner) = &self.inner {
                write!(s, ",{},{},{}", inner.y_ref[k], inner.y[k], inner.e[k]).unwrap();
            }
            s.push('\n');
        }
        s
    }
}
