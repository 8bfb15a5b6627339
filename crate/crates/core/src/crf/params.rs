use crate::error::{Error, Result};

/// Neighborhood mask of the message window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowShape {
    /// `k x k` square: `|drow|, |dcol| <= (k - 1) / 2`.
    #[default]
    Square,
    /// Diamond: `|drow| + |dcol| <= (k - 1) / 2`.
    Diamond,
}

/// Coordinate units used when measuring pixel distance inside a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionScale {
    /// (row, col) divided by `max(H - 1, W - 1, 1)`.
    Normalized,
    /// Raw pixel offsets.
    Pixels,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrfParams {
    pub w_app: f64,
    pub w_smo: f64,
    pub theta_alpha: f64,
    pub theta_beta: f64,
    pub theta_gamma: f64,
    pub filter_size: usize,
    pub iterations: usize,
    pub window: WindowShape,
    pub app_positions: PositionScale,
    pub smo_positions: PositionScale,
}

impl Default for CrfParams {
    fn default() -> Self {
        Self {
            w_app: 10.0,
            w_smo: 3.0,
            theta_alpha: 0.1,
            theta_beta: 80.0,
            theta_gamma: 3.0,
            filter_size: 7,
            iterations: 5,
            window: WindowShape::Square,
            app_positions: PositionScale::Normalized,
            smo_positions: PositionScale::Pixels,
        }
    }
}

impl CrfParams {
    pub fn with_filter_size(mut self, k: usize) -> Self {
        self.filter_size = k;
        self
    }

    pub fn radius(&self) -> usize {
        (self.filter_size - 1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Usage(msg.to_string()));
        if !(self.w_app >= 0.0 && self.w_smo >= 0.0) {
            return bad("kernel weights must be >= 0");
        }
        if !(self.theta_alpha > 0.0 && self.theta_beta > 0.0 && self.theta_gamma > 0.0) {
            return bad("kernel bandwidths must be > 0");
        }
        if self.filter_size.is_multiple_of(2) {
            return bad("filter_size must be odd");
        }
        if self.iterations == 0 {
            return bad("iterations must be >= 1");
        }
        Ok(())
    }
}
