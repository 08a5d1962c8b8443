use serde::{Deserialize, Serialize};

use crate::error::{QgaaError, Result};

/// Step decay: the rate is multiplied by `factor` every `period` iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleConfig {
    pub factor: f64,
    pub period: usize,
}

impl ScheduleConfig {
    pub fn new(factor: f64, period: usize) -> Result<Self> {
        let s = Self { factor, period };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.factor > 0.0 && self.factor <= 1.0) || self.period == 0 {
            return Err(QgaaError::Config(format!(
                "schedule needs 0 < factor ≤ 1 and period ≥ 1, got {} / {}",
                self.factor, self.period
            )));
        }
        Ok(())
    }
}

/// `base_lr · factor^⌊iteration / period⌋`
pub fn schedule_lr(cfg: &ScheduleConfig, iteration: usize, base_lr: f64) -> f64 {
    base_lr * cfg.factor.powi((iteration / cfg.period) as i32)
}

/// Rate at `iteration` under an optional schedule.
pub fn scheduled(cfg: Option<&ScheduleConfig>, iteration: usize, base_lr: f64) -> f64 {
    cfg.map_or(base_lr, |c| schedule_lr(c, iteration, base_lr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decays() {
        let c = ScheduleConfig::new(0.75, 100).unwrap();
        assert_eq!(schedule_lr(&c, 0, 0.1), 0.1);
        assert_eq!(schedule_lr(&c, 99, 0.1), 0.1);
        assert!((schedule_lr(&c, 100, 0.1) - 0.075).abs() < 1e-15);
        let d = ScheduleConfig::new(0.75, 250).unwrap();
        assert!((schedule_lr(&d, 500, 1.0) - 0.5625).abs() < 1e-15);
        assert!(ScheduleConfig::new(1.5, 10).is_err());
        assert!(ScheduleConfig::new(0.5, 0).is_err());
    }
}
