//! Optimizers: derivative-free trust region and Adam with step-decay schedules.

pub mod adam;
pub mod cobyla;
pub mod schedule;

pub use adam::{adam_step, AdamState};
pub use cobyla::{cobyla_minimize, try_cobyla_minimize, CobylaConfig, CobylaResult, CobylaStatus};
pub use schedule::{schedule_lr, scheduled, ScheduleConfig};
