//! Delay and loss scans of the lossy interferometer, visibility metrics and
//! synthetic coincidence counts.

mod counts;
mod scan;
mod visibility;

pub use counts::{counts_csv, synthesize_counts, CountsModel};
pub use scan::{default_tau_grid, linspace, run_scan, Observable, ScanConfig, ScanResult};
pub use visibility::{crossing_loss, visibility, VisibilityMetric};
