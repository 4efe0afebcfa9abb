//! Exact-versus-asymptotic sweeps, the four-panel 9j study and identity checks.

mod config;
mod fig4;
mod identities;
mod sweep;

pub use config::{ConfigError, FieldError, Formula, Link, SweepConfig, SweepSpec, SymbolKind};
pub use fig4::{edge_trend, fig4_suite, panel_a, panel_c, panel_d, Check, Fig4Report, PanelReport, EDGE_POINTS};
pub use identities::{verify_identities, IdentityReport};
pub use sweep::{
    error_plot_script, interior_indices, plot_script, read_csv, reference_tetrahedra, run_sweep, summarize, write_csv,
    write_csv_file, Summary, SweepOutput, SweepRow,
};
