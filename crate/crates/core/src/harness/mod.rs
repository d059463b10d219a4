//! Seeded experiments, the exhaustive small-case oracle, and report output.

mod montecarlo;
mod oracle;
mod report;

pub use montecarlo::{
    exhaustive_mean_fix, large_cusps_probability, parse_word, run_montecarlo, sample_records,
    topology_records, MCReportRow, MonteCarloConfig, ParsedWord, ProbabilityEstimate, SampleRecord,
    MAX_N,
};
pub use oracle::{run_oracle_n1, OracleCheck, OracleReport};
pub use report::{
    emit_report, render_csv, render_json, render_records_csv, render_records_json, write_text,
    ReportFormat, CSV_HEADER,
};
