use std::path::{Path, PathBuf};

use clap::Args;

use mfc_design::sim::{compute_metrics, SimTrace};

use crate::error::{CliError, CliResult};
use crate::output::Bundle;

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Trace CSV with at least the columns t, y_ref, y, u
    #[arg(long)]
    pub trace: PathBuf,
    /// Sample time; inferred from the t column when omitted
    #[arg(long)]
    pub ts: Option<f64>,
    /// Also write the metrics JSON here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn read_trace(path: &Path, ts: Option<f64>) -> CliResult<SimTrace> {
    let err = |reason: String| CliError::Trace {
        path: path.to_path_buf(),
        reason,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| err(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| err(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| err(format!("missing column '{name}'")))
    };
    let (it, ir, iy, iu) = (col("t")?, col("y_ref")?, col("y")?, col("u")?);
    let mut trace = SimTrace::new(ts.unwrap_or(0.0));
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let field = |i: usize| -> CliResult<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("row {}: bad value in column {}", line + 2, i + 1)))
        };
        let (t, r, y, u) = (field(it)?, field(ir)?, field(iy)?, field(iu)?);
        trace.t.push(t);
        trace.y_ref.push(r);
        trace.y.push(y);
        trace.e.push(r - y);
        trace.u.push(u);
    }
    if trace.len() < 3 {
        return Err(err(format!("need at least 3 rows, found {}", trace.len())));
    }
    if ts.is_none() {
        trace.ts = trace.t[1] - trace.t[0];
    }
    if !(trace.ts > 0.0) {
        return Err(err(format!("non-positive sample time {}", trace.ts)));
    }
    Ok(trace)
}

pub fn run(args: MetricsArgs) -> CliResult<()> {
    let trace = read_trace(&args.trace, args.ts)?;
    let m = compute_metrics(&trace)?;
    let json = serde_json::to_string_pretty(&m).expect("serializable") + "\n";
    print!("{json}");
    if let Some(out) = args.out {
        let mut bundle = Bundle::new();
        bundle.add(out, json);
        bundle.commit()?;
    }
    Ok(())
}
