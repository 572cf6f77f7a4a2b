use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{ExperimentConfig, ExperimentError, ExperimentRecord, ExperimentRun, Mode};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 21] = [
    "trial",
    "seed",
    "n",
    "p",
    "r",
    "x0",
    "r_prime",
    "mu",
    "predicted",
    "v1_size",
    "v1_edges",
    "sat_lower",
    "sat_upper",
    "sat_exact",
    "alpha0",
    "alpha_m",
    "xi",
    "in_window",
    "certificate",
    "status",
    "elapsed_ms",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub plot: PathBuf,
}

/// Writes the records as RFC 4180 CSV with a header row.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| ExperimentError::Io {
        path: "csv stream".into(),
        source,
    })?;
    Ok(())
}

/// A gnuplot script that reads the CSV from the directory it sits in.
pub fn plot_script(config: &ExperimentConfig, run: &ExperimentRun) -> String {
    let csv = &config.csv;
    let mut s = String::new();
    s.push_str("# gnuplot script; run from the directory holding the CSV\n");
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str("set style fill solid 0.5\n");
    s.push_str("set boxwidth 0.8\n");
    s.push_str(&format!(
        "set title \"{} n={} p={} r={}\"\n",
        mode_name(config.mode),
        config.n,
        config.p,
        config.r
    ));
    let first = run.records.first();
    let predicted: Vec<String> = first
        .map(|r| {
            r.predicted
                .split(';')
                .filter(|v| !v.is_empty())
                .map(str::to_owned)
                .collect()
        })
        .unwrap_or_default();
    match config.mode {
        Mode::ConcentrationExact | Mode::ConcentrationWindow => {
            for (i, v) in predicted.iter().enumerate() {
                s.push_str(&format!(
                    "set arrow {} from {v}, graph 0 to {v}, graph 1 nohead dt 2 lc rgb \"red\"\n",
                    i + 1
                ));
            }
            s.push_str("set xlabel \"edges\"\nset ylabel \"trials\"\n");
            let exact = if config.mode == Mode::ConcentrationExact {
                format!(", \\\n     '{csv}' using (column(\"sat_exact\")):(1) smooth frequency with boxes title \"sat exact\"")
            } else {
                String::new()
            };
            s.push_str(&format!(
                "plot '{csv}' using (column(\"sat_upper\")):(1) smooth frequency with boxes title \"built upper\", \\\n     '{csv}' using (column(\"sat_lower\")):(1) smooth frequency with impulses lw 3 title \"certified lower\"{exact}\n"
            ));
        }
        Mode::Alpha => {
            if let Some((lo, hi)) = run.summary.window {
                s.push_str(&format!(
                    "set arrow 1 from {lo}, graph 0 to {lo}, graph 1 nohead dt 2 lc rgb \"red\"\n"
                ));
                s.push_str(&format!(
                    "set arrow 2 from {hi}, graph 0 to {hi}, graph 1 nohead dt 2 lc rgb \"red\"\n"
                ));
            }
            s.push_str("set xlabel \"alpha0\"\nset ylabel \"trials\"\n");
            s.push_str(&format!(
                "plot '{csv}' using (column(\"alpha0\")):(1) smooth frequency with boxes title \"independence number\"\n"
            ));
        }
        Mode::PhiValidate => {
            if let Some(phi) = &run.summary.phi {
                s.push_str(&format!(
                    "set arrow 1 from {}, graph 0 to {}, graph 1 nohead dt 2 lc rgb \"red\"\n",
                    phi.phi, phi.phi
                ));
            }
            s.push_str("set xlabel \"xi\"\nset ylabel \"trials\"\n");
            s.push_str(&format!(
                "plot '{csv}' using (column(\"xi\")):(1) smooth frequency with boxes title \"xi\"\n"
            ));
        }
        Mode::TheoryTable => {
            s.push_str("set xlabel \"n\"\nset ylabel \"predicted lower value\"\nset logscale x\n");
            s.push_str(&format!(
                "plot '{csv}' using (column(\"n\")):(real(strcol(\"predicted\"))) with points pt 7 title \"predicted\"\n"
            ));
        }
    }
    s
}

fn mode_name(mode: Mode) -> String {
    serde_json::to_value(mode)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    fs::write(path, bytes).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the CSV, the JSON summary and the plot script into `dir`,
/// creating it if needed.
pub fn emit_outputs(
    run: &ExperimentRun,
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<OutputPaths, ExperimentError> {
    if run.records.is_empty() {
        return Err(ExperimentError::Config("no records to write".into()));
    }
    fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let paths = OutputPaths {
        csv: dir.join(&config.csv),
        summary: dir.join(&config.summary),
        plot: dir.join(&config.plot),
    };
    let mut csv = Vec::new();
    write_csv(&run.records, &mut csv)?;
    write_file(&paths.csv, &csv)?;
    let mut summary = serde_json::to_string_pretty(&run.summary).expect("summary serializes");
    summary.push('\n');
    write_file(&paths.summary, summary.as_bytes())?;
    write_file(&paths.plot, plot_script(config, run).as_bytes())?;
    Ok(paths)
}
