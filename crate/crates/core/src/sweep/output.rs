use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::gaussian::CoherenceSample;
use crate::param_map::HamiltonianParams;
use crate::sweep::config::RunConfig;
use crate::sweep::run::{CompareReport, CompareRow};

pub const CSV_HEADER: &str = "tau,r_tau,mean_n,n_tau,s_tau,g2";
pub const CSV_COMPARE_SUFFIX: &str = ",g2_oracle,abs_err";

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn metadata_lines(config: &RunConfig, params: &HamiltonianParams) -> Vec<String> {
    let s = &config.state;
    vec![
        format!("# g2sweep mode={}", config.mode.as_str()),
        format!(
            "# state nbar={} r={} theta={} alpha={} t_gen={}",
            num(s.nbar()),
            num(s.xi.r()),
            num(s.xi.theta()),
            s.alpha,
            num(config.t_gen)
        ),
        format!("# couplings b={} c={}", params.b, params.c),
        format!(
            "# grid tau_max={} steps={} oracle_dim={}",
            num(config.tau_max),
            config.steps,
            config.oracle_dim
        ),
    ]
}

fn sample_fields(s: &CoherenceSample) -> String {
    [s.tau, s.r_tau, s.mean_n, s.n_tau, s.s_tau, s.g2]
        .iter()
        .map(|&x| num(x))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_csv<W: Write>(
    out: &mut W,
    config: &RunConfig,
    params: &HamiltonianParams,
    rows: &[CoherenceSample],
) -> Result<()> {
    for line in metadata_lines(config, params) {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", sample_fields(row))?;
    }
    Ok(())
}

pub fn write_compare_csv<W: Write>(
    out: &mut W,
    config: &RunConfig,
    params: &HamiltonianParams,
    rows: &[CompareRow],
) -> Result<()> {
    for line in metadata_lines(config, params) {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{CSV_HEADER}{CSV_COMPARE_SUFFIX}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            sample_fields(&row.sample),
            num(row.g2_oracle),
            num(row.abs_err)
        )?;
    }
    Ok(())
}

fn metadata_json(config: &RunConfig, params: &HamiltonianParams) -> Value {
    json!({
        "mode": config.mode.as_str(),
        "config": config,
        "couplings": params,
    })
}

fn sample_json(s: &CoherenceSample) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tau".into(), json!(s.tau));
    m.insert("r_tau".into(), json!(s.r_tau));
    m.insert("mean_n".into(), json!(s.mean_n));
    m.insert("n_tau".into(), json!(s.n_tau));
    m.insert("s_tau".into(), json!(s.s_tau));
    m.insert("g2".into(), json!(s.g2));
    m
}

pub fn write_json<W: Write>(
    out: &mut W,
    config: &RunConfig,
    params: &HamiltonianParams,
    rows: &[CoherenceSample],
) -> Result<()> {
    let doc = json!({
        "metadata": metadata_json(config, params),
        "rows": rows.iter().map(sample_json).collect::<Vec<_>>(),
    });
    write_value(out, &doc)
}

pub fn write_compare_json<W: Write>(
    out: &mut W,
    config: &RunConfig,
    params: &HamiltonianParams,
    rows: &[CompareRow],
    report: &CompareReport,
) -> Result<()> {
    let mut meta = metadata_json(config, params);
    meta["compare"] = json!(report);
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut m = sample_json(&r.sample);
            m.insert("g2_oracle".into(), json!(r.g2_oracle));
            m.insert("abs_err".into(), json!(r.abs_err));
            Value::Object(m)
        })
        .collect();
    write_value(out, &json!({ "metadata": meta, "rows": rows }))
}

fn write_value<W: Write>(out: &mut W, doc: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)
        .map_err(|e| crate::error::Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}
