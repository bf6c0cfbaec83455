//! Deterministic file emitters: timeline CSV, minima JSON, spectrum JSON,
//! snapshot CSVs and the run manifest.
//!
//! Data files carry numbers rounded to 12 significant digits and printed in
//! their shortest round-trip form, so identical runs produce identical bytes.
//! The spectrum dump is the exception: it keeps full precision so it can be
//! read back exactly.

use crate::basis::{BouncerBasis, SpectrumRow};
use crate::dynamics::GridState;
use crate::error::Result;
use crate::revival::{timeline_columns, RevivalTimeline};
use serde_json::{json, Value};
use std::io::Write;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal that round-trips the 12-digit rounding of `x`.
pub fn format_number(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn rounded(x: f64) -> Value {
    let r = round12(x);
    if r.is_finite() {
        json!(r)
    } else {
        Value::Null
    }
}

pub fn timeline_header(timeline: &RevivalTimeline) -> String {
    timeline_columns(&timeline.alphas)
        .iter()
        .map(|c| c.name(&timeline.alphas))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_timeline_csv<W: Write>(timeline: &RevivalTimeline, mut w: W) -> Result<()> {
    let columns = timeline_columns(&timeline.alphas);
    writeln!(w, "{}", timeline_header(timeline))?;
    for s in &timeline.samples {
        let line = columns
            .iter()
            .map(|c| format_number(c.value(s)))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// `{"t_rev": .., "t_cl": .., "diagnostics": {name: [{t, value, fraction}]}}`
pub fn minima_json(timeline: &RevivalTimeline) -> Value {
    let mut diagnostics = serde_json::Map::new();
    for d in &timeline.minima {
        let entries: Vec<Value> = d
            .minima
            .iter()
            .map(|m| {
                json!({
                    "t": rounded(m.t),
                    "value": rounded(m.value),
                    "fraction": m.fraction.map(|f| f.to_string()),
                })
            })
            .collect();
        diagnostics.insert(d.diagnostic.clone(), Value::Array(entries));
    }
    json!({
        "t_rev": rounded(timeline.t_rev),
        "t_rev_fd": rounded(timeline.t_rev_fd),
        "t_cl": rounded(timeline.t_cl),
        "diagnostics": Value::Object(diagnostics),
    })
}

pub fn write_json<W: Write>(value: &Value, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_spectrum_json<W: Write>(basis: &BouncerBasis, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &basis.spectrum_rows())?;
    writeln!(w)?;
    Ok(())
}

pub fn read_spectrum_json(text: &str) -> Result<Vec<SpectrumRow>> {
    Ok(serde_json::from_str(text)?)
}

/// Columns `z,re_psi,im_psi,rho`.
pub fn write_position_csv<W: Write>(state: &GridState, mut w: W) -> Result<()> {
    writeln!(w, "z,re_psi,im_psi,rho")?;
    for (j, a) in state.position_amplitudes().iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            format_number(state.grid().point(j)),
            format_number(a.re),
            format_number(a.im),
            format_number(a.norm_sqr())
        )?;
    }
    Ok(())
}

/// Columns `p,re_phi,im_phi,gamma`.
pub fn write_momentum_csv<W: Write>(state: &GridState, mut w: W) -> Result<()> {
    writeln!(w, "p,re_phi,im_phi,gamma")?;
    for (k, a) in state.momentum_amplitudes().iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            format_number(state.momentum_point(k)),
            format_number(a.re),
            format_number(a.im),
            format_number(a.norm_sqr())
        )?;
    }
    Ok(())
}
