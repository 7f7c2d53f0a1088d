//! Delimiter-separated trace dump.

use std::io::{self, Write};

use crate::format::fmt_real;
use crate::record::SimulationTrace;

pub const TRACE_DUMP_HEADER: &str = "k,gen_time,transmit_done,compute_done,x,y,z,w,s";

/// Writes one line per record with 17 significant digits. Undefined `y`/`z`
/// (the first record) are written as empty fields.
pub fn write_trace_dump<W: Write>(trace: &SimulationTrace, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_DUMP_HEADER}")?;
    let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
    for r in &trace.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.k(),
            fmt_real(r.gen_time()),
            fmt_real(r.transmit_done()),
            fmt_real(r.compute_done()),
            fmt_real(r.x()),
            opt(r.y()),
            opt(r.z()),
            fmt_real(r.w()),
            fmt_real(r.s()),
        )?;
    }
    Ok(())
}
