//! CSV reports. Optional metrics are written as empty cells.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::batch::{BatchSummary, METRIC_NAMES};
use super::run::RunMetrics;

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn metric_cells(m: &RunMetrics) -> [String; 7] {
    [
        m.correctly_identified_attackers.to_string(),
        m.filtered_legal_clients.to_string(),
        m.dropped_packets.to_string(),
        m.max_buffer_level.to_string(),
        m.max_buffer_slot.to_string(),
        opt(m.restore_time_after_tstar),
        opt(m.detection_time_after_tstar),
    ]
}

/// Writes one row per run. `key` names an optional leading column (`seed`,
/// `w_s`) whose value accompanies each row.
pub fn write_metrics<W: Write>(
    out: W,
    key: Option<&str>,
    rows: &[(Option<u64>, &RunMetrics)],
) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = key.into_iter().collect();
    header.extend(METRIC_NAMES);
    w.write_record(&header)?;
    for (k, m) in rows {
        let mut rec: Vec<String> = Vec::with_capacity(8);
        if key.is_some() {
            rec.push(opt(*k));
        }
        rec.extend(metric_cells(m));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_metrics(path: &Path, key: Option<&str>, rows: &[(Option<u64>, &RunMetrics)]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_metrics(file, key, rows).map_err(csv_err(path))
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> std::result::Result<Option<T>, String> {
    if s.is_empty() {
        Ok(None)
    } else {
        s.parse().map(Some).map_err(|_| format!("bad number {s:?}"))
    }
}

/// Reads a file produced by [`write_metrics`]. Returns the key column (if
/// any) alongside each row.
pub fn read_metrics<R: Read>(input: R) -> std::result::Result<Vec<(Option<u64>, RunMetrics)>, String> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    let offset = header.len().checked_sub(METRIC_NAMES.len()).ok_or("too few columns")?;
    if offset > 1 || header.iter().skip(offset).ne(METRIC_NAMES.iter().copied()) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let key = if offset == 1 { parse_opt(&rec[0])? } else { None };
        let f = |i: usize| &rec[offset + i];
        let req = |i: usize| -> std::result::Result<u64, String> {
            parse_opt(f(i))?.ok_or_else(|| format!("missing {}", METRIC_NAMES[i]))
        };
        rows.push((
            key,
            RunMetrics {
                correctly_identified_attackers: req(0)?,
                filtered_legal_clients: req(1)?,
                dropped_packets: req(2)?,
                max_buffer_level: req(3)?,
                max_buffer_slot: req(4)?,
                restore_time_after_tstar: parse_opt(f(5))?,
                detection_time_after_tstar: parse_opt(f(6))?,
            },
        ));
    }
    Ok(rows)
}

/// One row per metric: `metric,count,min,mean,max,ci95_halfwidth`.
pub fn write_summary<W: Write>(out: W, summary: &BatchSummary) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["metric", "count", "min", "mean", "max", "ci95_halfwidth"])?;
    for m in &summary.metrics {
        w.write_record([
            m.name.to_string(),
            m.count.to_string(),
            m.min.to_string(),
            m.mean.to_string(),
            m.max.to_string(),
            m.ci95_halfwidth.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_summary(path: &Path, summary: &BatchSummary) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    write_summary(file, summary).map_err(csv_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn render(key: Option<&str>, rows: &[(Option<u64>, &RunMetrics)]) -> String {
        let mut buf = Vec::new();
        write_metrics(&mut buf, key, rows).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_batch_is_header_only() {
        let text = render(None, &[]);
        assert_eq!(text.lines().count(), 1);
        assert_eq!(text.trim_end(), METRIC_NAMES.join(","));
    }

    #[test]
    fn one_run_is_two_lines() {
        let m = RunMetrics { dropped_packets: 3, ..Default::default() };
        let text = render(Some("seed"), &[(Some(9), &m)]);
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("seed,correctly_identified_attackers"));
        assert_eq!(text.lines().nth(1).unwrap(), "9,0,0,3,0,0,,");
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = emit_metrics(Path::new("/nonexistent-dir/x.csv"), None, &[]).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }

    proptest! {
        #[test]
        fn metrics_round_trip(
            vals in proptest::collection::vec(
                (any::<u32>(), any::<u32>(), any::<u64>(), any::<u32>(), 0u64..10_000,
                 proptest::option::of(0u64..1000), proptest::option::of(-500i64..500),
                 proptest::option::of(any::<u64>())),
                0..8),
            keyed in any::<bool>(),
        ) {
            let metrics: Vec<(Option<u64>, RunMetrics)> = vals
                .into_iter()
                .map(|(a, b, c, d, e, f, g, k)| (
                    if keyed { k } else { None },
                    RunMetrics {
                        correctly_identified_attackers: a.into(),
                        filtered_legal_clients: b.into(),
                        dropped_packets: c,
                        max_buffer_level: d.into(),
                        max_buffer_slot: e,
                        restore_time_after_tstar: f,
                        detection_time_after_tstar: g,
                    },
                ))
                .collect();
            let refs: Vec<(Option<u64>, &RunMetrics)> = metrics.iter().map(|(k, m)| (*k, m)).collect();
            let key = keyed.then_some("seed");
            let back = read_metrics(render(key, &refs).as_bytes()).unwrap();
            prop_assert_eq!(back, metrics);
        }
    }
}
