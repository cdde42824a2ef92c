//! CSV and JSON emission for sweeps and verification reports.
//!
//! CSV reals use 17 significant digits (`%.17g` style), which round-trips
//! every `f64` exactly. JSON uses `serde_json`'s shortest round-trip form.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use werner_core::analysis::{SweepRecord, VerificationReport};

pub const CSV_HEADER: &str =
    "F,a,lambda1,lambda2,lambda3,lambda4,c_closed,c_numeric,c_extractable,c_werner,gap,dC_da,ppt_min_eig,entangled";

const VERIFY_HEADER: &str = "suite,claim,passed,worst,limit,strict,checked,worst_F,worst_a";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {destination}: {source}")]
    Write {
        destination: String,
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Formats like C's `%.17g`.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_zeros(&fixed).into()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn record_fields(r: &SweepRecord) -> [f64; 13] {
    [
        r.fidelity,
        r.a,
        r.lambda1,
        r.lambda2,
        r.lambda3,
        r.lambda4,
        r.c_closed,
        r.c_numeric,
        r.c_extractable,
        r.c_werner,
        r.gap,
        r.dc_da,
        r.ppt_min_eig,
    ]
}

pub fn write_records_csv<W: Write>(records: &[SweepRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let mut line: Vec<String> = record_fields(r).iter().map(|&x| format_real(x)).collect();
        line.push(r.entangled.to_string());
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

pub fn read_records_csv<R: BufRead>(r: R) -> Result<Vec<SweepRecord>, ReportError> {
    let mut lines = r.lines().enumerate();
    let parse_err = |line: usize, message: String| ReportError::Parse {
        line: line + 1,
        message,
    };
    match lines.next() {
        Some((_, Ok(h))) if h == CSV_HEADER => {}
        Some((i, Ok(h))) => return Err(parse_err(i, format!("unexpected header `{h}`"))),
        Some((i, Err(e))) => return Err(parse_err(i, e.to_string())),
        None => return Err(parse_err(0, "empty input".into())),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| parse_err(i, e.to_string()))?;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 14 {
            return Err(parse_err(
                i,
                format!("expected 14 fields, found {}", cols.len()),
            ));
        }
        let mut v = [0.0; 13];
        for (slot, text) in v.iter_mut().zip(&cols) {
            *slot = text
                .parse()
                .map_err(|_| parse_err(i, format!("bad number `{text}`")))?;
        }
        let entangled = cols[13]
            .parse()
            .map_err(|_| parse_err(i, format!("bad boolean `{}`", cols[13])))?;
        out.push(SweepRecord {
            fidelity: v[0],
            a: v[1],
            lambda1: v[2],
            lambda2: v[3],
            lambda3: v[4],
            lambda4: v[5],
            c_closed: v[6],
            c_numeric: v[7],
            c_extractable: v[8],
            c_werner: v[9],
            gap: v[10],
            dc_da: v[11],
            ppt_min_eig: v[12],
            entangled,
        });
    }
    Ok(out)
}

pub fn write_report_csv<W: Write>(report: &VerificationReport, mut w: W) -> io::Result<()> {
    writeln!(w, "{VERIFY_HEADER}")?;
    for c in &report.claims {
        let (f, a) = c
            .worst_at
            .map(|[f, a]| (format_real(f), format_real(a)))
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            report.suite,
            c.name,
            c.passed,
            format_real(c.worst),
            format_real(c.limit),
            c.strict,
            c.checked,
            f,
            a
        )?;
    }
    w.flush()
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

pub fn read_records_json<R: io::Read>(r: R) -> Result<Vec<SweepRecord>, ReportError> {
    serde_json::from_reader(r).map_err(|e| ReportError::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

/// Where report bytes go.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    pub fn from_option(path: Option<&Path>) -> Self {
        path.map_or(Destination::Stdout, |p| Destination::File(p.to_owned()))
    }

    fn label(&self) -> String {
        match self {
            Destination::Stdout => "standard output".into(),
            Destination::File(p) => p.display().to_string(),
        }
    }

    /// Runs `emit` against the destination, tagging failures with its name.
    pub fn write_with(
        &self,
        stdout: &mut dyn Write,
        emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
    ) -> Result<(), ReportError> {
        let result = match self {
            Destination::Stdout => emit(stdout),
            Destination::File(p) => File::create(p).and_then(|f| {
                let mut w = BufWriter::new(f);
                emit(&mut w)?;
                w.flush()
            }),
        };
        result.map_err(|source| ReportError::Write {
            destination: self.label(),
            source,
        })
    }
}

pub fn write_records(
    records: &[SweepRecord],
    format: Format,
    dest: &Destination,
    stdout: &mut dyn Write,
) -> Result<(), ReportError> {
    dest.write_with(stdout, |w| match format {
        Format::Csv => write_records_csv(records, w),
        Format::Json => write_json(records, w),
    })
}

pub fn write_report(
    report: &VerificationReport,
    format: Format,
    dest: &Destination,
    stdout: &mut dyn Write,
) -> Result<(), ReportError> {
    dest.write_with(stdout, |w| match format {
        Format::Csv => write_report_csv(report, w),
        Format::Json => write_json(report, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_formatting() {
        assert_eq!(format_real(0.6), "0.59999999999999998");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(-0.25), "-0.25");
        assert_eq!(format_real(1e-20), "9.9999999999999995e-21");
        assert_eq!(format_real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_real(123456.0), "123456");
        assert_eq!(format_real(1e17), "1e+17");
        assert_eq!(format_real(0.0001), "0.0001");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn formatting_round_trips() {
        for x in [
            0.1,
            2.0 / 3.0,
            -7.25e-13,
            1e300,
            5e-324,
            f64::MAX,
            0.991_666_083_017_816_7,
        ] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_records_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn header_has_fourteen_columns() {
        assert_eq!(CSV_HEADER.split(',').count(), 14);
    }

    #[test]
    fn write_error_names_destination() {
        let dest = Destination::File("/nonexistent-dir/x.csv".into());
        let err = write_records(&[], Format::Csv, &dest, &mut Vec::new()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
