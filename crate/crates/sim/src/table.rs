//! Result table, CSV and gnuplot output.
//!
//! CSV columns are fixed: `case,N,beta,mode,mean_rate_bps_hz,std_err,trials,
//! asymptote_rate,degenerate_trials`. Floats use C's `%.10g`; a missing
//! asymptote is an empty field. Output is UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const HEADER: [&str; 9] = [
    "case",
    "N",
    "beta",
    "mode",
    "mean_rate_bps_hz",
    "std_err",
    "trials",
    "asymptote_rate",
    "degenerate_trials",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub case: String,
    pub n: usize,
    pub beta: String,
    pub mode: String,
    pub mean_rate: f64,
    pub std_err: f64,
    pub trials: usize,
    pub asymptote_rate: Option<f64>,
    pub degenerate_trials: usize,
}

impl Row {
    fn record(&self) -> [String; 9] {
        [
            self.case.clone(),
            self.n.to_string(),
            self.beta.clone(),
            self.mode.clone(),
            format_g10(self.mean_rate),
            format_g10(self.std_err),
            self.trials.to_string(),
            self.asymptote_rate.map(format_g10).unwrap_or_default(),
            self.degenerate_trials.to_string(),
        ]
    }

    /// Copy with every float rounded to the precision written to CSV.
    pub fn rounded(&self) -> Row {
        let r = |x: f64| parse_float(&format_g10(x)).expect("formatted float parses");
        Row {
            mean_rate: r(self.mean_rate),
            std_err: r(self.std_err),
            asymptote_rate: self.asymptote_rate.map(r),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<Row>,
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(HEADER)?;
        for row in &self.rows {
            w.write_record(row.record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf)?)
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        if header != HEADER {
            bail!("unexpected CSV header {header:?}");
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |j: usize| rec.get(j).unwrap_or("");
            let line = i + 2;
            let int = |j: usize| -> Result<usize> {
                field(j).parse().with_context(|| format!("line {line}: bad integer in column {}", HEADER[j]))
            };
            let float = |j: usize| -> Result<f64> {
                parse_float(field(j)).with_context(|| format!("line {line}: bad number in column {}", HEADER[j]))
            };
            rows.push(Row {
                case: field(0).to_owned(),
                n: int(1)?,
                beta: field(2).to_owned(),
                mode: field(3).to_owned(),
                mean_rate: float(4)?,
                std_err: float(5)?,
                trials: int(6)?,
                asymptote_rate: if field(7).is_empty() { None } else { Some(float(7)?) },
                degenerate_trials: int(8)?,
            });
        }
        Ok(Self { rows })
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        Self::read_csv(text.as_bytes())
    }

    /// Writes the CSV to `path`.
    pub fn emit_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        self.write_csv(std::io::BufWriter::new(file))
            .with_context(|| format!("writing {}", path.display()))
    }

    /// Gnuplot data: one block per `(case, beta, mode)` curve with columns
    /// `N mean std_err asymptote`, blocks separated by two blank lines.
    pub fn to_dat_string(&self) -> String {
        let mut keys: Vec<(&str, &str, &str)> = Vec::new();
        for r in &self.rows {
            let key = (r.case.as_str(), r.beta.as_str(), r.mode.as_str());
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        let mut out = String::new();
        for (i, (case, beta, mode)) in keys.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# case={case} beta={beta} mode={mode}");
            let _ = writeln!(out, "# N mean_rate_bps_hz std_err asymptote_rate");
            for r in self.rows.iter().filter(|r| (r.case.as_str(), r.beta.as_str(), r.mode.as_str()) == (*case, *beta, *mode)) {
                let asym = r.asymptote_rate.map(format_g10).unwrap_or_else(|| "NaN".into());
                let _ = writeln!(out, "{} {} {} {}", r.n, format_g10(r.mean_rate), format_g10(r.std_err), asym);
            }
        }
        out
    }

    pub fn emit_dat(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_dat_string()).with_context(|| format!("writing {}", path.display()))
    }
}

fn parse_float(s: &str) -> Result<f64> {
    match s {
        "nan" | "-nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => Ok(s.parse()?),
    }
}

/// C `printf("%.10g", x)`.
pub fn format_g10(x: f64) -> String {
    format_g(x, 10)
}

/// C `printf("%.{precision}g", x)`.
pub fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // the exponent after rounding to p significant digits decides the style
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
