//! Price ingestion and log-return computation.
//!
//! Prices arrive as CSV with a `timestamp,price` header. Timestamps are
//! opaque ordering keys: if the first data row's timestamp parses as an
//! integer the whole column is compared numerically, otherwise rows are
//! compared lexically (which orders ISO-8601 strings correctly).

use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the timestamp column is ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimestampKind {
    Integer,
    Lexical,
}

impl TimestampKind {
    fn detect(first: &str) -> Self {
        if first.parse::<i64>().is_ok() {
            TimestampKind::Integer
        } else {
            TimestampKind::Lexical
        }
    }

    fn compare(self, a: &str, b: &str) -> Option<Ordering> {
        match self {
            TimestampKind::Integer => {
                let a = a.parse::<i64>().ok()?;
                let b = b.parse::<i64>().ok()?;
                Some(a.cmp(&b))
            }
            TimestampKind::Lexical => Some(a.cmp(b)),
        }
    }
}

/// A validated price series: positive finite prices, strictly increasing
/// timestamps, at least two rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    timestamps: Vec<String>,
    prices: Vec<f64>,
    kind: TimestampKind,
}

impl PriceSeries {
    /// Builds a series from parallel vectors. Row numbers in errors are
    /// 1-based data rows plus one for the header, matching file lines.
    pub fn new(timestamps: Vec<String>, prices: Vec<f64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::InvalidArgument(format!(
                "{} timestamps but {} prices",
                timestamps.len(),
                prices.len()
            )));
        }
        if prices.len() < 2 {
            return Err(Error::TooFewPrices(prices.len()));
        }
        let kind = TimestampKind::detect(&timestamps[0]);
        for (i, (&price, ts)) in prices.iter().zip(&timestamps).enumerate() {
            let line = i as u64 + 2;
            validate_price(line, price)?;
            if i > 0 {
                check_order(kind, line, &timestamps[i - 1], ts)?;
            }
        }
        Ok(Self {
            timestamps,
            prices,
            kind,
        })
    }

    /// Integer timestamps `0..prices.len()`.
    pub fn with_index_timestamps(prices: Vec<f64>) -> Result<Self> {
        let timestamps = (0..prices.len()).map(|i| i.to_string()).collect();
        Self::new(timestamps, prices)
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn timestamp_kind(&self) -> TimestampKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Writes the series back out in the `timestamp,price` format.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["timestamp", "price"])?;
        for (ts, price) in self.timestamps.iter().zip(&self.prices) {
            out.write_record([ts.as_str(), &price.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn validate_price(line: u64, price: f64) -> Result<()> {
    if price.is_finite() && price > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPrice { line, price })
    }
}

fn check_order(kind: TimestampKind, line: u64, previous: &str, current: &str) -> Result<()> {
    match kind.compare(previous, current) {
        Some(Ordering::Less) => Ok(()),
        Some(_) => Err(Error::NonIncreasingTimestamp {
            line,
            timestamp: current.to_owned(),
            previous: previous.to_owned(),
        }),
        None => Err(Error::MalformedRow {
            line,
            message: format!("timestamp {current:?} is not an integer like the rest of the column"),
        }),
    }
}

/// Parses a `timestamp,price` CSV, preserving row order.
pub fn load_prices<R: Read>(source: R) -> Result<PriceSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader.headers().map_err(|e| malformed(&e, 1))?.clone();
    let header: Vec<&str> = headers.iter().collect();
    if header != ["timestamp", "price"] {
        return Err(Error::MalformedRow {
            line: 1,
            message: format!("expected header `timestamp,price`, got `{}`", header.join(",")),
        });
    }

    let mut timestamps: Vec<String> = Vec::new();
    let mut prices = Vec::new();
    let mut kind = None;
    let mut record = csv::StringRecord::new();
    loop {
        let next_line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(malformed(&e, next_line)),
        }
        let line = record.position().map_or(next_line, |p| p.line());
        if record.len() != 2 {
            return Err(Error::MalformedRow {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let ts = &record[0];
        if ts.is_empty() {
            return Err(Error::MalformedRow {
                line,
                message: "empty timestamp".into(),
            });
        }
        let price: f64 = record[1].parse().map_err(|_| Error::MalformedRow {
            line,
            message: format!("cannot parse price {:?}", &record[1]),
        })?;
        validate_price(line, price)?;

        let kind = *kind.get_or_insert_with(|| TimestampKind::detect(ts));
        if let Some(previous) = timestamps.last() {
            check_order(kind, line, previous, ts)?;
        }
        timestamps.push(ts.to_owned());
        prices.push(price);
    }

    if prices.len() < 2 {
        return Err(Error::TooFewPrices(prices.len()));
    }
    Ok(PriceSeries {
        timestamps,
        prices,
        kind: kind.unwrap_or(TimestampKind::Integer),
    })
}

fn malformed(e: &csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::MalformedRow {
        line,
        message: e.to_string(),
    }
}

/// Sample mean and standard deviation (n - 1 denominator). The deviation
/// of a series shorter than two is reported as 0.
pub fn sample_moments(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// A return series with cached sample mean and standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
    mean: f64,
    stdev: f64,
}

impl ReturnSeries {
    /// Wraps finite values. Empty series are allowed; most operations
    /// downstream reject them on their own terms.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        let (mean, stdev) = sample_moments(&values);
        Ok(Self { values, mean, stdev })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn stdev(&self) -> f64 {
        self.stdev
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample variance (n - 1 denominator).
    pub fn variance(&self) -> f64 {
        self.stdev * self.stdev
    }

    /// `index,return` CSV.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["index", "return"])?;
        for (i, v) in self.values.iter().enumerate() {
            out.write_record([i.to_string(), v.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Log-differences `ln p[i+1] - ln p[i]`.
pub fn compute_returns(prices: &PriceSeries) -> ReturnSeries {
    let values = prices
        .prices
        .windows(2)
        .map(|w| w[1].ln() - w[0].ln())
        .collect();
    // Prices are positive and finite, so every log-difference is finite.
    ReturnSeries::new(values).expect("log returns of valid prices are finite")
}

/// Rescales to sample mean 0 and sample standard deviation 1.
pub fn standardize(returns: &ReturnSeries) -> Result<ReturnSeries> {
    if returns.len() < 2 || returns.stdev <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let (mean, sd) = (returns.mean, returns.stdev);
    ReturnSeries::new(returns.values.iter().map(|v| (v - mean) / sd).collect())
}

/// Builds prices `start * exp(cumsum(returns))`, with `start` as the first row.
pub fn prices_from_returns(returns: &ReturnSeries, start: f64) -> Result<PriceSeries> {
    if !(start.is_finite() && start > 0.0) {
        return Err(Error::InvalidArgument(format!("start price {start} must be positive")));
    }
    let mut log_price = start.ln();
    let mut prices = Vec::with_capacity(returns.len() + 1);
    prices.push(start);
    for r in &returns.values {
        log_price += r;
        prices.push(log_price.exp());
    }
    PriceSeries::with_index_timestamps(prices)
}
