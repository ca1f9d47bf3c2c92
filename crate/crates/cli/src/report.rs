use std::fmt::Write;

use num_bigint::BigUint;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputMode {
    Decimal,
    Digits,
    Json,
}

/// One computed residue mod `p^n`, ready for printing.
#[derive(Serialize)]
pub struct ValueReport {
    pub p: u64,
    pub n: u32,
    pub a: Option<String>,
    pub b: Option<String>,
    pub alpha: Option<String>,
    pub c: Option<String>,
    pub value: String,
    /// Base-`p` digits, least significant first.
    pub digits: Vec<u64>,
    pub runtime_ms: f64,
    pub method: &'static str,
}

pub fn base_p_digits(x: &BigUint, p: u64, n: u32) -> Vec<u64> {
    let mut rest = x.clone();
    let base = BigUint::from(p);
    (0..n)
        .map(|_| {
            let d = &rest % &base;
            rest /= &base;
            d.iter_u64_digits().next().unwrap_or(0)
        })
        .collect()
}

impl ValueReport {
    pub fn render(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Decimal => self.value.clone(),
            OutputMode::Digits => {
                let mut s = String::new();
                for (i, d) in self.digits.iter().enumerate() {
                    if i > 0 {
                        s.push(' ');
                    }
                    write!(s, "{d}").unwrap();
                }
                s
            }
            OutputMode::Json => serde_json::to_string(self).expect("plain data serializes"),
        }
    }
}
