//! Grid syntax: a comma list whose items are single numbers or `a:b:n`
//! ranges (n samples, both endpoints included).

use crate::{Error, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(Error::Config(format!("empty item in grid '{spec}'")));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(number(v, spec)?),
            [a, b, n] => {
                let (a, b) = (number(a, spec)?, number(b, spec)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("sample count '{n}' in grid '{spec}' is not a positive integer")))?;
                match n {
                    0 => return Err(Error::Config(format!("grid '{item}' has zero samples"))),
                    1 if a != b => return Err(Error::Config(format!("grid '{item}' has one sample but a != b"))),
                    1 => out.push(a),
                    _ => {
                        let h = (b - a) / (n - 1) as f64;
                        out.extend((0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }));
                    }
                }
            }
            _ => return Err(Error::Config(format!("cannot parse grid item '{item}' (expected x or a:b:n)"))),
        }
    }
    Ok(out)
}

/// Integer grid: same syntax, every sample must be an integer.
pub fn parse_int_grid(spec: &str) -> Result<Vec<i64>> {
    parse_grid(spec)?
        .into_iter()
        .map(|v| {
            if v.fract() == 0.0 && v.abs() < 1e15 {
                Ok(v as i64)
            } else {
                Err(Error::Config(format!("'{spec}' must contain integers only (got {v})")))
            }
        })
        .collect()
}

pub fn parse_scalar(spec: &str) -> Result<f64> {
    number(spec, spec)
}

fn number(s: &str, spec: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Config(format!("'{s}' in '{spec}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("'{s}' in '{spec}' is not finite")))
    }
}
