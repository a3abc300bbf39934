//! Plain-text complex matrices: a `mat <rows> <cols>` header followed by
//! row-major entries `a+bi`, one row per line.

use num_complex::Complex64;

use super::{CMatrix, HilbertError};

fn format_entry(z: &Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

pub fn write_matrix(m: &CMatrix) -> String {
    let mut out = format!("mat {} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_entry(&m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_entry(tok: &str) -> Option<Complex64> {
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().ok()?;
            let im_str = &body[k..];
            let im: f64 = match im_str {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im: f64 = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, HilbertError> {
    let mut toks = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if toks.next() != Some("mat") {
        return Err(HilbertError::Format("expected `mat <rows> <cols>` header".into()));
    }
    let mut dim = || -> Result<usize, HilbertError> {
        toks.next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| HilbertError::Format("bad matrix dimensions".into()))
    };
    let rows = dim()?;
    let cols = dim()?;
    let entries: Vec<Complex64> = toks
        .map(|t| parse_entry(t).ok_or_else(|| HilbertError::Format(format!("bad entry `{t}`"))))
        .collect::<Result<_, _>>()?;
    if entries.len() != rows * cols {
        return Err(HilbertError::Format(format!(
            "expected {} entries, found {}",
            rows * cols,
            entries.len()
        )));
    }
    Ok(CMatrix::from_row_slice(rows, cols, &entries))
}
