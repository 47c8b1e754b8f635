//! Matrix files and small value lists.
//!
//! Matrix format: first line `k`, then `k` lines of `2k` decimals, real and
//! imaginary parts alternating, row-major.

use std::path::Path;

use ddcalc::numkit::MatrixC;
use ddcalc::probes::fmt_num;
use num_complex::Complex64;

use crate::CliError;

fn format_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Format {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixC, CliError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (first, head) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| format_err(1, "empty matrix file"))?;
    let k: usize = head
        .parse()
        .map_err(|_| format_err(first, format!("expected the dimension, found {head:?}")))?;
    if k == 0 {
        return Err(format_err(first, "dimension must be positive"));
    }
    let mut entries = Vec::with_capacity(k * k);
    let mut rows = 0;
    let mut last = first;
    for (n, l) in lines {
        last = n;
        if l.is_empty() {
            continue;
        }
        if rows == k {
            return Err(format_err(n, "more rows than the declared dimension"));
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 * k {
            return Err(format_err(n, format!("expected {} numbers, found {}", 2 * k, fields.len())));
        }
        for pair in fields.chunks(2) {
            let re: f64 = parse_f64(pair[0]).ok_or_else(|| format_err(n, format!("bad number {:?}", pair[0])))?;
            let im: f64 = parse_f64(pair[1]).ok_or_else(|| format_err(n, format!("bad number {:?}", pair[1])))?;
            entries.push(Complex64::new(re, im));
        }
        rows += 1;
    }
    if rows < k {
        return Err(format_err(last + 1, format!("expected {k} rows, found {rows}")));
    }
    MatrixC::from_row_major(k, entries).map_err(|e| format_err(first, e.to_string()))
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

pub fn read_matrix(path: &Path) -> Result<MatrixC, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// Shortest round-trip decimals, so `parse_matrix(write_matrix(m)) == m` bitwise.
pub fn write_matrix(m: &MatrixC) -> String {
    let k = m.dim();
    let mut s = format!("{k}\n");
    for i in 0..k {
        let row: Vec<String> = (0..k)
            .flat_map(|j| {
                let z = m.get(i, j);
                [fmt_num(z.re), fmt_num(z.im)]
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// `1.5`, `-2i`, `i`, `1+2i`, `3e-2-4.5e1i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_f64(s).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_f64(t),
    };
    match split {
        Some(p) => Some(Complex64::new(parse_f64(&body[..p])?, imag(&body[p..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn parse_complex_list(text: &str, what: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|t| parse_complex(t).ok_or_else(|| CliError::Usage(format!("bad {what} value {:?}", t.trim()))))
        .collect()
}

pub fn parse_real_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| parse_f64(t.trim()).ok_or_else(|| CliError::Usage(format!("bad {what} value {:?}", t.trim()))))
        .collect()
}

pub fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad {what} value {:?}", t.trim())))
        })
        .collect()
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_num(z.re), fmt_num(-z.im))
    } else {
        format!("{}+{}i", fmt_num(z.re), fmt_num(z.im))
    }
}
