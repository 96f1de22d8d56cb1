//! Plain-text matrix and vector files.
//!
//! Matrix format: first line `N`, then `N` lines of `N` whitespace
//! separated entries. Vector format: first line `N`, then `N` lines of
//! one entry each. An entry is `re` or `re+imi` / `re-imi`, e.g.
//! `0.5-0.25i`; exponent notation is accepted (`1e-3-2.5e-4i`). Lines
//! starting with `#` and blank lines are skipped. Writers emit 17
//! significant digits so values round-trip bit-exactly.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::{C64, CMat, CVec};

/// Format a real with 17 significant digits (round-trip safe).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Format a complex entry; a vanishing imaginary part prints as a real.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", format_f64(z.re), format_f64(-z.im))
    } else {
        format!("{}+{}i", format_f64(z.re), format_f64(z.im))
    }
}

/// Parse a complex entry.
pub fn parse_complex(token: &str, line: usize) -> Result<C64> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Parse {
            line,
            msg: "empty entry".into(),
        });
    }
    let bad = |msg: String| Error::Parse { line, msg };
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the last sign that does not follow an exponent marker
        // and is not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-')
                && bytes[idx - 1] != b'e'
                && bytes[idx - 1] != b'E'
            {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx]
                    .parse()
                    .map_err(|_| bad(format!("invalid real part in '{t}'")))?;
                let im: f64 = body[idx..]
                    .parse()
                    .map_err(|_| bad(format!("invalid imaginary part in '{t}'")))?;
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = body
                    .parse()
                    .map_err(|_| bad(format!("invalid imaginary entry '{t}'")))?;
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t
            .parse()
            .map_err(|_| bad(format!("invalid entry '{t}'")))?;
        Ok(C64::new(re, 0.0))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(usize, usize)> {
    let (line, text) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty file".into(),
    })?;
    let n: usize = text.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid dimension '{text}'"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            msg: "dimension must be positive".into(),
        });
    }
    Ok((line, n))
}

/// Read a square complex matrix.
pub fn parse_matrix(text: &str) -> Result<CMat> {
    let mut lines = content_lines(text);
    let (_, n) = parse_header(&mut lines)?;
    let mut m: CMat = Array2::zeros((n, n));
    for row in 0..n {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {n} matrix rows, found {row}"),
        })?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("expected {n} entries, got {}", tokens.len()),
            });
        }
        for (col, tok) in tokens.iter().enumerate() {
            m[[row, col]] = parse_complex(tok, line)?;
        }
    }
    Ok(m)
}

/// Read a complex vector (one entry per line after the header).
pub fn parse_vector(text: &str) -> Result<CVec> {
    let mut lines = content_lines(text);
    let (_, n) = parse_header(&mut lines)?;
    let mut v: CVec = Array1::zeros(n);
    for row in 0..n {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {n} vector entries, found {row}"),
        })?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 1 {
            return Err(Error::Parse {
                line,
                msg: format!("expected one entry per line, got {}", tokens.len()),
            });
        }
        v[row] = parse_complex(tokens[0], line)?;
    }
    Ok(v)
}

/// Render a matrix in the file format.
pub fn write_matrix(m: &CMat) -> String {
    let n = m.nrows();
    let mut out = String::new();
    out.push_str(&format!("{n}\n"));
    for i in 0..n {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_complex(m[[i, j]])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Render a vector in the file format.
pub fn write_vector(v: &CVec) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", v.len()));
    for z in v.iter() {
        out.push_str(&format_complex(*z));
        out.push('\n');
    }
    out
}
