//! Complex literals, channel files and atomic output.
//!
//! A channel file has a header line `n_t n_e`, one line with the `n_t`
//! entries of `h_r`, then `n_e` lines holding the rows of `H_e`. Entries are
//! separated by whitespace or commas. Blank lines and lines starting with
//! `#` are skipped.

use std::io::Write;
use std::path::Path;

use nalgebra::{Complex, DMatrix, DVector};

use crate::capacity::ChannelRealization;
use crate::error::{Error, Result};

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` or `-i` (with `j` accepted for `i`).
pub fn parse_complex(text: &str) -> std::result::Result<Complex<f64>, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let real = |t: &str| -> std::result::Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| format!("malformed number '{t}' in '{s}'"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value in '{s}'"))
        }
    };
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(t),
    };
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex::new(real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex::new(0.0, imag(body)?)),
    }
}

/// Formats as `a+bi` / `a-bi` using shortest round-trip decimals.
pub fn format_complex(z: Complex<f64>) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Parses channel-file text (see the module docs).
pub fn parse_channel(text: &str) -> Result<ChannelRealization<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let missing = |what: &str, line: usize| Error::Parse { line, column: 1, message: format!("missing {what}") };

    let (hl, header) = lines.next().ok_or_else(|| missing("header line 'n_t n_e'", 1))?;
    let fields = tokens(header);
    if fields.len() != 2 {
        return Err(Error::Parse {
            line: hl,
            column: 1,
            message: format!("header must be 'n_t n_e', found {} fields", fields.len()),
        });
    }
    let count = |(col, t): (usize, &str)| {
        t.parse::<usize>().map_err(|_| Error::Parse {
            line: hl,
            column: col,
            message: format!("expected a nonnegative integer, found '{t}'"),
        })
    };
    let n_t = count(fields[0])?;
    let n_e = count(fields[1])?;
    if n_t == 0 {
        return Err(Error::Parse { line: hl, column: fields[0].0, message: "n_t must be positive".into() });
    }

    let mut last = hl;
    let mut row = |what: &str| -> Result<Vec<Complex<f64>>> {
        let (ln, text) = lines.next().ok_or_else(|| missing(what, last + 1))?;
        last = ln;
        let toks = tokens(text);
        if toks.len() != n_t {
            return Err(Error::Parse {
                line: ln,
                column: 1,
                message: format!("{what} has {} entries, expected n_t = {n_t}", toks.len()),
            });
        }
        toks.into_iter()
            .map(|(col, t)| parse_complex(t).map_err(|message| Error::Parse { line: ln, column: col, message }))
            .collect()
    };
    let h = row("h_r line")?;
    let mut he = Vec::with_capacity(n_e * n_t);
    for k in 0..n_e {
        he.extend(row(&format!("H_e row {}", k + 1))?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            column: 1,
            message: format!("unexpected extra line after {n_e} H_e rows"),
        });
    }
    ChannelRealization::new(DVector::from_vec(h), DMatrix::from_row_slice(n_e, n_t, &he))
}

/// Tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        let sep = ch.is_whitespace() || ch == ',';
        match (start, sep) {
            (None, false) => start = Some(k),
            (Some(s), true) => {
                out.push((line[..s].chars().count() + 1, &line[s..k]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

pub fn parse_channel_file(path: impl AsRef<Path>) -> Result<ChannelRealization<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_channel(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

pub fn format_channel(ch: &ChannelRealization<f64>) -> String {
    let join = |it: &mut dyn Iterator<Item = Complex<f64>>| it.map(format_complex).collect::<Vec<_>>().join(" ");
    let mut s = format!("{} {}\n", ch.n_t(), ch.n_e());
    s.push_str(&join(&mut ch.h_r().iter().copied()));
    s.push('\n');
    for r in ch.h_e().row_iter() {
        s.push_str(&join(&mut r.iter().copied()));
        s.push('\n');
    }
    s
}

/// Writes `bytes` to a temporary file beside `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn literal_forms() {
        assert_eq!(parse_complex("1.5+2i").unwrap(), z(1.5, 2.0));
        assert_eq!(parse_complex("-0.9825+0.5914i").unwrap(), z(-0.9825, 0.5914));
        assert_eq!(parse_complex("1.0814-1.1281i").unwrap(), z(1.0814, -1.1281));
        assert_eq!(parse_complex("3").unwrap(), z(3.0, 0.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), z(0.0, -2.5));
        assert_eq!(parse_complex("i").unwrap(), z(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), z(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), z(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5E+2j").unwrap(), z(1e-3, 250.0));
        assert_eq!(parse_complex("-1e5-1e-5i").unwrap(), z(-1e5, -1e-5));
        for bad in ["", "abc", "1+xi", "1++2i", "nan", "inf+1i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn literal_round_trip() {
        for v in [z(0.1, -0.2), z(-1e-300, 7e300), z(1.0 / 3.0, -0.0), z(0.0, 0.0), z(123456.789, 1e-17)] {
            let back = parse_complex(&format_complex(v)).unwrap();
            assert_eq!(back.re.to_bits(), v.re.to_bits());
            assert_eq!(back.im.to_bits(), v.im.to_bits());
        }
    }

    #[test]
    fn channel_text() {
        let ch = parse_channel("# comment\n1 0\n1+0i\n").unwrap();
        assert_eq!((ch.n_t(), ch.n_e()), (1, 0));
        let ch = parse_channel("2 1\n1, 2i\n\n0.5-0.5i 3\n").unwrap();
        assert_eq!(ch.h_e()[(0, 0)], z(0.5, -0.5));
        assert_eq!(parse_channel(&format_channel(&ch)).unwrap(), ch);
    }

    #[test]
    fn channel_errors_locate_problem() {
        let e = parse_channel("2 1\n1 2\n1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_channel("2 1\n1  x+2i\n0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 4, .. }), "{e}");
        let e = parse_channel("2 2\n1 2\n1 2\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");
        assert!(parse_channel("0 1\n").is_err());
        assert!(parse_channel("2\n").is_err());
        assert!(parse_channel("1 0\n1\n2\n").is_err());
        assert!(parse_channel("").is_err());
    }
}
