//! The text format for hand-written examples.
//!
//! ```text
//! # comment
//! dim 2
//! tolerance 1e-10 1e-9      # optional: equality and rank thresholds
//! perturbation 0.1          # optional: size of a random connection term
//! generator                 # one block per algebra generator
//!   1 0
//!   0 0
//! end
//! dirac
//!   0 1-2i
//!   1+2i 0
//! end
//! gamma
//!   1 0
//!   0 -1
//! end
//! j                         # J v = M conj(v)
//!   1 0
//!   0 1
//! end
//! ```
//!
//! N=(1,1) data use `dirac`, `dirac_bar`, `gamma` and `hodge` blocks.
//! Complex entries are written `a`, `bi` or `a+bi` without spaces.

use std::fmt::Write;

use ncspec::linalg::{Mat, C64};
use ncspec::N11Data;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (`i` alone stands for `1i`).
pub fn parse_complex(token: &str) -> Option<C64> {
    let Some(body) = token.strip_suffix('i') else {
        return token.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    // The imaginary part starts at the last sign that is not part of an
    // exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().ok()?,
    };
    Some(C64::new(re, im))
}

/// Formats an entry so that [`parse_complex`] reads back the same bits.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else {
        format!("{:e}{}{:e}i", z.re, if z.im.is_sign_negative() { "" } else { "+" }, z.im)
    }
}

/// A parsed input file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExampleSpec {
    pub dim: usize,
    pub generators: Vec<Mat>,
    pub dirac: Option<Mat>,
    pub dirac_bar: Option<Mat>,
    pub gamma: Option<Mat>,
    pub hodge: Option<Mat>,
    pub j: Option<Mat>,
    pub perturbation: Option<f64>,
    pub tolerance: Option<(f64, f64)>,
}

const BLOCKS: [&str; 6] = ["generator", "dirac", "dirac_bar", "gamma", "hodge", "j"];

impl ExampleSpec {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut spec = ExampleSpec::default();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        while let Some((line, content)) = lines.next() {
            let mut words = content.split_whitespace();
            let key = words.next().unwrap_or("");
            let args: Vec<&str> = words.collect();
            let number = |k: usize| -> Result<f64, ParseError> {
                args.get(k)
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| at(line, format!("`{key}` expects a number")))
            };
            match key {
                "dim" => {
                    if spec.dim != 0 {
                        return Err(at(line, "`dim` given twice"));
                    }
                    spec.dim = args
                        .first()
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&d| d > 0)
                        .ok_or_else(|| at(line, "`dim` expects a positive integer"))?;
                }
                "tolerance" => spec.tolerance = Some((number(0)?, number(1)?)),
                "perturbation" => spec.perturbation = Some(number(0)?),
                block if BLOCKS.contains(&block) => {
                    if spec.dim == 0 {
                        return Err(at(line, format!("`{block}` before `dim`")));
                    }
                    let m = read_block(block, spec.dim, &mut lines, line)?;
                    let slot = match block {
                        "generator" => {
                            spec.generators.push(m);
                            continue;
                        }
                        "dirac" => &mut spec.dirac,
                        "dirac_bar" => &mut spec.dirac_bar,
                        "gamma" => &mut spec.gamma,
                        "hodge" => &mut spec.hodge,
                        _ => &mut spec.j,
                    };
                    if slot.replace(m).is_some() {
                        return Err(at(line, format!("`{block}` given twice")));
                    }
                }
                other => return Err(at(line, format!("unknown field `{other}`"))),
            }
        }
        if spec.dim == 0 {
            return Err(ParseError::Missing("dim"));
        }
        Ok(spec)
    }

    pub fn require(&self, field: &'static str) -> Result<&Mat, ParseError> {
        let slot = match field {
            "dirac" => &self.dirac,
            "dirac_bar" => &self.dirac_bar,
            "gamma" => &self.gamma,
            "hodge" => &self.hodge,
            _ => &self.j,
        };
        slot.as_ref().ok_or(ParseError::Missing(field))
    }
}

fn read_block<'a>(
    block: &str,
    dim: usize,
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    start: usize,
) -> Result<Mat, ParseError> {
    let mut m = Mat::zeros(dim, dim);
    for row in 0..dim {
        let (line, content) = lines
            .next()
            .ok_or_else(|| at(start, format!("`{block}` ends after {row} of {dim} rows")))?;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != dim {
            return Err(at(
                line,
                format!("`{block}` row {} has {} entries, expected {dim}", row + 1, tokens.len()),
            ));
        }
        for (col, t) in tokens.iter().enumerate() {
            m[(row, col)] = parse_complex(t).ok_or_else(|| {
                at(line, format!("`{block}` row {} entry {}: cannot read {t:?}", row + 1, col + 1))
            })?;
        }
    }
    match lines.next() {
        Some((_, "end")) => Ok(m),
        Some((line, _)) => Err(at(line, format!("`{block}` has more than {dim} rows"))),
        None => Err(at(start, format!("`{block}` is missing its `end`"))),
    }
}

fn write_block(out: &mut String, name: &str, m: &Mat) {
    out.push_str(name);
    out.push('\n');
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    out.push_str("end\n");
}

/// N=(1,1) data in the input format, readable by `verify-n11`.
pub fn write_n11(data: &N11Data) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", data.dim());
    for g in &data.algebra.generators {
        write_block(&mut out, "generator", g);
    }
    write_block(&mut out, "dirac", &data.dirac);
    write_block(&mut out, "dirac_bar", &data.dirac_bar);
    write_block(&mut out, "gamma", &data.gamma);
    write_block(&mut out, "hodge", &data.hodge);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_tokens() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("-2.5", C64::new(-2.5, 0.0)),
            ("i", C64::new(0.0, 1.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("3i", C64::new(0.0, 3.0)),
            ("1+2i", C64::new(1.0, 2.0)),
            ("1-i", C64::new(1.0, -1.0)),
            ("1e-3-2e+1i", C64::new(1e-3, -20.0)),
            ("-1.5e2+0.5i", C64::new(-150.0, 0.5)),
        ];
        for (t, z) in cases {
            assert_eq!(parse_complex(t), Some(z), "{t}");
        }
        for bad in ["", "x", "1+", "1+2j", "i1", "1++2i"] {
            assert_eq!(parse_complex(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn formatting_round_trips() {
        for z in [C64::new(0.1, -0.2), C64::new(-0.0, 1e-300), C64::new(1.0 / 3.0, 0.0), C64::new(5.0, -0.0)] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits());
            assert_eq!(back.im, z.im);
        }
    }

    #[test]
    fn reads_blocks_and_options() {
        let spec = ExampleSpec::parse(
            "dim 2\ntolerance 1e-8 1e-7\n# comment\ngenerator\n1 0\n0 0\nend\ngamma\n1 0 # trailing\n0 -1\nend\n",
        )
        .unwrap();
        assert_eq!(spec.dim, 2);
        assert_eq!(spec.tolerance, Some((1e-8, 1e-7)));
        assert_eq!(spec.generators.len(), 1);
        assert_eq!(spec.gamma.unwrap()[(1, 1)], C64::new(-1.0, 0.0));
        assert!(spec.dirac.is_none());
    }

    #[test]
    fn errors_name_line_and_field() {
        let err = ExampleSpec::parse("dim 2\ndirac\n0 1\n1 0 0\nend\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: `dirac` row 2 has 3 entries, expected 2");
        let err = ExampleSpec::parse("dim 2\ngamma\n1 0\n0 -q\nend\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: `gamma` row 2 entry 2: cannot read \"-q\"");
        let err = ExampleSpec::parse("dim 1\nj\n1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: `j` is missing its `end`");
        let err = ExampleSpec::parse("dirac\n").unwrap_err();
        assert_eq!(err.to_string(), "line 1: `dirac` before `dim`");
        assert_eq!(ExampleSpec::parse("# empty\n").unwrap_err(), ParseError::Missing("dim"));
        let err = ExampleSpec::parse("dim 1\nspin 3\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: unknown field `spin`");
    }

    #[test]
    fn n11_output_parses_back() {
        let data = ncspec::gallery::n11_scalar();
        let spec = ExampleSpec::parse(&write_n11(&data)).unwrap();
        assert_eq!(spec.dirac.unwrap(), data.dirac);
        assert_eq!(spec.dirac_bar.unwrap(), data.dirac_bar);
        assert_eq!(spec.hodge.unwrap(), data.hodge);
    }
}
