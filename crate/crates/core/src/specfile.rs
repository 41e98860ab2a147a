//! Parser for the declarative algebra spec file format.
//!
//! ```text
//! # comment
//! dim = 2
//! brackets = [(1, 2, 1, 1)]     # [d_i, d_j] += coeff d_k, antisymmetrized
//! chi = [0, 1]
//! omega = [(1, 2, 1)]           # omega(d_i ^ d_j) += value, antisymmetrized
//! ```
//!
//! Rationals are written `p` or `p/q`. Indices are 1-based.

use crate::algebra::LieAlgebraSpec;
use crate::linalg::Mat;
use crate::rat::{parse_rat, rzero, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rat),
    Eq,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(start, ch)) = chars.peek() {
            let lno = lineno + 1;
            match ch {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '=' => {
                    chars.next();
                    out.push((lno, Tok::Eq));
                }
                '[' => {
                    chars.next();
                    out.push((lno, Tok::LBracket));
                }
                ']' => {
                    chars.next();
                    out.push((lno, Tok::RBracket));
                }
                '(' => {
                    chars.next();
                    out.push((lno, Tok::LParen));
                }
                ')' => {
                    chars.next();
                    out.push((lno, Tok::RParen));
                }
                ',' => {
                    chars.next();
                    out.push((lno, Tok::Comma));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = start;
                    while let Some(&(i, c2)) = chars.peek() {
                        if c2.is_ascii_alphanumeric() || c2 == '_' {
                            end = i + c2.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push((lno, Tok::Ident(line[start..end].to_string())));
                }
                c if c.is_ascii_digit() || c == '-' || c == '+' => {
                    let mut end = start;
                    while let Some(&(i, c2)) = chars.peek() {
                        if c2.is_ascii_digit() || c2 == '/' || c2 == '-' || c2 == '+' {
                            end = i + c2.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let lit = &line[start..end];
                    let r = parse_rat(lit).map_err(|m| ParseError {
                        line: lno,
                        message: m,
                    })?;
                    out.push((lno, Tok::Num(r)));
                }
                other => {
                    return Err(ParseError {
                        line: lno,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Rat),
    List(Vec<Vec<Rat>>), // each item is a bare scalar (len 1) or a tuple
}

fn parse_statements(toks: &[(usize, Tok)]) -> Result<Vec<(usize, String, Value)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        let (line, tok) = &toks[pos];
        let Tok::Ident(key) = tok else {
            return Err(ParseError {
                line: *line,
                message: "expected a key name".to_string(),
            });
        };
        pos += 1;
        match toks.get(pos) {
            Some((_, Tok::Eq)) => pos += 1,
            _ => {
                return Err(ParseError {
                    line: *line,
                    message: format!("expected `=` after `{key}`"),
                })
            }
        }
        let value = match toks.get(pos) {
            Some((_, Tok::Num(r))) => {
                pos += 1;
                Value::Scalar(r.clone())
            }
            Some((_, Tok::LBracket)) => {
                pos += 1;
                let mut items = Vec::new();
                loop {
                    match toks.get(pos) {
                        Some((_, Tok::RBracket)) => {
                            pos += 1;
                            break;
                        }
                        Some((_, Tok::Comma)) => {
                            pos += 1;
                        }
                        Some((_, Tok::Num(r))) => {
                            items.push(vec![r.clone()]);
                            pos += 1;
                        }
                        Some((tl, Tok::LParen)) => {
                            pos += 1;
                            let mut tuple = Vec::new();
                            loop {
                                match toks.get(pos) {
                                    Some((_, Tok::RParen)) => {
                                        pos += 1;
                                        break;
                                    }
                                    Some((_, Tok::Comma)) => pos += 1,
                                    Some((_, Tok::Num(r))) => {
                                        tuple.push(r.clone());
                                        pos += 1;
                                    }
                                    Some((l2, _)) => {
                                        return Err(ParseError {
                                            line: *l2,
                                            message: "expected rational inside tuple".to_string(),
                                        })
                                    }
                                    None => {
                                        return Err(ParseError {
                                            line: *tl,
                                            message: "unterminated tuple".to_string(),
                                        })
                                    }
                                }
                            }
                            items.push(tuple);
                        }
                        Some((l2, _)) => {
                            return Err(ParseError {
                                line: *l2,
                                message: "expected list item".to_string(),
                            })
                        }
                        None => {
                            return Err(ParseError {
                                line: *line,
                                message: "unterminated list".to_string(),
                            })
                        }
                    }
                }
                Value::List(items)
            }
            Some((l2, _)) => {
                return Err(ParseError {
                    line: *l2,
                    message: format!("expected value for `{key}`"),
                })
            }
            None => {
                return Err(ParseError {
                    line: *line,
                    message: format!("missing value for `{key}`"),
                })
            }
        };
        out.push((*line, key.clone(), value));
    }
    Ok(out)
}

fn as_usize(r: &Rat, line: usize, what: &str) -> Result<usize, ParseError> {
    use num_traits::{Signed, ToPrimitive};
    if !r.is_integer() || r.is_negative() {
        return Err(ParseError {
            line,
            message: format!("{what} must be a positive integer"),
        });
    }
    r.numer().to_usize().ok_or(ParseError {
        line,
        message: format!("{what} out of range"),
    })
}

/// Parse a full algebra spec document.
pub fn parse_spec(text: &str) -> Result<LieAlgebraSpec, ParseError> {
    let toks = tokenize(text)?;
    let stmts = parse_statements(&toks)?;

    let mut dim: Option<usize> = None;
    let mut brackets: Vec<(usize, usize, usize, Rat)> = Vec::new();
    let mut chi: Option<Vec<Rat>> = None;
    let mut omega_entries: Vec<(usize, usize, Rat)> = Vec::new();
    let mut seen_brackets = false;
    let mut seen_omega = false;

    for (line, key, value) in stmts {
        match (key.as_str(), value) {
            ("dim", Value::Scalar(r)) => dim = Some(as_usize(&r, line, "dim")?),
            ("brackets", Value::List(items)) => {
                seen_brackets = true;
                for item in items {
                    if item.len() != 4 {
                        return Err(ParseError {
                            line,
                            message: "bracket entries are (i, j, k, coeff)".to_string(),
                        });
                    }
                    let i = as_usize(&item[0], line, "bracket index i")?;
                    let j = as_usize(&item[1], line, "bracket index j")?;
                    let k = as_usize(&item[2], line, "bracket index k")?;
                    brackets.push((i, j, k, item[3].clone()));
                }
            }
            ("chi", Value::List(items)) => {
                let mut v = Vec::new();
                for item in items {
                    if item.len() != 1 {
                        return Err(ParseError {
                            line,
                            message: "chi is a flat list of rationals".to_string(),
                        });
                    }
                    v.push(item[0].clone());
                }
                chi = Some(v);
            }
            ("omega", Value::List(items)) => {
                seen_omega = true;
                for item in items {
                    if item.len() != 3 {
                        return Err(ParseError {
                            line,
                            message: "omega entries are (i, j, value)".to_string(),
                        });
                    }
                    let i = as_usize(&item[0], line, "omega index i")?;
                    let j = as_usize(&item[1], line, "omega index j")?;
                    omega_entries.push((i, j, item[2].clone()));
                }
            }
            (other, _) => {
                return Err(ParseError {
                    line,
                    message: format!("unknown or malformed field `{other}`"),
                })
            }
        }
    }

    let dim = dim.ok_or(ParseError {
        line: 0,
        message: "missing `dim`".to_string(),
    })?;
    if !seen_omega {
        return Err(ParseError {
            line: 0,
            message: "missing `omega`".to_string(),
        });
    }
    let chi = chi.unwrap_or_else(|| vec![rzero(); dim]);
    if chi.len() != dim {
        return Err(ParseError {
            line: 0,
            message: format!("chi has {} entries, expected {dim}", chi.len()),
        });
    }
    let _ = seen_brackets;

    let mut spec = LieAlgebraSpec::abelian(dim, chi, Mat::zeros(dim, dim));
    let check_idx = |i: usize| -> Result<usize, ParseError> {
        if i == 0 || i > dim {
            Err(ParseError {
                line: 0,
                message: format!("index {i} out of range 1..={dim}"),
            })
        } else {
            Ok(i - 1)
        }
    };
    for (i, j, k, coeff) in brackets {
        let (i, j, k) = (check_idx(i)?, check_idx(j)?, check_idx(k)?);
        spec.c[i][j][k] += &coeff;
        spec.c[j][i][k] -= &coeff;
    }
    for (i, j, value) in omega_entries {
        let (i, j) = (check_idx(i)?, check_idx(j)?);
        *spec.omega.at_mut(i, j) += &value;
        *spec.omega.at_mut(j, i) -= &value;
    }
    Ok(spec)
}
