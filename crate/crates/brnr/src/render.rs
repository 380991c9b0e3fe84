//! Textual form of multivectors: primal terms print as `(i,j)` or
//! `(i,j,k)`, dual terms as `[i,j]` or `[i,j,k]`, with integer
//! coefficients, e.g. `(1,2)-(3,4)` or `2(1,3,5)-(1,4,6)`. Coefficients
//! print balanced (p - 1 renders as -1) so output can be read against
//! the usual signed conventions; the parser accepts any integers and any
//! index order inside a tuple, applying the sorting sign.

use crate::error::{Error, Result};
use crate::exterior::{MultiVector, Side};
use crate::field::PrimeField;

pub fn render(mv: &MultiVector) -> String {
    let field = mv.field();
    if mv.degree() == 0 {
        return format!("{}", field.balanced(mv.coords()[0]));
    }
    if mv.is_zero() {
        return "0".to_string();
    }
    let (open, close) = match mv.side() {
        Side::Primal => ('(', ')'),
        Side::Dual => ('[', ']'),
    };
    let mut out = String::new();
    for (tuple, coeff) in mv.terms() {
        let c = field.balanced(coeff);
        let (sign, mag) = if c < 0 { ('-', -c) } else { ('+', c) };
        if out.is_empty() {
            if sign == '-' {
                out.push('-');
            }
        } else {
            out.push(sign);
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push(open);
        let idx: Vec<String> = tuple.iter().map(|&i| (i + 1).to_string()).collect();
        out.push_str(&idx.join(","));
        out.push(close);
    }
    out
}

/// Parses an expression like `(1,2,3)+(3,4,5)-2(5,6,1)`. The side (primal
/// for parentheses, dual for brackets) and the degree are inferred from
/// the first tuple and must be consistent across terms.
pub fn parse(field: PrimeField, n: usize, input: &str) -> Result<MultiVector> {
    let mut scanner = Scanner { chars: input.char_indices().peekable(), input };
    let mut result: Option<MultiVector> = None;
    let mut first = true;
    loop {
        scanner.skip_ws();
        if scanner.peek().is_none() {
            break;
        }
        let sign = match scanner.peek() {
            Some('+') => {
                scanner.next();
                1i64
            }
            Some('-') => {
                scanner.next();
                -1i64
            }
            _ if first => 1i64,
            Some(c) => {
                return Err(Error::parse(format!(
                    "expected '+' or '-' before term, found {c:?}"
                )))
            }
            None => break,
        };
        first = false;
        scanner.skip_ws();
        let coeff = if scanner.peek().map_or(false, |c| c.is_ascii_digit()) {
            let v = scanner.integer()?;
            scanner.skip_ws();
            if scanner.peek() == Some('*') {
                scanner.next();
                scanner.skip_ws();
            }
            v
        } else {
            1i64
        };
        let side = match scanner.peek() {
            Some('(') => Side::Primal,
            Some('[') => Side::Dual,
            other => {
                return Err(Error::parse(format!(
                    "expected a tuple '(..)' or '[..]', found {other:?}"
                )))
            }
        };
        let indices = scanner.tuple()?;
        if indices.is_empty() {
            return Err(Error::parse("empty index tuple"));
        }
        let mut seen = indices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse(format!("repeated index in tuple {indices:?}")));
        }
        let term =
            MultiVector::basis_term(field, n, side, &indices)?.scale(field.reduce(sign * coeff));
        result = Some(match result {
            None => term,
            Some(acc) => {
                if acc.side() != term.side() {
                    return Err(Error::parse("mixed primal '(..)' and dual '[..]' tuples"));
                }
                if acc.degree() != term.degree() {
                    return Err(Error::parse("tuples of different lengths in one expression"));
                }
                acc.add(&term)?
            }
        });
    }
    result.ok_or_else(|| Error::parse("empty multivector expression"))
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    input: &'a str,
}

impl Scanner<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn next(&mut self) -> Option<char> {
        self.chars.next().map(|(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, |c| c.is_whitespace()) {
            self.next();
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = match self.chars.peek() {
            Some(&(i, _)) => i,
            None => return Err(Error::parse("expected an integer")),
        };
        let mut end = start;
        while let Some(&(i, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                end = i + c.len_utf8();
                self.chars.next();
            } else {
                break;
            }
        }
        self.input[start..end]
            .parse::<i64>()
            .map_err(|e| Error::parse(format!("bad integer: {e}")))
    }

    /// Reads `(i,j,..)` or `[i,j,..]`, returning 1-based indices.
    fn tuple(&mut self) -> Result<Vec<usize>> {
        let open = self.next().expect("caller checked opening bracket");
        let close = if open == '(' { ')' } else { ']' };
        let mut indices = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == close => {
                    self.next();
                    return Ok(indices);
                }
                Some(c) if c.is_ascii_digit() => {
                    let v = self.integer()?;
                    if v < 1 {
                        return Err(Error::parse(format!("index {v} must be positive")));
                    }
                    indices.push(v as usize);
                    self.skip_ws();
                    if self.peek() == Some(',') {
                        self.next();
                    } else if self.peek() != Some(close) {
                        return Err(Error::parse(format!(
                            "expected ',' or {close:?} inside tuple"
                        )));
                    }
                }
                other => {
                    return Err(Error::parse(format!(
                        "expected an index or {close:?}, found {other:?}"
                    )))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn renders_paper_abbreviations() {
        let field = f(3);
        let term = |idx: &[usize]| MultiVector::basis_term(field, 6, Side::Primal, idx).unwrap();
        let w = term(&[1, 2]).sub(&term(&[3, 4])).unwrap();
        assert_eq!(render(&w), "(1,2)-(3,4)");
        let dual = MultiVector::basis_term(field, 6, Side::Dual, &[3, 5]).unwrap();
        assert_eq!(render(&dual), "[3,5]");
        assert_eq!(render(&MultiVector::zero(field, 6, 2, Side::Primal)), "0");
    }

    #[test]
    fn renders_balanced_coefficients() {
        let field = f(7);
        let w = MultiVector::basis_term(field, 6, Side::Primal, &[1, 3, 5]).unwrap().scale(5);
        assert_eq!(render(&w), "-2(1,3,5)");
    }

    #[test]
    fn parses_unsorted_tuple_with_sign() {
        let field = f(5);
        // (5,6,1) = +(1,5,6): two transpositions
        let w = parse(field, 6, "(5,6,1)").unwrap();
        assert_eq!(w.coefficient(&[1, 5, 6]).unwrap(), 1);
        let v = parse(field, 6, "(2,1)").unwrap();
        assert_eq!(v.coefficient(&[1, 2]).unwrap(), field.neg(1));
    }

    #[test]
    fn parse_round_trip() {
        let field = f(7);
        let cases = ["(1,2)-(3,4)", "2(1,3,5)-(1,4,6)+3(2,5,6)", "[1,4]", "-[1,2]+2[5,6]"];
        for s in cases {
            let mv = parse(field, 6, s).unwrap();
            assert_eq!(render(&mv), s);
            assert_eq!(parse(field, 6, &render(&mv)).unwrap(), mv);
        }
    }

    #[test]
    fn parse_accepts_spacing_and_star() {
        let field = f(5);
        let a = parse(field, 6, " (1,2) - 2 * (3,4) ").unwrap();
        let b = parse(field, 6, "(1,2)-2(3,4)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_rejects_bad_input() {
        let field = f(5);
        assert!(parse(field, 6, "").is_err());
        assert!(parse(field, 6, "(1,2").is_err());
        assert!(parse(field, 6, "(1,2)+[3,4]").is_err());
        assert!(parse(field, 6, "(1,2)+(3,4,5)").is_err());
        assert!(parse(field, 6, "(1,1)").is_err());
        assert!(parse(field, 6, "(1,7)").is_err());
        assert!(parse(field, 6, "(0,2)").is_err());
        assert!(parse(field, 6, "x(1,2)").is_err());
    }

    #[test]
    fn cancelling_terms_parse_to_zero() {
        let field = f(5);
        let w = parse(field, 6, "(1,2,3)-(1,2,3)").unwrap();
        assert!(w.is_zero());
    }
}
