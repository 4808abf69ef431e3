//! Text grammar for scalar noncommutative polynomials and the canonical
//! printer that round-trips through it.
//!
//! ```text
//! poly   := ('+'|'-')? term (('+'|'-') term)*
//! term   := scalar ('*' factor)* | factor+
//! factor := 'x' INT ('^' INT)?
//! scalar := FLOAT | FLOAT 'i' | '(' '-'? FLOAT ('+'|'-') FLOAT 'i' ')'
//! ```
//!
//! Variable indices are 1-based; `x0` is a syntax error. Every error carries
//! the line and column where it was detected.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{MatPoly, Word};
use crate::la;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    /// Unsigned numeric literal; `imag` when directly suffixed with `i`.
    Number { value: f64, imag: bool, int_text: Option<u64> },
    X,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let push = |tok: Tok| Spanned { tok, line: tline, col: tcol };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '+' => {
                out.push(push(Tok::Plus));
                i += 1;
                col += 1;
            }
            '-' => {
                out.push(push(Tok::Minus));
                i += 1;
                col += 1;
            }
            '*' => {
                out.push(push(Tok::Star));
                i += 1;
                col += 1;
            }
            '^' => {
                out.push(push(Tok::Caret));
                i += 1;
                col += 1;
            }
            '(' => {
                out.push(push(Tok::LParen));
                i += 1;
                col += 1;
            }
            ')' => {
                out.push(push(Tok::RParen));
                i += 1;
                col += 1;
            }
            'x' => {
                out.push(push(Tok::X));
                i += 1;
                col += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut seen_dot = false;
                let mut seen_exp = false;
                while i < chars.len() {
                    let d = chars[i];
                    if d.is_ascii_digit() {
                        i += 1;
                    } else if d == '.' && !seen_dot && !seen_exp {
                        seen_dot = true;
                        i += 1;
                    } else if (d == 'e' || d == 'E')
                        && !seen_exp
                        && i + 1 < chars.len()
                        && (chars[i + 1].is_ascii_digit()
                            || ((chars[i + 1] == '+' || chars[i + 1] == '-')
                                && i + 2 < chars.len()
                                && chars[i + 2].is_ascii_digit()))
                    {
                        seen_exp = true;
                        i += 1;
                        if chars[i] == '+' || chars[i] == '-' {
                            i += 1;
                        }
                    } else {
                        break;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    line: tline,
                    col: tcol,
                    msg: format!("invalid number `{text}`"),
                })?;
                let int_text = if !seen_dot && !seen_exp {
                    text.parse::<u64>().ok()
                } else {
                    None
                };
                let mut imag = false;
                if i < chars.len() && chars[i] == 'i' {
                    imag = true;
                    i += 1;
                }
                let consumed = i - start;
                out.push(Spanned {
                    tok: Tok::Number { value, imag, int_text },
                    line: tline,
                    col: tcol,
                });
                col += consumed;
            }
            other => {
                return Err(Error::Parse {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    /// factor := 'x' INT ('^' INT)?
    fn factor(&mut self) -> Result<Word> {
        match self.bump() {
            Some(Tok::X) => {}
            _ => return Err(self.err("expected a variable `x<index>`")),
        }
        let idx = match self.peek() {
            Some(Tok::Number { int_text: Some(v), imag: false, .. }) => {
                let v = *v;
                self.bump();
                v
            }
            _ => return Err(self.err("expected an integer variable index after `x`")),
        };
        if idx == 0 {
            return Err(self.err("variable indices start at 1; `x0` is not a variable"));
        }
        let mut exp = 1u64;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            exp = match self.peek() {
                Some(Tok::Number { int_text: Some(v), imag: false, .. }) => {
                    let v = *v;
                    self.bump();
                    v
                }
                _ => return Err(self.err("expected an integer exponent after `^`")),
            };
            if exp == 0 {
                return Err(self.err("exponent must be at least 1"));
            }
            if exp > 64 {
                return Err(self.err("exponent too large"));
            }
        }
        let letters = vec![idx as usize; exp as usize];
        Word::from_letters(letters)
    }

    /// scalar := FLOAT | FLOAT 'i' | '(' '-'? FLOAT ('+'|'-') FLOAT 'i' ')'
    fn scalar(&mut self) -> Result<Complex64> {
        match self.peek().cloned() {
            Some(Tok::Number { value, imag, .. }) => {
                self.bump();
                if imag {
                    Ok(Complex64::new(0.0, value))
                } else {
                    Ok(Complex64::new(value, 0.0))
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let neg_re = if matches!(self.peek(), Some(Tok::Minus)) {
                    self.bump();
                    true
                } else {
                    false
                };
                let re = match self.bump() {
                    Some(Tok::Number { value, imag: false, .. }) => value,
                    _ => return Err(self.err("expected the real part of a complex scalar")),
                };
                let sign = match self.bump() {
                    Some(Tok::Plus) => 1.0,
                    Some(Tok::Minus) => -1.0,
                    _ => return Err(self.err("expected `+` or `-` inside a complex scalar")),
                };
                let im = match self.bump() {
                    Some(Tok::Number { value, imag: true, .. }) => value,
                    _ => {
                        return Err(self.err(
                            "expected an imaginary part like `2i` inside a complex scalar",
                        ))
                    }
                };
                match self.bump() {
                    Some(Tok::RParen) => {}
                    _ => return Err(self.err("expected `)` closing a complex scalar")),
                }
                Ok(Complex64::new(if neg_re { -re } else { re }, sign * im))
            }
            _ => Err(self.err("expected a scalar")),
        }
    }

    /// term := scalar ('*' factor)* | factor+
    /// Lenient extension: `*` between juxtaposed factors is optional and a
    /// scalar may be followed by factors without `*`.
    fn term(&mut self) -> Result<(Complex64, Word)> {
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut word = Word::unit();
        let mut any = false;
        match self.peek() {
            Some(Tok::Number { .. }) | Some(Tok::LParen) => {
                coeff = self.scalar()?;
                any = true;
            }
            _ => {}
        }
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    if !any {
                        return Err(self.err("expected a term"));
                    }
                    self.bump();
                    let f = self.factor()?;
                    word = word.concat(&f);
                    any = true;
                }
                Some(Tok::X) => {
                    let f = self.factor()?;
                    word = word.concat(&f);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok((coeff, word))
    }

    /// poly := ('+'|'-')? term (('+'|'-') term)*
    fn poly(&mut self) -> Result<Vec<(Complex64, Word)>> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                sign = -1.0;
            }
            _ => {}
        }
        let (c, w) = self.term()?;
        terms.push((c * sign, w));
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let (c, w) = self.term()?;
                    terms.push((c, w));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let (c, w) = self.term()?;
                    terms.push((-c, w));
                }
                None => break,
                _ => return Err(self.err("expected `+`, `-`, or end of input")),
            }
        }
        Ok(terms)
    }
}

/// Parses a scalar polynomial; the variable count is the largest index used.
pub fn parse_poly(input: &str) -> Result<MatPoly> {
    let toks = lex(input)?;
    let (end_line, end_col) = toks
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser { toks, pos: 0, end_line, end_col };
    let terms = p.poly()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    let nvars = terms.iter().map(|(_, w)| w.max_letter()).max().unwrap_or(0);
    let mut poly = MatPoly::zero(nvars, 1);
    for (c, w) in terms {
        poly = poly.add(&MatPoly::term(nvars, w, la::cmat_scalar(c))?)?;
    }
    Ok(poly)
}

/// Parses with an explicit variable count (must cover every index used).
pub fn parse_poly_n(input: &str, nvars: usize) -> Result<MatPoly> {
    let p = parse_poly(input)?;
    if p.nvars() > nvars {
        return Err(Error::Variables(format!(
            "polynomial uses x{} but {} variables were declared",
            p.nvars(),
            nvars
        )));
    }
    p.with_nvars(nvars)
}

fn fmt_f64(x: f64) -> String {
    // Shortest representation that round-trips exactly.
    format!("{x}")
}

/// Prints one scalar coefficient together with a leading sign decision.
/// Returns (is_negative, body) where `body` never starts with a sign.
fn fmt_coeff(z: Complex64, unit_word: bool) -> (bool, String) {
    if z.im == 0.0 {
        let neg = z.re < 0.0;
        let mag = z.re.abs();
        let body = if unit_word {
            fmt_f64(mag)
        } else if mag == 1.0 {
            String::new()
        } else {
            format!("{}*", fmt_f64(mag))
        };
        (neg, body)
    } else if z.re == 0.0 {
        let neg = z.im < 0.0;
        let mag = z.im.abs();
        let body = if unit_word {
            format!("{}i", fmt_f64(mag))
        } else {
            format!("{}i*", fmt_f64(mag))
        };
        (neg, body)
    } else {
        let re = fmt_f64(z.re);
        let (s, imabs) = if z.im < 0.0 { ("-", -z.im) } else { ("+", z.im) };
        let body = if unit_word {
            format!("({re}{s}{}i)", fmt_f64(imabs))
        } else {
            format!("({re}{s}{}i)*", fmt_f64(imabs))
        };
        (false, body)
    }
}

/// Canonical text form of a scalar polynomial: terms in graded-lex word
/// order, shortest round-trip float formatting. `parse(print(p)) == p`.
pub fn poly_to_text(p: &MatPoly) -> Result<String> {
    if p.nrows() != 1 || p.ncols() != 1 {
        return Err(Error::dim(format!(
            "text form is for scalar polynomials, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    if p.is_zero() {
        return Ok("0".to_string());
    }
    let mut out = String::new();
    for (idx, (w, c)) in p.terms().enumerate() {
        let z = c[(0, 0)];
        let (neg, body) = fmt_coeff(z, w.is_empty());
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
        if !w.is_empty() {
            out.push_str(&w.to_string());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn parses_spec_shapes() {
        // 1 - x1*x2*x1 has the unit word and the word (1,2,1)
        let p = parse_poly("1 - x1*x2*x1").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.nvars(), 2);
        let w = Word::from_letters(vec![1, 2, 1]).unwrap();
        assert_eq!(p.coeff(&w).unwrap()[(0, 0)], Complex64::new(-1.0, 0.0));

        // x1^2 expands to the word (1,1)
        let q = parse_poly("x1^2").unwrap();
        let sq = Word::from_letters(vec![1, 1]).unwrap();
        assert_eq!(q.coeff(&sq).unwrap()[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn x0_is_an_error_with_position() {
        let e = parse_poly("1 + x0").unwrap_err();
        match e {
            Error::Parse { line, col, msg } => {
                assert_eq!(line, 1);
                assert!(col >= 5, "col = {col}");
                assert!(msg.contains("start at 1"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn complex_scalars() {
        let p = parse_poly("2i*x1 + (1.5-2i)").unwrap();
        assert_eq!(
            p.coeff(&Word::letter(1)).unwrap()[(0, 0)],
            Complex64::new(0.0, 2.0)
        );
        assert_eq!(
            p.coeff(&Word::unit()).unwrap()[(0, 0)],
            Complex64::new(1.5, -2.0)
        );
    }

    #[test]
    fn juxtaposed_factors_and_whitespace() {
        let a = parse_poly("x1*x2").unwrap();
        let b = parse_poly("x1 x2").unwrap();
        let c = parse_poly("x1x2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn error_positions_are_useful() {
        let e = parse_poly("1 + * x1").unwrap_err();
        match e {
            Error::Parse { col, .. } => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        let e = parse_poly("x").unwrap_err();
        match e {
            Error::Parse { .. } => {}
            other => panic!("{other:?}"),
        }
        // multi-line input reports the right line
        let e = parse_poly("1 +\n x5^").unwrap_err();
        match e {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn print_matches_grammar() {
        let p = parse_poly("1 - x1*x2*x1 + 2i*x2 + (1.5-2.25i)*x1^2").unwrap();
        let s = poly_to_text(&p).unwrap();
        let q = parse_poly(&s).unwrap();
        assert_eq!(p, q.with_nvars(p.nvars()).unwrap());
    }

    #[test]
    fn zero_roundtrips() {
        let z = MatPoly::zero(0, 1);
        let s = poly_to_text(&z).unwrap();
        assert_eq!(s, "0");
        let back = parse_poly(&s).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn roundtrip_random_polys() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = crate::freealg::random_poly(&mut rng, 3, 4, 1, 2);
            let s = poly_to_text(&p).unwrap();
            let q = parse_poly(&s).unwrap().with_nvars(p.nvars()).unwrap();
            assert_eq!(p, q, "through `{s}`");
        }
    }
}
