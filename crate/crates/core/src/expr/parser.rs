//! Pratt parser for the coordinate expression grammar.
//!
//! Binding powers, loosest first: `+ -`, `* /`, unary `-`, `^` (right
//! associative). Exponents must be constant; they are folded to a number at
//! parse time.

use std::collections::HashSet;

use super::{BinaryOp, Constant, ExprAst, ExprError, Function};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // scientific suffix only when digits follow, so "2e" stays 2 then `e`
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{lit}`")))?;
                out.push((Token::Num(v), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {}
        }
        let tok = match c {
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    coords: &'a [String],
}

const UNARY_BP: u8 = 5;

fn infix_bp(tok: &Token) -> Option<(u8, u8)> {
    Some(match tok {
        Token::Plus | Token::Minus => (1, 2),
        Token::Star | Token::Slash => (3, 4),
        Token::Caret => (8, 7),
        _ => return None,
    })
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.next() {
            Some((Token::RParen, _)) => Ok(()),
            Some((_, off)) => Err(syntax(off, "expected `)`")),
            None => Err(syntax(self.end, "expected `)` before end of input")),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<ExprAst, ExprError> {
        let mut lhs = self.prefix()?;
        while let Some(tok) = self.peek() {
            let Some((l_bp, r_bp)) = infix_bp(tok) else {
                if matches!(tok, Token::RParen) {
                    break;
                }
                return Err(syntax(self.offset(), "expected an operator"));
            };
            if l_bp < min_bp {
                break;
            }
            let (tok, _) = self.next().expect("peeked");
            if tok == Token::Caret {
                let exp_offset = self.offset();
                let exponent = self.expr(r_bp)?;
                if exponent.max_var().is_some() {
                    return Err(syntax(exp_offset, "exponent must be a constant"));
                }
                let e = exponent
                    .eval(&[])
                    .map_err(|_| syntax(exp_offset, "exponent does not evaluate to a number"))?;
                lhs = ExprAst::Pow(Box::new(lhs), e);
                continue;
            }
            let rhs = self.expr(r_bp)?;
            let op = match tok {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => unreachable!("infix_bp only admits binary operators"),
            };
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<ExprAst, ExprError> {
        let Some((tok, off)) = self.next() else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        match tok {
            Token::Num(v) => Ok(ExprAst::Num(v)),
            Token::Minus => Ok(ExprAst::Neg(Box::new(self.expr(UNARY_BP)?))),
            Token::LParen => {
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => self.identifier(name, off),
            _ => Err(syntax(off, "expected a number, identifier or `(`")),
        }
    }

    fn identifier(&mut self, name: String, off: usize) -> Result<ExprAst, ExprError> {
        if let Some(i) = self.coords.iter().position(|c| *c == name) {
            return Ok(ExprAst::Var(i));
        }
        if let Some(f) = Function::from_name(&name) {
            match self.next() {
                Some((Token::LParen, _)) => {}
                _ => {
                    return Err(syntax(
                        off,
                        format!("`{name}` must be called as `{name}(...)`"),
                    ))
                }
            }
            let arg = self.expr(0)?;
            self.expect_rparen()?;
            return Ok(ExprAst::Call(f, Box::new(arg)));
        }
        match name.as_str() {
            "pi" => Ok(ExprAst::Const(Constant::Pi)),
            "e" => Ok(ExprAst::Const(Constant::E)),
            _ => Err(ExprError::UnknownIdentifier { name, offset: off }),
        }
    }
}

fn check_coords(coords: &[String]) -> Result<(), ExprError> {
    if coords.is_empty() {
        return Err(ExprError::InvalidCoordinates(
            "empty coordinate list".into(),
        ));
    }
    let mut seen = HashSet::new();
    for c in coords {
        let mut chars = c.chars();
        let valid = chars
            .next()
            .is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
            && chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
        if !valid {
            return Err(ExprError::InvalidCoordinates(format!(
                "`{c}` is not an identifier"
            )));
        }
        if Function::from_name(c).is_some() {
            return Err(ExprError::InvalidCoordinates(format!(
                "`{c}` is a function name"
            )));
        }
        if !seen.insert(c.as_str()) {
            return Err(ExprError::InvalidCoordinates(format!(
                "duplicate name `{c}`"
            )));
        }
    }
    Ok(())
}

/// Parses `text` with variables drawn from `coords`.
pub fn parse(text: &str, coords: &[String]) -> Result<ExprAst, ExprError> {
    check_coords(coords)?;
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        coords,
    };
    let ast = p.expr(0)?;
    if p.pos < p.tokens.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn zero_literal() {
        assert_eq!(parse("0", &names(&["x1"])).unwrap(), ExprAst::Num(0.0));
    }

    #[test]
    fn sum_with_power() {
        let ast = parse("1+x1^2", &names(&["x1", "x2"])).unwrap();
        let expected = ExprAst::Binary(
            BinaryOp::Add,
            Box::new(ExprAst::Num(1.0)),
            Box::new(ExprAst::Pow(Box::new(ExprAst::Var(0)), 2.0)),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn undeclared_variable() {
        let err = parse("1/x2^2", &names(&["x1"])).unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownIdentifier {
                name: "x2".into(),
                offset: 2
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let c = names(&["x"]);
        let v = |s: &str| parse(s, &c).unwrap().eval(&[2.0]).unwrap();
        assert_eq!(v("-x^2"), -4.0);
        assert_eq!(v("2^3^2"), 512.0);
        assert_eq!(v("1-2-3"), -4.0);
        assert_eq!(v("8/2/2"), 2.0);
        assert_eq!(v("2*x+3*x^-1"), 5.5);
        assert_eq!(v("x^(1/2)^2"), 2.0f64.powf(0.25));
        assert_eq!(v("-(x)*3"), -6.0);
        assert_eq!(v("2e-1*x"), 0.4);
        assert!((v("2*e") - 2.0 * std::f64::consts::E).abs() < 1e-15);
        assert!((v("cos(pi)") + 1.0).abs() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let c = names(&["x1"]);
        let offset = |s: &str| match parse(s, &c).unwrap_err() {
            ExprError::Syntax { offset, .. } => offset,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(offset("1 +"), 3);
        assert_eq!(offset("(x1"), 3);
        assert_eq!(offset("x1 x1"), 3);
        assert_eq!(offset("x1^x1"), 3);
        assert_eq!(offset("2 $ 3"), 2);
        assert_eq!(offset("sin x1"), 0);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("x1)"), 2);
    }

    #[test]
    fn rejects_bad_coordinate_lists() {
        assert!(parse("1", &[]).is_err());
        assert!(parse("1", &names(&["x", "x"])).is_err());
        assert!(parse("1", &names(&["sin"])).is_err());
        assert!(parse("1", &names(&["1x"])).is_err());
    }
}
