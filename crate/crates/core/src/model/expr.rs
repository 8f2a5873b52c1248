//! Boolean expressions over boolean features.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! or    := and ( ("|" | "||" | "∨" | "or") and )*
//! and   := unary ( ("&" | "&&" | "∧" | "and") unary )*
//! unary := ("!" | "~" | "¬" | "not") unary | atom
//! atom  := "x" DIGITS | "0" | "1" | "true" | "false" | "(" or ")"
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(usize),
    Const(bool),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, values: &[i64]) -> bool {
        match self {
            Expr::Var(i) => values[i - 1] != 0,
            Expr::Const(b) => *b,
            Expr::Not(e) => !e.eval(values),
            Expr::And(a, b) => a.eval(values) && b.eval(values),
            Expr::Or(a, b) => a.eval(values) || b.eval(values),
        }
    }

    /// Largest feature index referenced, 0 when none.
    pub fn max_feature(&self) -> usize {
        match self {
            Expr::Var(i) => *i,
            Expr::Const(_) => 0,
            Expr::Not(e) => e.max_feature(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_feature().max(b.max_feature()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(_) => 3,
            Expr::Var(_) | Expr::Const(_) => 4,
        }
    }

    fn fmt_child(&self, child: &Expr, right: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tighter = child.precedence() > self.precedence();
        let same = child.precedence() == self.precedence();
        if !(tighter || (same && !right)) {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Const(b) => write!(f, "{}", u8::from(*b)),
            Expr::Not(e) => {
                write!(f, "!")?;
                self.fmt_child(e, false, f)
            }
            Expr::And(a, b) => {
                self.fmt_child(a, false, f)?;
                write!(f, " & ")?;
                self.fmt_child(b, true, f)
            }
            Expr::Or(a, b) => {
                self.fmt_child(a, false, f)?;
                write!(f, " | ")?;
                self.fmt_child(b, true, f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(usize),
    Const(bool),
    And,
    Or,
    Not,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(token: usize, offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        token,
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (offset, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '!' | '~' | '¬' => Some(Tok::Not),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '0' => Some(Tok::Const(false)),
            '1' => Some(Tok::Const(true)),
            _ => None,
        };
        if let Some(tok) = single {
            // `&&` and `||` are accepted as synonyms.
            let doubled = matches!(tok, Tok::And | Tok::Or)
                && k + 1 < chars.len()
                && chars[k + 1].1 == c
                && c.is_ascii();
            k += if doubled { 2 } else { 1 };
            tokens.push(Token { tok, offset });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_alphanumeric() {
                k += 1;
            }
            let word: String = chars[start..k].iter().map(|&(_, c)| c).collect();
            let tok = match word.to_ascii_lowercase().as_str() {
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "true" => Tok::Const(true),
                "false" => Tok::Const(false),
                w if w.starts_with('x')
                    && w.len() > 1
                    && w[1..].bytes().all(|b| b.is_ascii_digit()) =>
                {
                    let idx: usize = w[1..].parse().map_err(|_| {
                        syntax(tokens.len() + 1, offset, format!("bad variable `{word}`"))
                    })?;
                    if idx == 0 {
                        return Err(syntax(
                            tokens.len() + 1,
                            offset,
                            "features are numbered from x1",
                        ));
                    }
                    Tok::Var(idx)
                }
                _ => {
                    return Err(syntax(
                        tokens.len() + 1,
                        offset,
                        format!("unknown identifier `{word}`"),
                    ))
                }
            };
            tokens.push(Token { tok, offset });
            continue;
        }
        return Err(syntax(
            tokens.len() + 1,
            offset,
            format!("unexpected character `{c}`"),
        ));
    }
    tokens.push(Token {
        tok: Tok::Eof,
        offset: text.len(),
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn error(&self, message: impl Into<String>) -> Error {
        syntax(self.pos + 1, self.tokens[self.pos].offset, message)
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Expr::Var(i))
            }
            Tok::Const(b) => {
                self.bump();
                Ok(Expr::Const(b))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.or()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Eof => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression. Token positions in errors are 1-based and count the
/// end-of-input marker.
pub fn parse(text: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.or()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error("trailing input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Box<Expr> {
        Box::new(Expr::Var(i))
    }

    #[test]
    fn precedence_not_and_or() {
        let e = parse("x1 & (x2 | x3 & x4)").unwrap();
        let expected = Expr::And(
            v(1),
            Box::new(Expr::Or(v(2), Box::new(Expr::And(v(3), v(4))))),
        );
        assert_eq!(e, expected);
        let e = parse("!x1 | x2 & x3").unwrap();
        assert_eq!(
            e,
            Expr::Or(Box::new(Expr::Not(v(1))), Box::new(Expr::And(v(2), v(3))))
        );
    }

    #[test]
    fn alternative_spellings() {
        let a = parse("x1 ∧ (x2 ∨ ¬x3)").unwrap();
        let b = parse("x1 && (x2 || ~x3)").unwrap();
        let c = parse("x1 and (x2 OR not x3)").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn dangling_operator_reports_token_three() {
        match parse("x1 &") {
            Err(Error::Syntax { token, offset, .. }) => {
                assert_eq!(token, 3);
                assert_eq!(offset, 4);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn other_syntax_errors() {
        assert!(matches!(
            parse("(x1 | x2"),
            Err(Error::Syntax { token: 5, .. })
        ));
        assert!(matches!(
            parse("x1 x2"),
            Err(Error::Syntax { token: 2, .. })
        ));
        assert!(matches!(parse("x0"), Err(Error::Syntax { token: 1, .. })));
        assert!(matches!(parse("y1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { token: 1, .. })));
        assert!(matches!(
            parse("x1 $ x2"),
            Err(Error::Syntax { token: 2, .. })
        ));
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for text in [
            "x1 & (x2 | x3 & x4)",
            "!(x1 | x2) & x3",
            "x1 | !x2 & 1",
            "!!x1",
            "x1 & (x2 & x3)",
        ] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        }
        assert_eq!(
            parse("x1 & (x2 | x3 & x4)").unwrap().to_string(),
            "x1 & (x2 | x3 & x4)"
        );
    }
}
