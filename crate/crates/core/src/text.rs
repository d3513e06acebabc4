//! Tokenizer shared by the text grammars (Laurent coefficients, word sums,
//! Poisson expressions, bracket tables).

use num_bigint::BigInt;

use crate::error::{QismError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Token {
    Int(BigInt),
    /// Identifier; trailing primes are part of the name (`u'`).
    Ident(String),
    Sym(char),
}

pub(crate) fn tokenize(src: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Int(s.parse().map_err(|_| QismError::parse(line, format!("bad integer `{s}`")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && (chars[i] == '\'' || chars[i] == '′') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&ch| if ch == '′' { '\'' } else { ch }).collect();
            out.push(Token::Ident(s));
        } else if "+-*/^()[]{},:".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(QismError::parse(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    pub line: usize,
}

impl Cursor {
    pub fn new(src: &str, line: usize) -> Result<Self> {
        Ok(Cursor { tokens: tokenize(src, line)?, pos: 0, line })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token::Sym(s)) if *s == c)
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    pub fn expect_int(&mut self) -> Result<BigInt> {
        match self.next() {
            Some(Token::Int(n)) => Ok(n),
            other => Err(self.error(format!("expected integer, found {other:?}"))),
        }
    }

    /// Optionally signed integer.
    pub fn expect_signed_int(&mut self) -> Result<BigInt> {
        let neg = self.eat_sym('-');
        let n = self.expect_int()?;
        Ok(if neg { -n } else { n })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("trailing input at {:?}", self.peek())))
        }
    }

    pub fn error(&self, msg: impl Into<String>) -> QismError {
        QismError::parse(self.line, msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_primes_and_symbols() {
        let t = tokenize("I[1,2](u') + 3*u^-1", 1).unwrap();
        assert_eq!(t[0], Token::Ident("I".into()));
        assert_eq!(t[7], Token::Ident("u'".into()));
        assert!(t.contains(&Token::Sym('^')));
        assert!(tokenize("a $ b", 4).is_err());
    }
}
