//! Concrete syntax for formulas.
//!
//! ```text
//! atoms:    alphabet identifiers        constants: tt, ff
//! unary:    ! φ, X φ, F φ, G φ
//! binary:   φ XU ψ, φ U ψ   (right associative)
//!           φ & ψ, φ | ψ, φ -> ψ
//! precedence: unary > XU/U > & > | > ->
//! ```
//!
//! The keywords `tt ff X F G U XU` shadow alphabet letters of the same name.

use super::Formula;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Bang,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' => {
                tokens.push((col, Token::Bang));
                i += 1;
            }
            '&' => {
                tokens.push((col, Token::And));
                i += 1;
            }
            '|' => {
                tokens.push((col, Token::Or));
                i += 1;
            }
            '(' => {
                tokens.push((col, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((col, Token::RParen));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push((col, Token::Arrow));
                    i += 2;
                } else {
                    return Err(syntax(col, "expected `->`"));
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push((col, Token::Ident(chars[start..i].iter().collect())));
            }
            other => return Err(syntax(col, &format!("unexpected character `{other}`"))),
        }
    }
    Ok(Lexer { tokens })
}

fn syntax(position: usize, message: &str) -> Error {
    Error::Parse {
        line: position,
        message: message.to_string(),
    }
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn peek_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some((_, Token::Ident(id))) if id == name)
    }

    fn end_position(&self) -> usize {
        self.tokens.last().map(|(c, _)| *c + 1).unwrap_or(1)
    }

    // implies := or ('->' implies)?
    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if matches!(self.peek(), Some((_, Token::Arrow))) {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // or := and ('|' and)*
    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while matches!(self.peek(), Some((_, Token::Or))) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    // and := until ('&' until)*
    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while matches!(self.peek(), Some((_, Token::And))) {
            self.bump();
            let rhs = self.until()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // until := unary (('XU'|'U') until)?   right associative
    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.peek_ident("XU") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Formula::next_until(lhs, rhs));
        }
        if self.peek_ident("U") {
            self.bump();
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if matches!(self.peek(), Some((_, Token::Bang))) {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        for (name, build) in [
            ("X", Formula::next as fn(Formula) -> Formula),
            ("F", Formula::finally),
            ("G", Formula::globally),
        ] {
            if self.peek_ident(name) {
                self.bump();
                return Ok(build(self.unary()?));
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.bump() {
            Some((_, Token::LParen)) => {
                let inner = self.implies()?;
                match self.bump() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((col, _)) => Err(syntax(col, "expected `)`")),
                    None => Err(syntax(self.end_position(), "expected `)`")),
                }
            }
            Some((col, Token::Ident(id))) => match id.as_str() {
                "tt" => Ok(Formula::Top),
                "ff" => Ok(Formula::bottom()),
                "XU" | "U" | "X" | "F" | "G" => {
                    Err(syntax(col, &format!("`{id}` needs an operand")))
                }
                name => self
                    .alphabet
                    .index_of(name)
                    .map(Formula::letter)
                    .ok_or_else(|| syntax(col, &format!("unknown atom `{name}`"))),
            },
            Some((col, tok)) => Err(syntax(col, &format!("unexpected token `{tok:?}`"))),
            None => Err(syntax(self.end_position(), "unexpected end of formula")),
        }
    }
}

/// Parses a formula over the given alphabet into core form. Error positions
/// are 1-based character columns.
pub fn parse_ltl(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    let lexer = lex(text)?;
    let mut parser = Parser {
        tokens: lexer.tokens,
        pos: 0,
        alphabet,
    };
    let formula = parser.implies()?;
    if let Some((col, tok)) = parser.peek() {
        return Err(syntax(*col, &format!("trailing input at `{tok:?}`")));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn core_forms() {
        let f = parse_ltl("a XU b", &ab()).unwrap();
        assert_eq!(
            f,
            Formula::next_until(Formula::letter(0), Formula::letter(1))
        );
        let f = parse_ltl("X b", &ab()).unwrap();
        assert_eq!(f, Formula::next(Formula::letter(1)));
        let f = parse_ltl("a U b", &ab()).unwrap();
        assert_eq!(f, Formula::until(Formula::letter(0), Formula::letter(1)));
    }

    #[test]
    fn precedence() {
        // -> binds loosest, unary tightest
        let f = parse_ltl("!a | b -> c XU a & b", &Alphabet::from_chars("abc").unwrap()).unwrap();
        let abc = Alphabet::from_chars("abc").unwrap();
        let expected = Formula::implies(
            Formula::or(Formula::not(Formula::letter(0)), Formula::letter(1)),
            Formula::and(
                Formula::next_until(Formula::letter(2), Formula::letter(0)),
                Formula::letter(1),
            ),
        );
        assert_eq!(f, expected);
        // U is right associative
        let f = parse_ltl("a U b U c", &abc).unwrap();
        assert_eq!(
            f,
            Formula::until(
                Formula::letter(0),
                Formula::until(Formula::letter(1), Formula::letter(2))
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_ltl("a XU", &ab()) {
            Err(Error::Parse { line, .. }) => assert!(line >= 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_ltl("a XU c", &ab()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 6);
                assert!(message.contains("unknown atom"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
