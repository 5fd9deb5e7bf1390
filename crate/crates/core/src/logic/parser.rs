//! Recursive-descent parser for propositional formulas.
//!
//! ```text
//! iff     := implies ( "<->" implies )*     left-associative
//! implies := or ( "->" implies )?           right-associative
//! or      := and ( "|" and )*               left-associative
//! and     := unary ( "&" unary )*           left-associative
//! unary   := "~" unary | "true" | "false" | ident | "(" iff ")"
//! ident   := [A-Za-z_][A-Za-z0-9_']*
//! ```
//!
//! Parsing is faithful: no simplification, no reassociation. Errors carry
//! the byte offset of the offending token.

use super::Formula;
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> &str {
        match self {
            Tok::Ident(s) => s,
            Tok::True => "true",
            Tok::False => "false",
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Iff => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '~' => {
                i += 1;
                Tok::Not
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Implies
                } else {
                    return Err(ParseError::new(start, "expected `->`"));
                }
            }
            '<' => {
                if text[i..].starts_with("<->") {
                    i += 3;
                    Tok::Iff
                } else {
                    return Err(ParseError::new(start, "expected `<->`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = &text[i..j];
                i = j;
                match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            other => {
                return Err(ParseError::new(start, format!("unexpected character `{other}`")))
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

pub(super) fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, input_len: text.len() };
    let f = p.iff()?;
    if let Some((tok, off)) = p.peek() {
        return Err(ParseError::new(off, format!("unexpected `{}`", tok.text())));
    }
    Ok(f)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(&Tok, usize)> {
        self.toks.get(self.pos).map(|(t, o)| (t, *o))
    }

    fn advance(&mut self) -> Option<(Tok, usize)> {
        let item = self.toks.get(self.pos).cloned();
        if item.is_some() {
            self.pos += 1;
        }
        item
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek().map(|(tok, _)| tok == t).unwrap_or(false) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            f = Formula::Iff(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let f = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::Implies(Box::new(f), Box::new(rhs)));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.advance() {
            None => Err(ParseError::new(self.input_len, "unexpected end of input")),
            Some((Tok::Not, _)) => Ok(Formula::Not(Box::new(self.unary()?))),
            Some((Tok::True, _)) => Ok(Formula::True),
            Some((Tok::False, _)) => Ok(Formula::False),
            Some((Tok::Ident(name), _)) => Ok(Formula::Atom(name)),
            Some((Tok::LParen, open)) => {
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    let off = self.peek().map(|(_, o)| o).unwrap_or(self.input_len);
                    return Err(ParseError::new(
                        off,
                        format!("expected `)` to close `(` at offset {open}"),
                    ));
                }
                Ok(f)
            }
            Some((tok, off)) => {
                Err(ParseError::new(off, format!("expected an operand, found `{}`", tok.text())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Formula {
        Formula::Atom(s.to_string())
    }

    #[test]
    fn precedence_binds_as_documented() {
        // ~ binds tighter than &, & tighter than |, | tighter than ->,
        // -> tighter than <->.
        let f = parse("~p & q | r -> s <-> t").unwrap();
        let expect = Formula::Iff(
            Box::new(Formula::Implies(
                Box::new(Formula::Or(
                    Box::new(Formula::And(
                        Box::new(Formula::Not(Box::new(atom("p")))),
                        Box::new(atom("q")),
                    )),
                    Box::new(atom("r")),
                )),
                Box::new(atom("s")),
            )),
            Box::new(atom("t")),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse("p -> q -> r").unwrap();
        let expect = Formula::Implies(
            Box::new(atom("p")),
            Box::new(Formula::Implies(Box::new(atom("q")), Box::new(atom("r")))),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn conjunction_and_biconditional_are_left_associative() {
        let f = parse("p & q & r").unwrap();
        let expect = Formula::And(
            Box::new(Formula::And(Box::new(atom("p")), Box::new(atom("q")))),
            Box::new(atom("r")),
        );
        assert_eq!(f, expect);

        let g = parse("p <-> q <-> r").unwrap();
        let expect_g = Formula::Iff(
            Box::new(Formula::Iff(Box::new(atom("p")), Box::new(atom("q")))),
            Box::new(atom("r")),
        );
        assert_eq!(g, expect_g);
    }

    #[test]
    fn parentheses_override_and_nest() {
        let f = parse("(p | q) & r").unwrap();
        let expect = Formula::And(
            Box::new(Formula::Or(Box::new(atom("p")), Box::new(atom("q")))),
            Box::new(atom("r")),
        );
        assert_eq!(f, expect);
        assert_eq!(parse("((p))").unwrap(), atom("p"));
    }

    #[test]
    fn constants_and_primed_identifiers() {
        assert_eq!(parse("true").unwrap(), Formula::True);
        assert_eq!(parse("false").unwrap(), Formula::False);
        assert_eq!(parse("q'").unwrap(), atom("q'"));
        assert_eq!(parse("_x1'").unwrap(), atom("_x1'"));
    }

    #[test]
    fn double_operator_reports_its_offset() {
        let err = parse("p & & q").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.message.contains("operand"));
    }

    #[test]
    fn unbalanced_parenthesis_is_reported() {
        let err = parse("(p & q").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.message.contains(")"));
        assert!(parse("p & q)").is_err());
    }

    #[test]
    fn dangling_operator_and_eof() {
        let err = parse("p &").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(parse("").is_err());
        assert!(parse("->").is_err());
    }

    #[test]
    fn stray_characters_are_lexical_errors() {
        let err = parse("p + q").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse("p <- q").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse("p - q").unwrap_err();
        assert_eq!(err.offset, 2);
    }
}
