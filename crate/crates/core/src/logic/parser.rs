//! Recursive-descent parser for the formula language:
//!
//! ```text
//! formula := quant | impl
//! quant   := ("forall" | "exists") IDENT "." formula
//! impl    := or ("->" (quant | impl))?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | atom
//! atom    := IDENT ("<=" | "=") IDENT
//! ```

use super::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Dot,
    Arrow,
    Bar,
    Amp,
    Bang,
    LParen,
    RParen,
    Le,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'.' => Tok::Dot,
            b'|' => Tok::Bar,
            b'&' => Tok::Amp,
            b'!' => Tok::Bang,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::Le
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    word => Tok::Ident(word.to_owned()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(FormulaError::Syntax {
                    position: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> FormulaError {
        FormulaError::Syntax {
            position: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quant(),
            _ => self.implication(),
        }
    }

    fn quant(&mut self) -> Result<Formula, FormulaError> {
        let universal = self.bump() == Tok::Forall;
        let var = self.ident()?;
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = match self.peek() {
                Tok::Forall | Tok::Exists => self.quant()?,
                _ => self.implication()?,
            };
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(_) => {
                let a = self.ident()?;
                let is_le = match self.peek() {
                    Tok::Le => true,
                    Tok::Eq => false,
                    _ => return Err(self.error("`<=` or `=`")),
                };
                self.bump();
                let b = self.ident()?;
                Ok(if is_le {
                    Formula::le(a, b)
                } else {
                    Formula::eq(a, b)
                })
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a formula. Open formulas are accepted; free variables are not an
/// error.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(
            parse("forall u . exists t . u <= t").unwrap(),
            Formula::forall("u", Formula::exists("t", Formula::le("u", "t")))
        );
        assert_eq!(
            parse("!(x = y) & x <= y").unwrap(),
            Formula::eq("x", "y").not().and(Formula::le("x", "y"))
        );
        assert_eq!(
            parse("a <= b -> c = d").unwrap(),
            Formula::le("a", "b").not().or(Formula::eq("c", "d"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a <= b | c <= d & !e = f -> g <= h -> i <= j").unwrap();
        let lhs = Formula::le("a", "b").or(Formula::le("c", "d").and(Formula::eq("e", "f").not()));
        let rhs = Formula::le("g", "h").implies(Formula::le("i", "j"));
        assert_eq!(f, lhs.implies(rhs));
        assert_eq!(
            parse("a = a | b = b | c = c").unwrap(),
            Formula::eq("a", "a").or(Formula::eq("b", "b")).or(Formula::eq("c", "c"))
        );
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse("forall x . x <= y & y <= x").unwrap();
        assert_eq!(
            f,
            Formula::forall("x", Formula::le("x", "y").and(Formula::le("y", "x")))
        );
        let g = parse("x = x -> exists y . y <= x | x <= y").unwrap();
        assert_eq!(
            g,
            Formula::eq("x", "x").implies(Formula::exists("y", Formula::le("y", "x").or(Formula::le("x", "y"))))
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("x <= ", 5),
            ("forall . x = x", 7),
            ("x < y", 2),
            ("(x = y", 6),
            ("x = y)", 5),
            ("x = y & forall z . z = z", 8),
            ("x", 1),
            ("!forall x . x = x", 1),
        ];
        for (text, position) in cases {
            match parse(text) {
                Err(FormulaError::Syntax { position: p, .. }) => assert_eq!(p, position, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn keywords_are_not_variables() {
        assert!(parse("forall = x").is_err());
        assert_eq!(parse("forall_x = x").unwrap(), Formula::eq("forall_x", "x"));
    }
}
