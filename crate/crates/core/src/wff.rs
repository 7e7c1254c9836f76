//! Well-formed formulas over the generator alphabet: letters, concatenation and
//! the loop `^(w+*)`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wff {
    Empty,
    Letter(String),
    /// At least two factors, none of them `Concat` or `Empty`.
    Concat(Vec<Wff>),
    /// The body is never a proper power.
    Loop(Box<Wff>),
}

impl Wff {
    pub fn letter(name: impl Into<String>) -> Wff {
        Wff::Letter(name.into())
    }

    pub fn concat(items: impl IntoIterator<Item = Wff>) -> Wff {
        let mut flat = Vec::new();
        for w in items {
            match w {
                Wff::Empty => {}
                Wff::Concat(v) => flat.extend(v),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Wff::Empty,
            1 => flat.pop().unwrap(),
            _ => Wff::Concat(flat),
        }
    }

    /// `body^(w+*)` with the root of `body` extracted.
    pub fn looped(body: Wff) -> Wff {
        let terms = body.factors();
        if terms.is_empty() {
            return Wff::Empty;
        }
        let n = terms.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| terms[i] == terms[i % p]))
            .unwrap_or(n);
        Wff::Loop(Box::new(Wff::concat(terms[..period].iter().cloned())))
    }

    pub fn factors(&self) -> Vec<Wff> {
        match self {
            Wff::Empty => Vec::new(),
            Wff::Concat(v) => v.clone(),
            other => vec![other.clone()],
        }
    }

    /// Letters in order of first occurrence.
    pub fn letters(&self) -> Vec<&str> {
        fn walk<'a>(w: &'a Wff, out: &mut Vec<&'a str>) {
            match w {
                Wff::Empty => {}
                Wff::Letter(x) => {
                    if !out.contains(&x.as_str()) {
                        out.push(x);
                    }
                }
                Wff::Concat(v) => v.iter().for_each(|x| walk(x, out)),
                Wff::Loop(b) => walk(b, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn parse(text: &str) -> Result<Wff> {
        let mut p = Parser { src: text, pos: 0 };
        let w = p.expr()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(Error::parse(p.pos, format!("unexpected `{}`", p.peek().unwrap_or(' '))));
        }
        Ok(w)
    }
}

impl fmt::Display for Wff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wff::Empty => f.write_str("ε"),
            Wff::Letter(x) => f.write_str(x),
            Wff::Concat(v) => {
                for (i, w) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            Wff::Loop(b) => match b.as_ref() {
                Wff::Letter(x) => write!(f, "{x}^(w+*)"),
                other => write!(f, "({other})^(w+*)"),
            },
        }
    }
}

const LOOP_MARKS: [&str; 5] = ["^(w+*)", "^(ω+*)", "^{w+*}", "^{ω+*}", "^ω+*"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == ';' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<Wff> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => break,
                _ => items.push(self.item()?),
            }
        }
        Ok(Wff::concat(items))
    }

    fn item(&mut self) -> Result<Wff> {
        let start = self.pos;
        let mut atom = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some('^') => return Err(Error::parse(start, "loop marker without a body")),
            _ => {
                let len: usize = self
                    .rest()
                    .chars()
                    .take_while(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ';' | '^'))
                    .map(char::len_utf8)
                    .sum();
                let name = &self.src[start..start + len];
                self.pos += len;
                if name == "ε" {
                    Wff::Empty
                } else {
                    Wff::letter(name)
                }
            }
        };
        while self.peek() == Some('^') {
            let mark = LOOP_MARKS
                .iter()
                .find(|m| self.rest().starts_with(*m))
                .ok_or_else(|| Error::parse(self.pos, "expected `^(w+*)`"))?;
            self.pos += mark.len();
            atom = Wff::looped(atom);
        }
        Ok(atom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_extracted() {
        assert_eq!(Wff::parse("(x x)^(w+*)").unwrap(), Wff::parse("x^(w+*)").unwrap());
        assert_eq!(Wff::parse("(a b a b)^(w+*)").unwrap().to_string(), "(a b)^(w+*)");
        assert_eq!(Wff::parse("(a b a)^(w+*)").unwrap().to_string(), "(a b a)^(w+*)");
    }

    #[test]
    fn scripts_parse() {
        let w = Wff::parse("a^(w+*) ; b ; a^(w+*) ; b").unwrap();
        assert_eq!(w.factors().len(), 4);
        assert_eq!(w.letters(), vec!["a", "b"]);
        assert_eq!(Wff::parse("").unwrap(), Wff::Empty);
        assert_eq!(Wff::parse("sigma^(ω+*) r").unwrap().to_string(), "sigma^(w+*) r");
    }

    #[test]
    fn errors_carry_positions() {
        match Wff::parse("a (b c") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Wff::parse("a)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(Wff::parse("a^x"), Err(Error::Parse { pos: 1, .. })));
    }
}
