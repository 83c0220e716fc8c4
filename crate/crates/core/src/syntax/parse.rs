//! Recursive-descent parser for programs and configurations.
//!
//! ```text
//! program := (IDENT "=" proc ";")* proc
//! proc    := sum ("|" sum)*
//! sum     := res ("+" res)*
//! res     := pre ("\" NAME)*
//! pre     := act ("[" NAT "]")? ("." pre)? | atom
//! act     := NAME | "'" NAME | "tau" | "s" | "s_"
//! atom    := "0" | IDENT | "(" proc ")" | "[" proc "]" "(" proc ")" ("@" ("L"|"R") "[" NAT "]")?
//! ```
//!
//! A bare action `a` abbreviates `a.0`. Keys, `s_` and `@L`/`@R` are only
//! accepted when parsing a configuration.

use std::collections::BTreeMap;

use super::env::DefinitionEnv;
use super::term::{Action, Config, Key, KeyKind, Process, RuntimePrefix};
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(u32),
    Word(String),
    Ident(String),
    Quote,
    Dot,
    Plus,
    Bar,
    Backslash,
    LParen,
    RParen,
    LBrack,
    RBrack,
    At,
    Eq,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Ident(w) => format!("`{w}`"),
            Tok::Quote => "`'`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::At => "`@`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        // line comments
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse::<u32>().map_err(|_| SyntaxError::Parse {
                line: pos.line,
                col: pos.col,
                msg: format!("number `{s}` is too large"),
            })?;
            out.push((Tok::Nat(n), pos));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            let tok = if c.is_ascii_uppercase() {
                Tok::Ident(s)
            } else {
                Tok::Word(s)
            };
            out.push((tok, pos));
            continue;
        }
        let tok = match c {
            '\'' => Tok::Quote,
            '.' => Tok::Dot,
            '+' => Tok::Plus,
            '|' => Tok::Bar,
            '\\' => Tok::Backslash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '@' => Tok::At,
            '=' => Tok::Eq,
            ';' => Tok::Semi,
            other => {
                return Err(SyntaxError::Parse {
                    line: pos.line,
                    col: pos.col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        col += 1;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

fn is_reserved(w: &str) -> bool {
    matches!(w, "s" | "s_" | "tau")
}

enum ActTok {
    Act(Action),
    Ghost,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    keys_allowed: bool,
}

impl Parser {
    fn new(text: &str, keys_allowed: bool) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            keys_allowed,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> SyntaxError {
        let pos = self.toks[self.at].1;
        SyntaxError::Parse {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn program(&mut self) -> Result<(Vec<(String, Process)>, Config), SyntaxError> {
        let mut defs = Vec::new();
        while matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::Eq {
            let Tok::Ident(name) = self.bump() else { unreachable!() };
            self.bump();
            let body = self.par()?;
            let body = body
                .into_process()
                .ok_or_else(|| self.error(format!("definition of `{name}` must be a process")))?;
            self.expect(Tok::Semi)?;
            defs.push((name, body));
        }
        let main = self.par()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok((defs, main))
    }

    fn par(&mut self) -> Result<Config, SyntaxError> {
        let mut acc = self.sum()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.sum()?;
            acc = Config::par(acc, rhs);
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Config, SyntaxError> {
        let mut acc = self.res()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.res()?;
            acc = Config::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn res(&mut self) -> Result<Config, SyntaxError> {
        let mut acc = self.pre()?;
        while *self.peek() == Tok::Backslash {
            self.bump();
            match self.bump() {
                Tok::Word(w) if !is_reserved(&w) => acc = Config::restrict(acc, w),
                _ => {
                    self.at -= 1;
                    return Err(self.unexpected("a channel name after `\\`"));
                }
            }
        }
        Ok(acc)
    }

    fn act(&mut self) -> Result<ActTok, SyntaxError> {
        match self.bump() {
            Tok::Quote => match self.bump() {
                Tok::Word(w) if !is_reserved(&w) => Ok(ActTok::Act(Action::CoName(w))),
                _ => {
                    self.at -= 1;
                    Err(self.unexpected("a channel name after `'`"))
                }
            },
            Tok::Word(w) => Ok(match w.as_str() {
                "tau" => ActTok::Act(Action::Tau),
                "s" => ActTok::Act(Action::Sigma),
                "s_" => ActTok::Ghost,
                _ => ActTok::Act(Action::Name(w)),
            }),
            _ => unreachable!("act called on a non-action token"),
        }
    }

    fn key(&mut self) -> Result<u32, SyntaxError> {
        self.expect(Tok::LBrack)?;
        let n = match self.peek() {
            Tok::Nat(n) => *n,
            _ => return Err(self.unexpected("a key number")),
        };
        self.bump();
        self.expect(Tok::RBrack)?;
        Ok(n)
    }

    fn continuation(&mut self) -> Result<Config, SyntaxError> {
        if *self.peek() == Tok::Dot {
            self.bump();
            self.pre()
        } else {
            Ok(Config::Std(Process::Nil))
        }
    }

    fn pre(&mut self) -> Result<Config, SyntaxError> {
        if !matches!(self.peek(), Tok::Word(_) | Tok::Quote) {
            return self.atom();
        }
        let act = self.act()?;
        if *self.peek() == Tok::LBrack {
            if !self.keys_allowed {
                return Err(self.error("keys are not allowed in a process"));
            }
            let id = self.key()?;
            let rp = match act {
                ActTok::Ghost => RuntimePrefix::Ghost,
                ActTok::Act(Action::Sigma) => RuntimePrefix::SigmaDone,
                ActTok::Act(a) => RuntimePrefix::Act(a),
            };
            let key = Key {
                id,
                kind: rp.key_kind(),
            };
            let cont = self.continuation()?;
            return Ok(Config::keyed(rp, key, cont));
        }
        let ActTok::Act(act) = act else {
            return Err(self.error("a ghost prefix `s_` needs a key, as in `s_[1]`"));
        };
        let cont = self.continuation()?;
        let cont = cont
            .into_process()
            .ok_or_else(|| self.error("an unexecuted prefix cannot guard a configuration with history"))?;
        Ok(Config::Std(Process::prefix(act, cont)))
    }

    fn atom(&mut self) -> Result<Config, SyntaxError> {
        match self.peek().clone() {
            Tok::Nat(0) => {
                self.bump();
                Ok(Config::Std(Process::Nil))
            }
            Tok::Ident(a) => {
                self.bump();
                Ok(Config::Std(Process::Const(a)))
            }
            Tok::LParen => {
                self.bump();
                let x = self.par()?;
                self.expect(Tok::RParen)?;
                Ok(x)
            }
            Tok::LBrack => {
                self.bump();
                let main = self.par()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::LParen)?;
                let alt = self.par()?;
                self.expect(Tok::RParen)?;
                if *self.peek() != Tok::At {
                    return match (main, alt) {
                        (Config::Std(p), Config::Std(q)) => Ok(Config::Std(Process::timeout(p, q))),
                        _ => Err(self.error("an undecorated timeout must have standard branches")),
                    };
                }
                if !self.keys_allowed {
                    return Err(self.error("decorated timeouts are not allowed in a process"));
                }
                self.bump();
                let side = match self.bump() {
                    Tok::Ident(s) if s == "L" || s == "R" => s,
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("`L` or `R` after `@`"));
                    }
                };
                let id = self.key()?;
                if side == "L" {
                    let alt = alt
                        .into_process()
                        .ok_or_else(|| self.error("the alternative of `@L` must be standard"))?;
                    Ok(Config::timeout_l(main, alt, Key::comm(id)))
                } else {
                    let main = main
                        .into_process()
                        .ok_or_else(|| self.error("the main branch of `@R` must be standard"))?;
                    Ok(Config::timeout_r(main, alt, Key::time(id)))
                }
            }
            _ => Err(self.unexpected("a process")),
        }
    }
}

fn check_key_kinds(x: &Config) -> Result<(), SyntaxError> {
    let mut seen: BTreeMap<u32, KeyKind> = BTreeMap::new();
    let mut clash = None;
    x.for_each_key(&mut |k| match seen.get(&k.id) {
        Some(kind) if *kind != k.kind => clash = clash.or(Some(k.id)),
        Some(_) => {}
        None => {
            seen.insert(k.id, k.kind);
        }
    });
    match clash {
        Some(id) => Err(SyntaxError::KeyKindClash(id)),
        None => Ok(()),
    }
}

/// Parses definitions followed by a main process.
pub fn parse_program(text: &str) -> Result<(DefinitionEnv, Process), SyntaxError> {
    let mut parser = Parser::new(text, false)?;
    let (defs, main) = parser.program()?;
    let env = DefinitionEnv::from_definitions(defs)?;
    let main = main.into_process().expect("keys are rejected in process mode");
    env.check_bound(&main)?;
    Ok((env, main))
}

/// Parses a bare process against an existing environment.
pub fn parse_process(text: &str, env: &DefinitionEnv) -> Result<Process, SyntaxError> {
    let x = parse_configuration(text, env)?;
    x.into_process().ok_or(SyntaxError::NotStandard)
}

/// Parses a configuration (keyed syntax allowed) against an environment.
pub fn parse_configuration(text: &str, env: &DefinitionEnv) -> Result<Config, SyntaxError> {
    let mut parser = Parser::new(text, true)?;
    let x = parser.par()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    check_key_kinds(&x)?;
    env.check_bound_config(&x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Action {
        Action::name(n)
    }

    #[test]
    fn nil() {
        let (env, p) = parse_program("0").unwrap();
        assert!(env.is_empty());
        assert_eq!(p, Process::Nil);
    }

    #[test]
    fn choice_with_sigma() {
        let (_, p) = parse_program("a.0 + s.0").unwrap();
        assert_eq!(
            p,
            Process::sum(
                Process::prefix(a("a"), Process::Nil),
                Process::prefix(Action::Sigma, Process::Nil)
            )
        );
    }

    #[test]
    fn definitions_and_timeout() {
        let (env, p) = parse_program("A = a.A; [b.0](0)").unwrap();
        assert_eq!(env.body("A"), Some(&Process::prefix(a("a"), Process::constant("A"))));
        assert_eq!(
            p,
            Process::timeout(Process::prefix(a("b"), Process::Nil), Process::Nil)
        );
        assert_eq!(p.to_string(), "[b.0](0)");
    }

    #[test]
    fn keyed_prefix() {
        let x = parse_configuration("a[1].0", &DefinitionEnv::default()).unwrap();
        assert_eq!(
            x,
            Config::keyed(RuntimePrefix::Act(a("a")), Key::comm(1), Process::Nil.into())
        );
    }

    #[test]
    fn ghost_prefix() {
        let x = parse_configuration("s_[2].a.0", &DefinitionEnv::default()).unwrap();
        assert_eq!(
            x,
            Config::keyed(
                RuntimePrefix::Ghost,
                Key::time(2),
                Process::prefix(a("a"), Process::Nil).into()
            )
        );
    }

    #[test]
    fn right_decorated_timeout() {
        let x = parse_configuration("[a.0](0)@R[5]", &DefinitionEnv::default()).unwrap();
        assert_eq!(
            x,
            Config::timeout_r(Process::prefix(a("a"), Process::Nil), Process::Nil.into(), Key::time(5))
        );
    }

    #[test]
    fn bare_actions_abbreviate_nil_continuations() {
        let (_, p) = parse_program("[(a | 'a)](b)").unwrap();
        assert_eq!(p.to_string(), "[a.0 | 'a.0](b.0)");
    }

    #[test]
    fn precedence_prefix_res_sum_par() {
        let (_, p) = parse_program("a.b.0 \\ b + c.0 | d.0").unwrap();
        let expected = Process::par(
            Process::sum(
                Process::restrict(
                    Process::prefix(a("a"), Process::prefix(a("b"), Process::Nil)),
                    "b",
                ),
                Process::prefix(a("c"), Process::Nil),
            ),
            Process::prefix(a("d"), Process::Nil),
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        let err = parse_program("").unwrap_err();
        assert!(matches!(err, SyntaxError::Parse { line: 1, col: 1, .. }), "{err}");
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_program("a.0 +\n  + b").unwrap_err();
        assert_eq!(
            err,
            SyntaxError::Parse {
                line: 2,
                col: 3,
                msg: "expected a process, found `+`".into()
            }
        );
    }

    #[test]
    fn unbound_constant() {
        assert_eq!(parse_program("a.B").unwrap_err(), SyntaxError::Unbound("B".into()));
    }

    #[test]
    fn unguarded_recursion() {
        assert_eq!(
            parse_program("A = A + a.0; A").unwrap_err(),
            SyntaxError::Unguarded("A".into())
        );
        assert_eq!(
            parse_program("A = [A](0); A").unwrap_err(),
            SyntaxError::Unguarded("A".into())
        );
        assert!(parse_program("A = [a.0](A); A").is_ok());
    }

    #[test]
    fn keys_rejected_in_programs() {
        assert!(parse_program("a[1].0").is_err());
        assert!(parse_program("[a.0](0)@L[1]").is_err());
    }

    #[test]
    fn ghost_needs_key() {
        assert!(parse_configuration("s_.0", &DefinitionEnv::default()).is_err());
    }

    #[test]
    fn clashing_key_kinds() {
        let err = parse_configuration("a[1].0 | s[1].0", &DefinitionEnv::default()).unwrap_err();
        assert_eq!(err, SyntaxError::KeyKindClash(1));
    }

    #[test]
    fn reserved_words_are_not_channels() {
        assert!(parse_program("'s.0").is_err());
        assert!(parse_program("a.0 \\ tau").is_err());
    }
}
