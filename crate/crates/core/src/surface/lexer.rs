use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::surface::ast::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    KwDef,
    KwAxiom,
    KwFun,
    KwType,
    KwRefl,
    KwJ,
    HashCheck,
    HashEval,
    HashAssert,
    Ident(String),
    Nat(u32),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    ColonEq,
    FatArrow,
    Arrow,
    Eq,
    Star,
    StarStar,
    Tilde,
    At,
    Underscore,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::KwDef => "def",
            Token::KwAxiom => "axiom",
            Token::KwFun => "fun",
            Token::KwType => "Type",
            Token::KwRefl => "refl",
            Token::KwJ => "J",
            Token::HashCheck => "#check",
            Token::HashEval => "#eval",
            Token::HashAssert => "#assert",
            Token::Ident(x) => return write!(f, "identifier `{x}`"),
            Token::Nat(n) => return write!(f, "number `{n}`"),
            Token::LParen => "(",
            Token::RParen => ")",
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::Colon => ":",
            Token::ColonEq => ":=",
            Token::FatArrow => "=>",
            Token::Arrow => "->",
            Token::Eq => "=",
            Token::Star => "*",
            Token::StarStar => "**",
            Token::Tilde => "~",
            Token::At => "@",
            Token::Underscore => "_",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub token: Token,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: SourceSpan,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    file: Rc<str>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: (usize, usize, usize)) -> SourceSpan {
        let (pos, line, col) = start;
        SourceSpan {
            file: self.file.clone(),
            start_line: line,
            start_col: col,
            end_line: self.line,
            end_col: self.col,
            start: pos,
            end: self.pos,
        }
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.pos, self.line, self.col)
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(input: &str) -> Result<Vec<Spanned>, LexError> {
    lex_file("<input>", input)
}

/// Splits `input` into tokens. Whitespace and `--` line comments are dropped.
pub fn lex_file(file: &str, input: &str) -> Result<Vec<Spanned>, LexError> {
    let mut cur = Cursor { src: input, file: file.into(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '-' && cur.peek2() == Some('-') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let start = cur.mark();
        let token = if is_ident_start(c) {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                let continues = is_ident_char(c)
                    || (c == '-' && cur.peek2().is_some_and(|d| d.is_ascii_alphanumeric()));
                if !continues {
                    break;
                }
                word.push(c);
                cur.bump();
            }
            match word.as_str() {
                "def" => Token::KwDef,
                "axiom" => Token::KwAxiom,
                "fun" => Token::KwFun,
                "Type" => Token::KwType,
                "refl" => Token::KwRefl,
                "J" => Token::KwJ,
                _ => Token::Ident(word),
            }
        } else if c.is_ascii_digit() {
            let mut n: u32 = 0;
            while let Some(d) = cur.peek().and_then(|c| c.to_digit(10)) {
                n = n.checked_mul(10).and_then(|n| n.checked_add(d)).ok_or_else(|| LexError {
                    span: cur.span_from(start),
                    message: "number literal too large".into(),
                })?;
                cur.bump();
            }
            Token::Nat(n)
        } else if c == '#' {
            cur.bump();
            let mut word = String::new();
            while let Some(c) = cur.peek().filter(|c| c.is_ascii_alphabetic()) {
                word.push(c);
                cur.bump();
            }
            match word.as_str() {
                "check" => Token::HashCheck,
                "eval" => Token::HashEval,
                "assert" => Token::HashAssert,
                _ => {
                    return Err(LexError {
                        span: cur.span_from(start),
                        message: format!("unknown directive `#{word}`"),
                    })
                }
            }
        } else {
            cur.bump();
            match c {
                '(' => Token::LParen,
                ')' => Token::RParen,
                '{' => Token::LBrace,
                '}' => Token::RBrace,
                '~' => Token::Tilde,
                '@' => Token::At,
                '_' => {
                    if cur.peek().is_some_and(is_ident_char) {
                        return Err(LexError {
                            span: cur.span_from(start),
                            message: "identifiers must start with a letter".into(),
                        });
                    }
                    Token::Underscore
                }
                ':' if cur.peek() == Some('=') => {
                    cur.bump();
                    Token::ColonEq
                }
                ':' => Token::Colon,
                '=' if cur.peek() == Some('>') => {
                    cur.bump();
                    Token::FatArrow
                }
                '=' => Token::Eq,
                '-' if cur.peek() == Some('>') => {
                    cur.bump();
                    Token::Arrow
                }
                '*' if cur.peek() == Some('*') => {
                    cur.bump();
                    Token::StarStar
                }
                '*' => Token::Star,
                other => {
                    return Err(LexError {
                        span: cur.span_from(start),
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned { token, span: cur.span_from(start) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Token> {
        lex(s).unwrap().into_iter().map(|t| t.token).collect()
    }

    #[test]
    fn keywords_and_identifiers() {
        assert_eq!(kinds("def id"), vec![Token::KwDef, Token::Ident("id".into())]);
        assert_eq!(kinds("whisk-L-R-1-L x'"), vec![Token::Ident("whisk-L-R-1-L".into()), Token::Ident("x'".into())]);
    }

    #[test]
    fn operators() {
        assert_eq!(kinds("p * q"), vec![Token::Ident("p".into()), Token::Star, Token::Ident("q".into())]);
        assert_eq!(kinds("a->b"), vec![Token::Ident("a".into()), Token::Arrow, Token::Ident("b".into())]);
        assert_eq!(kinds("p ** q := => ~ @f"), vec![
            Token::Ident("p".into()),
            Token::StarStar,
            Token::Ident("q".into()),
            Token::ColonEq,
            Token::FatArrow,
            Token::Tilde,
            Token::At,
            Token::Ident("f".into()),
        ]);
    }

    #[test]
    fn comments_are_dropped() {
        assert_eq!(kinds("a -- comment * q\nb"), vec![Token::Ident("a".into()), Token::Ident("b".into())]);
    }

    #[test]
    fn illegal_character() {
        let err = lex("⟦").unwrap_err();
        assert_eq!((err.span.start_line, err.span.start_col), (1, 1));
        let err = lex("x\n  λ").unwrap_err();
        assert_eq!((err.span.start_line, err.span.start_col), (2, 3));
    }
}
