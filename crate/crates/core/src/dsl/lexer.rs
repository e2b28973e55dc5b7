use crate::diagnostic::{Diagnostic, SourceSpan};
use crate::model::is_identifier_char;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Str(_) => "string".to_owned(),
            Tok::LBracket => "'['".to_owned(),
            Tok::RBracket => "']'".to_owned(),
            Tok::LBrace => "'{'".to_owned(),
            Tok::RBrace => "'}'".to_owned(),
            Tok::Comma => "','".to_owned(),
            Tok::Equals => "'='".to_owned(),
            Tok::Eof => "end of file".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
    /// First token on its line; statement recovery only resumes at such tokens.
    pub line_start: bool,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens. Always ends with an `Eof` token.
pub(crate) fn lex(file: &str, text: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    let mut last_line = 0;
    let span = |l0, c0, l1, c1| SourceSpan::new(file, l0, c0, l1, c1);

    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() || c == '\u{feff}' {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let line_start = line != last_line;
        let tok = match c {
            '[' | ']' | '{' | '}' | ',' | '=' => {
                cur.bump();
                match c {
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ',' => Tok::Comma,
                    _ => Tok::Equals,
                }
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => {
                            let (el, ec) = (cur.line, cur.col - 1);
                            match cur.peek() {
                                Some(e @ ('"' | '\\')) => {
                                    cur.bump();
                                    s.push(e);
                                }
                                Some('n') => {
                                    cur.bump();
                                    s.push('\n');
                                }
                                Some('t') => {
                                    cur.bump();
                                    s.push('\t');
                                }
                                Some('r') => {
                                    cur.bump();
                                    s.push('\r');
                                }
                                other => {
                                    let shown = other.map_or_else(|| "end of line".to_owned(), |o| format!("'\\{o}'"));
                                    diags.push(Diagnostic::error(
                                        "parse/bad-escape",
                                        format!("unknown escape sequence {shown}"),
                                        span(el, ec, el, ec + 1),
                                    ));
                                    if other.is_some_and(|o| o != '\n') {
                                        s.push(cur.bump().unwrap_or_default());
                                    }
                                }
                            }
                        }
                        '\r' if cur.peek() == Some('\n') => {}
                        c => s.push(c),
                    }
                }
                if !closed {
                    diags.push(Diagnostic::error(
                        "parse/unterminated-string",
                        "unterminated string literal",
                        span(line, col, cur.line, cur.col.saturating_sub(1).max(col)),
                    ));
                }
                Tok::Str(s)
            }
            c if is_identifier_char(c) => {
                let mut s = String::new();
                while let Some(c) = cur.peek().filter(|&c| is_identifier_char(c)) {
                    s.push(c);
                    cur.bump();
                }
                Tok::Ident(s)
            }
            other => {
                cur.bump();
                diags.push(Diagnostic::error(
                    "parse/unexpected-character",
                    format!("unexpected character {other:?}"),
                    span(line, col, line, col),
                ));
                continue;
            }
        };
        last_line = line;
        let end_col = cur.col.saturating_sub(1).max(col);
        out.push(Token {
            tok,
            span: span(line, col, cur.line, end_col),
            line_start,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(cur.line, cur.col, cur.line, cur.col),
        line_start: true,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(text: &str) -> (Vec<Tok>, Vec<Diagnostic>) {
        let mut d = Vec::new();
        let t = lex("t.stpa", text, &mut d).into_iter().map(|t| t.tok).collect();
        (t, d)
    }

    #[test]
    fn lexes_statement_with_unicode_string() {
        let (t, d) = toks("variable Lane of Operator \"Lane\" {\"κ̇ ≠ 0\", \"κ̇ = 0\"} # comment");
        assert!(d.is_empty());
        assert_eq!(t[0], Tok::Ident("variable".into()));
        assert_eq!(t[5], Tok::LBrace);
        assert_eq!(t[6], Tok::Str("κ̇ ≠ 0".into()));
        assert_eq!(*t.last().unwrap(), Tok::Eof);
        assert_eq!(t.len(), 11);
    }

    #[test]
    fn escapes_and_crlf() {
        let (t, d) = toks("loss L-1 \"a \\\"b\\\" \\\\ c\"\r\nloss L-2 \"d\"\r\n");
        assert!(d.is_empty());
        assert_eq!(t[2], Tok::Str("a \"b\" \\ c".into()));
        assert_eq!(t[5], Tok::Str("d".into()));
    }

    #[test]
    fn columns_count_characters() {
        let mut d = Vec::new();
        let t = lex("f", "\"μμ\" x", &mut d);
        assert_eq!(t[0].span.col_end, 4);
        assert_eq!(t[1].span.col_start, 6);
    }

    #[test]
    fn unterminated_string_reports_error() {
        let (_, d) = toks("loss L-1 \"oops\nloss L-2 \"ok\"");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule, "parse/unterminated-string");
        assert_eq!(d[0].span.line_start, 1);
    }

    #[test]
    fn stray_character() {
        let (_, d) = toks("loss L-1 @ \"x\"");
        assert_eq!(d[0].rule, "parse/unexpected-character");
        assert_eq!((d[0].span.line_start, d[0].span.col_start), (1, 10));
    }
}
