use super::{Diagnostic, SourcePos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    /// `<>`
    Diamond,
    Lt,
    Gt,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub(crate) fn symbol(&self) -> &'static str {
        match self {
            Tok::Ident(_) => "identifier",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Diamond => "<>",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: SourcePos,
}

/// Splits `text` into tokens. Unknown characters are reported and skipped;
/// the token list always ends with `Eof`, positioned on the last character
/// of the input (or 1:1 for empty input).
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let chars: Vec<char> = text.chars().collect();
    let mut positions = Vec::with_capacity(chars.len());
    let (mut line, mut col) = (1, 1);
    for &c in &chars {
        positions.push(SourcePos { line, column: col });
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    let eof_pos = positions.last().copied().unwrap_or(SourcePos { line: 1, column: 1 });

    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = positions[i];
        let next = chars.get(i + 1).copied();
        let mut push = |tok: Tok, len: usize| {
            tokens.push(Token { tok, pos });
            len
        };
        let len = match c {
            c if c.is_whitespace() => 1,
            '#' => chars[i..].iter().take_while(|&&c| c != '\n').count(),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == '_').count();
                push(Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            '~' => push(Tok::Tilde, 1),
            '&' => push(Tok::Amp, 1),
            '|' => push(Tok::Bar, 1),
            '{' => push(Tok::LBrace, 1),
            '}' => push(Tok::RBrace, 1),
            '[' => push(Tok::LBracket, 1),
            ']' => push(Tok::RBracket, 1),
            '(' => push(Tok::LParen, 1),
            ')' => push(Tok::RParen, 1),
            ',' => push(Tok::Comma, 1),
            ':' => push(Tok::Colon, 1),
            '>' => push(Tok::Gt, 1),
            '-' if next == Some('>') => push(Tok::Arrow, 2),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => push(Tok::DoubleArrow, 3),
            '<' if next == Some('>') => push(Tok::Diamond, 2),
            '<' => push(Tok::Lt, 1),
            other => {
                diags.push(Diagnostic::new(pos, format!("unexpected character `{}`", other.escape_debug())));
                1
            }
        };
        i += len.max(1);
    }
    tokens.push(Token { tok: Tok::Eof, pos: eof_pos });
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        lex(text).0.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_diamonds() {
        assert_eq!(
            kinds("p <-> q -> <> <av>"),
            vec![
                Tok::Ident("p".into()),
                Tok::DoubleArrow,
                Tok::Ident("q".into()),
                Tok::Arrow,
                Tok::Diamond,
                Tok::Lt,
                Tok::Ident("av".into()),
                Tok::Gt,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let (toks, diags) = lex("# note\n  p $");
        assert_eq!(toks[0].tok, Tok::Ident("p".into()));
        assert_eq!(toks[0].pos, SourcePos { line: 2, column: 3 });
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].pos, SourcePos { line: 2, column: 5 });
        assert_eq!(toks[1].pos, SourcePos { line: 2, column: 5 });
    }
}
