use super::SpecError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Ident(String),
    /// One of `+ - * / ^`.
    Op(char),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Newline,
    /// Raw right-hand side of a free-text statement (`name = ...`).
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
    /// Width of the token in characters.
    pub len: usize,
}

/// Keys whose right-hand side is taken verbatim instead of tokenized.
const FREE_TEXT_KEYS: [&str; 2] = ["name", "description"];

/// Splits spec text into tokens. Whitespace and `#` comments are dropped;
/// line breaks become [`TokenKind::Newline`].
pub fn tokenize(text: &str) -> Result<Vec<Token>, SpecError> {
    let mut tokens = Vec::new();
    for (line_idx, raw_line) in text.split('\n').enumerate() {
        let line_no = line_idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line_idx > 0 {
            tokens.push(Token {
                kind: TokenKind::Newline,
                line: line_no - 1,
                col: text_len(text.split('\n').nth(line_idx - 1).unwrap_or("")) + 1,
                len: 1,
            });
        }
        tokenize_line(line, line_no, &mut tokens)?;
    }
    Ok(tokens)
}

fn text_len(s: &str) -> usize {
    s.trim_end_matches('\r').chars().count()
}

fn tokenize_line(line: &str, line_no: usize, out: &mut Vec<Token>) -> Result<(), SpecError> {
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;

    if let Some((key_end, eq_pos)) = free_text_prefix(&chars) {
        let start = chars.iter().position(|c| !c.is_whitespace()).unwrap_or(0);
        out.push(Token {
            kind: TokenKind::Ident(chars[start..key_end].iter().collect()),
            line: line_no,
            col: start + 1,
            len: key_end - start,
        });
        out.push(Token { kind: TokenKind::Equals, line: line_no, col: eq_pos + 1, len: 1 });
        let rest: String = chars[eq_pos + 1..].iter().collect();
        let rest = rest.split('#').next().unwrap_or("").trim().to_string();
        out.push(Token { kind: TokenKind::Text(rest), line: line_no, col: eq_pos + 2, len: 1 });
        return Ok(());
    }

    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = |kind| Token { kind, line: line_no, col, len: 1 };
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '#' => break,
            '+' | '-' | '*' | '/' | '^' => {
                out.push(single(TokenKind::Op(c)));
                i += 1;
            }
            '(' => {
                out.push(single(TokenKind::LParen));
                i += 1;
            }
            ')' => {
                out.push(single(TokenKind::RParen));
                i += 1;
            }
            '[' => {
                out.push(single(TokenKind::LBracket));
                i += 1;
            }
            ']' => {
                out.push(single(TokenKind::RBracket));
                i += 1;
            }
            ',' => {
                out.push(single(TokenKind::Comma));
                i += 1;
            }
            '=' => {
                out.push(single(TokenKind::Equals));
                i += 1;
            }
            c if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let end = scan_number(&chars, i);
                let lexeme: String = chars[i..end].iter().collect();
                let value: f64 = lexeme
                    .parse()
                    .map_err(|_| SpecError::Syntax { line: line_no, col, expected: "number".into() })?;
                out.push(Token { kind: TokenKind::Number(value), line: line_no, col, len: end - i });
                i = end;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
                    end += 1;
                }
                out.push(Token {
                    kind: TokenKind::Ident(chars[i..end].iter().collect()),
                    line: line_no,
                    col,
                    len: end - i,
                });
                i = end;
            }
            _ => return Err(SpecError::IllegalCharacter { line: line_no, col, found: c }),
        }
    }
    Ok(())
}

/// If the line is `<free-text key> = ...`, returns (end of key, index of `=`).
fn free_text_prefix(chars: &[char]) -> Option<(usize, usize)> {
    let start = chars.iter().position(|c| !c.is_whitespace())?;
    let mut end = start;
    while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_') {
        end += 1;
    }
    let key: String = chars[start..end].iter().collect();
    if !FREE_TEXT_KEYS.contains(&key.as_str()) {
        return None;
    }
    let eq = end + chars[end..].iter().take_while(|c| c.is_whitespace()).count();
    (chars.get(eq) == Some(&'=')).then_some((end, eq))
}

fn scan_number(chars: &[char], start: usize) -> usize {
    let mut i = start;
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn ident(s: &str) -> TokenKind {
        TokenKind::Ident(s.into())
    }

    #[test]
    fn power_product() {
        assert_eq!(
            kinds("u1^2 * u2"),
            vec![ident("u1"), TokenKind::Op('^'), TokenKind::Number(2.0), TokenKind::Op('*'), ident("u2")]
        );
    }

    #[test]
    fn vector_literal() {
        assert_eq!(
            kinds("x = [u1, u2]"),
            vec![
                ident("x"),
                TokenKind::Equals,
                TokenKind::LBracket,
                ident("u1"),
                TokenKind::Comma,
                ident("u2"),
                TokenKind::RBracket
            ]
        );
    }

    #[test]
    fn comment_is_stripped() {
        assert_eq!(kinds("0.5 # half"), vec![TokenKind::Number(0.5)]);
    }

    #[test]
    fn exponent_literals() {
        assert_eq!(kinds("1e-3 2.5E2"), vec![TokenKind::Number(1e-3), TokenKind::Number(250.0)]);
        assert_eq!(kinds("2e"), vec![TokenKind::Number(2.0), ident("e")]);
    }

    #[test]
    fn illegal_character_is_located() {
        let err = tokenize("n = 2\nx = [u1 $ u2]").unwrap_err();
        assert_eq!(err, SpecError::IllegalCharacter { line: 2, col: 9, found: '$' });
    }

    #[test]
    fn free_text_is_taken_verbatim() {
        let toks = kinds("name = Ellipsoid (a, b) it's fine # note");
        assert_eq!(toks[2], TokenKind::Text("Ellipsoid (a, b) it's fine".into()));
    }

    #[test]
    fn newlines_separate_statements() {
        let toks = tokenize("n = 2\n\nx = 1").unwrap();
        let newlines: Vec<_> = toks.iter().filter(|t| t.kind == TokenKind::Newline).map(|t| t.line).collect();
        assert_eq!(newlines, vec![1, 2]);
    }
}
