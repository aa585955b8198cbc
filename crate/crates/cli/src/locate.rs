//! Source positions of JSON values, keyed by path (`phi[1][0]`,
//! `frame.vectors[2][1]`, `symbols[0].name`).
//!
//! Only run on text that `serde_json` has already accepted, so the scanner
//! can be permissive about malformed input.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

#[derive(Debug, Default)]
pub struct SourceMap {
    positions: HashMap<String, Position>,
}

impl SourceMap {
    pub fn build(src: &str) -> Self {
        let mut s = Scanner {
            chars: src.chars().collect(),
            at: 0,
            line: 1,
            column: 1,
            map: SourceMap::default(),
        };
        s.skip_ws();
        s.value(String::new());
        s.map
    }

    /// Position of the value at `path`, or of its closest recorded ancestor.
    pub fn find(&self, path: &str) -> Option<Position> {
        let mut p = path;
        loop {
            if let Some(pos) = self.positions.get(p) {
                return Some(*pos);
            }
            let cut = p.rfind(['.', '['])?;
            p = &p[..cut];
        }
    }
}

struct Scanner {
    chars: Vec<char>,
    at: usize,
    line: usize,
    column: usize,
    map: SourceMap,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn value(&mut self, path: String) {
        let pos = Position {
            line: self.line,
            column: self.column,
        };
        self.map.positions.insert(path.clone(), pos);
        match self.peek() {
            Some('{') => {
                self.bump();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some('"') => {
                            let key = self.string();
                            self.skip_ws();
                            self.bump(); // ':'
                            self.skip_ws();
                            let child = if path.is_empty() {
                                key
                            } else {
                                format!("{path}.{key}")
                            };
                            self.value(child);
                            self.skip_ws();
                            if self.peek() == Some(',') {
                                self.bump();
                            }
                        }
                        Some(_) => {
                            self.bump();
                            break;
                        }
                        None => break,
                    }
                }
            }
            Some('[') => {
                self.bump();
                let mut index = 0;
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(']') | None => {
                            self.bump();
                            break;
                        }
                        Some(_) => {
                            self.value(format!("{path}[{index}]"));
                            index += 1;
                            self.skip_ws();
                            if self.peek() == Some(',') {
                                self.bump();
                            }
                        }
                    }
                }
            }
            Some('"') => {
                self.string();
            }
            _ => {
                while self
                    .peek()
                    .is_some_and(|c| !c.is_whitespace() && !matches!(c, ',' | ']' | '}'))
                {
                    self.bump();
                }
            }
        }
    }

    fn string(&mut self) -> String {
        let mut out = String::new();
        self.bump();
        while let Some(c) = self.bump() {
            match c {
                '"' => break,
                '\\' => {
                    if let Some(e) = self.bump() {
                        out.push(e);
                    }
                }
                c => out.push(c),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_paths() {
        let src = "{\n  \"phi\": [[\"0\", \"1\"],\n          [\"x\"]],\n  \"frame\": {\"vectors\": [[\"2/x\"]]}\n}";
        let m = SourceMap::build(src);
        assert_eq!(
            m.find("phi[1][0]"),
            Some(Position {
                line: 3,
                column: 12
            })
        );
        assert_eq!(
            m.find("frame.vectors[0][0]"),
            Some(Position {
                line: 4,
                column: 26
            })
        );
        assert_eq!(m.find("phi[1][7]"), m.find("phi[1]"));
        assert_eq!(m.find("nope"), None);
    }
}
