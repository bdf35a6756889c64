//! Line-oriented documents made of `[section]` headers followed by entries.
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub text: String,
}

impl Line {
    /// Splits `key = value`; the value keeps its column offset for error
    /// positions.
    pub fn key_value(&self) -> Option<(&str, &str, usize)> {
        let eq = self.text.find('=')?;
        let key = self.text[..eq].trim();
        let rest = &self.text[eq + 1..];
        let value = rest.trim_start();
        let offset = eq + 1 + (rest.len() - value.len());
        Some((key, value.trim_end(), offset))
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column: 1,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub lines: Vec<Line>,
}

impl Section {
    /// The value of `key`, with its line and column offset.
    pub fn get(&self, key: &str) -> Option<(&Line, &str, usize)> {
        self.lines.iter().find_map(|l| match l.key_value() {
            Some((k, v, off)) if k == key => Some((l, v, off)),
            _ => None,
        })
    }

    pub fn require(&self, key: &str) -> Result<(&Line, &str, usize)> {
        self.get(key).ok_or_else(|| Error::Parse {
            line: self.line,
            column: 1,
            message: format!("section [{}] is missing `{key}`", self.name),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let number = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
                    line: number,
                    column: raw.len(),
                    message: "unterminated section header".into(),
                })?;
                if sections.iter().any(|s| s.name == name) {
                    return Err(Error::Parse {
                        line: number,
                        column: 1,
                        message: format!("duplicate section [{name}]"),
                    });
                }
                sections.push(Section {
                    name: name.trim().to_string(),
                    line: number,
                    lines: Vec::new(),
                });
                continue;
            }
            let Some(current) = sections.last_mut() else {
                return Err(Error::Parse {
                    line: number,
                    column: 1,
                    message: "content before the first section header".into(),
                });
            };
            current.lines.push(Line {
                number,
                text: raw.trim_end().to_string(),
            });
        }
        Ok(Document { sections })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("missing section [{name}]"),
        })
    }

    /// Fails on sections outside `known`.
    pub fn only(&self, known: &[&str]) -> Result<()> {
        for s in &self.sections {
            if !known.contains(&s.name.as_str()) {
                return Err(Error::Parse {
                    line: s.line,
                    column: 1,
                    message: format!("unknown section [{}]", s.name),
                });
            }
        }
        Ok(())
    }
}

/// Comma-separated identifiers.
pub fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Runs a parser on a piece of a line, shifting error positions to the line.
pub fn at<T>(line: &Line, offset: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.at_line(line.number, offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_positions() {
        let doc = Document::parse("# c\n[a]\nk = v1\n\n[b]\nplain line\n").unwrap();
        assert_eq!(doc.sections.len(), 2);
        let (line, v, off) = doc.section("a").unwrap().get("k").unwrap();
        assert_eq!((line.number, v, off), (3, "v1", 4));
        assert_eq!(doc.section("b").unwrap().lines[0].text, "plain line");
        assert!(matches!(Document::parse("x\n[a]"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Document::parse("[a]\n[a]"), Err(Error::Parse { line: 2, .. })));
    }
}
