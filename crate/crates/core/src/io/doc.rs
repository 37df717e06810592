use std::fmt::Write as _;

use thiserror::Error;

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl SyntaxError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// One `key = value` line. `col` points at the first character of the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    pub col: usize,
}

impl Entry {
    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.line, self.col, msg)
    }

    /// Whitespace separated tokens with their columns.
    pub fn tokens(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.value.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s, &self.value[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, &self.value[s..]));
        }
        out.into_iter()
            .map(|(i, t)| (self.col + self.value[..i].chars().count(), t))
            .collect()
    }

    pub fn usizes(&self) -> Result<Vec<usize>, SyntaxError> {
        self.tokens()
            .into_iter()
            .map(|(col, t)| {
                t.parse()
                    .map_err(|_| SyntaxError::new(self.line, col, format!("expected a nonnegative integer, found {t:?}")))
            })
            .collect()
    }

    pub fn usize(&self) -> Result<usize, SyntaxError> {
        match self.usizes()?.as_slice() {
            [n] => Ok(*n),
            _ => Err(self.error("expected one integer")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<Entry>,
    pub line: usize,
}

impl Section {
    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.line, 1, msg)
    }

    /// Rejects any key outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), SyntaxError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(SyntaxError::new(
                e.line,
                1,
                format!("unknown key {:?} in [{}]", e.key, self.name),
            )),
            None => Ok(()),
        }
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }

    /// The single entry with this key.
    pub fn one<'a>(&'a self, key: &'a str) -> Result<&'a Entry, SyntaxError> {
        let mut it = self.all(key);
        match (it.next(), it.next()) {
            (Some(e), None) => Ok(e),
            (None, _) => Err(self.error(format!("[{}] is missing {key:?}", self.name))),
            (Some(_), Some(d)) => Err(SyntaxError::new(d.line, 1, format!("duplicate key {key:?}"))),
        }
    }
}

/// A versioned document: header `rcurv <kind> <version>`, then `[section]`
/// headers each followed by `key = value` lines. `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub kind: String,
    pub version: u32,
    pub sections: Vec<Section>,
}

pub const VERSION: u32 = 1;

impl Document {
    pub fn new(kind: &str) -> Self {
        Document {
            kind: kind.to_string(),
            version: VERSION,
            sections: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Document, SyntaxError> {
        let mut doc: Option<Document> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let content = body.trim();
            if content.is_empty() {
                continue;
            }
            let indent = body.chars().take_while(|c| c.is_whitespace()).count();
            let col = indent + 1;
            let Some(doc) = doc.as_mut() else {
                doc = Some(parse_header(content, line, col)?);
                continue;
            };
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| SyntaxError::new(line, col + content.chars().count(), "expected ']'"))?
                    .trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(SyntaxError::new(line, col + 1, "bad section name"));
                }
                if doc.sections.iter().any(|s| s.name == name) {
                    return Err(SyntaxError::new(line, col + 1, format!("duplicate section [{name}]")));
                }
                doc.sections.push(Section {
                    name: name.to_string(),
                    entries: Vec::new(),
                    line,
                });
                continue;
            }
            let section = doc
                .sections
                .last_mut()
                .ok_or_else(|| SyntaxError::new(line, col, "entry before the first section"))?;
            let eq = content
                .find('=')
                .ok_or_else(|| SyntaxError::new(line, col, "expected 'key = value'"))?;
            let key = content[..eq].trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(SyntaxError::new(line, col, "bad key"));
            }
            let after = &content[eq + 1..];
            let lead = after.chars().take_while(|c| c.is_whitespace()).count();
            section.entries.push(Entry {
                key: key.to_string(),
                value: after.trim().to_string(),
                line,
                col: col + content[..eq + 1].chars().count() + lead,
            });
        }
        doc.ok_or_else(|| SyntaxError::new(1, 1, "empty document"))
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Section, SyntaxError> {
        self.section(name)
            .ok_or_else(|| SyntaxError::new(1, 1, format!("missing section [{name}]")))
    }

    /// Rejects sections outside `allowed`.
    pub fn check_sections(&self, allowed: &[&str]) -> Result<(), SyntaxError> {
        match self.sections.iter().find(|s| !allowed.contains(&s.name.as_str())) {
            Some(s) => Err(SyntaxError::new(
                s.line,
                2,
                format!("unknown section [{}] in a {} document", s.name, self.kind),
            )),
            None => Ok(()),
        }
    }

    pub fn expect_kind(&self, kind: &str) -> Result<(), SyntaxError> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(SyntaxError::new(1, 7, format!("expected a {kind} document, found {}", self.kind)))
        }
    }

    pub fn push(&mut self, name: &str) -> &mut Section {
        self.sections.push(Section {
            name: name.to_string(),
            entries: Vec::new(),
            line: 0,
        });
        self.sections.last_mut().expect("just pushed")
    }

    pub fn render(&self) -> String {
        let mut out = format!("rcurv {} {}\n", self.kind, self.version);
        for s in &self.sections {
            let _ = writeln!(out, "[{}]", s.name);
            for e in &s.entries {
                if e.value.is_empty() {
                    let _ = writeln!(out, "{} =", e.key);
                } else {
                    let _ = writeln!(out, "{} = {}", e.key, e.value);
                }
            }
        }
        out
    }
}

impl Section {
    pub fn put(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.entries.push(Entry {
            key: key.to_string(),
            value: value.into(),
            line: 0,
            col: 0,
        });
        self
    }
}

fn parse_header(content: &str, line: usize, col: usize) -> Result<Document, SyntaxError> {
    let words: Vec<&str> = content.split_whitespace().collect();
    match words.as_slice() {
        ["rcurv", kind, version] => {
            let version: u32 = version
                .parse()
                .map_err(|_| SyntaxError::new(line, col, format!("bad version {version:?}")))?;
            if version != VERSION {
                return Err(SyntaxError::new(line, col, format!("unsupported version {version}")));
            }
            Ok(Document {
                kind: kind.to_string(),
                version,
                sections: Vec::new(),
            })
        }
        _ => Err(SyntaxError::new(line, col, "expected header 'rcurv <kind> <version>'")),
    }
}

/// Space separated integers.
pub fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
