//! A minimal XML reader sized for the service report document type:
//! elements, attributes, character data, comments, and the five predefined
//! entities. No namespaces, no DOCTYPE, no CDATA.
//!
//! The reader is deliberately strict — anything outside this subset is
//! reported as not well-formed. Structural (content-model) checking lives
//! in [`crate::report`]; this module only answers "is it XML at all" and
//! produces the tree the validator walks.

use std::fmt;

use thiserror::Error;

/// Well-formedness failure, with the byte offset where reading stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not well-formed at byte {offset}: {message}")]
pub struct XmlError {
    pub message: String,
    pub offset: usize,
}

/// One element: name, attributes in document order, and mixed content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attributes: Vec<(String, String)>,
    pub children: Vec<Content>,
}

/// Mixed content inside an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Content {
    Element(Element),
    Text(String),
}

impl Element {
    pub fn new(name: impl Into<String>) -> Self {
        Element {
            name: name.into(),
            attributes: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Concatenated character data of the direct children.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for child in &self.children {
            if let Content::Text(t) = child {
                out.push_str(t);
            }
        }
        out
    }

    /// Direct child elements, skipping text nodes.
    pub fn child_elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Content::Element(e) => Some(e),
            Content::Text(_) => None,
        })
    }

    /// True if any direct text child contains a non-whitespace character.
    pub fn has_significant_text(&self) -> bool {
        self.children.iter().any(|c| match c {
            Content::Text(t) => !t.trim().is_empty(),
            Content::Element(_) => false,
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}", self.name)?;
        for (k, v) in &self.attributes {
            write!(f, " {}=\"{}\"", k, escape_text(v))?;
        }
        if self.children.is_empty() {
            return write!(f, "></{}>", self.name);
        }
        write!(f, ">")?;
        for child in &self.children {
            match child {
                Content::Element(e) => write!(f, "{e}")?,
                Content::Text(t) => write!(f, "{}", escape_text(t))?,
            }
        }
        write!(f, "</{}>", self.name)
    }
}

/// Escape `&`, `<` and `>` for use as character data.
pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

/// Parse a complete document: optional XML declaration, optional comments,
/// exactly one root element, nothing but whitespace after it.
pub fn parse_document(input: &str) -> Result<Element, XmlError> {
    let (root, consumed) = parse_prefix(input)?;
    let rest = &input[consumed..];
    let mut reader = Reader {
        input,
        pos: consumed,
    };
    reader.skip_misc()?;
    if !rest.trim().is_empty() && reader.pos < input.len() {
        return Err(reader.error("content after document element"));
    }
    Ok(root)
}

/// Parse one document whose root element starts the input (after an optional
/// declaration and comments) and report how many bytes it occupied. Used to
/// carve an XML payload out of a longer line.
pub fn parse_prefix(input: &str) -> Result<(Element, usize), XmlError> {
    let mut reader = Reader { input, pos: 0 };
    reader.skip_declaration()?;
    reader.skip_misc()?;
    let root = reader.parse_element()?;
    Ok((root, reader.pos))
}

/// Length of the balanced document starting at the first byte, or `None`
/// if the input does not begin with one.
pub fn scan_document(input: &str) -> Option<usize> {
    parse_prefix(input).ok().map(|(_, len)| len)
}

struct Reader<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, message: impl Into<String>) -> XmlError {
        XmlError {
            message: message.into(),
            offset: self.pos,
        }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, prefix: &str) -> bool {
        if self.rest().starts_with(prefix) {
            self.pos += prefix.len();
            true
        } else {
            false
        }
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn skip_declaration(&mut self) -> Result<(), XmlError> {
        if self.eat("<?xml") {
            match self.rest().find("?>") {
                Some(i) => self.pos += i + 2,
                None => return Err(self.error("unterminated XML declaration")),
            }
        }
        Ok(())
    }

    fn skip_misc(&mut self) -> Result<(), XmlError> {
        loop {
            self.skip_whitespace();
            if self.eat("<!--") {
                match self.rest().find("-->") {
                    Some(i) => self.pos += i + 3,
                    None => return Err(self.error("unterminated comment")),
                }
            } else {
                return Ok(());
            }
        }
    }

    fn parse_name(&mut self) -> Result<String, XmlError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                self.bump();
            }
            _ => return Err(self.error("expected a name")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')) {
            self.bump();
        }
        Ok(self.input[start..self.pos].to_string())
    }

    fn parse_element(&mut self) -> Result<Element, XmlError> {
        if !self.eat("<") {
            return Err(self.error("expected start tag"));
        }
        let name = self.parse_name()?;
        let mut element = Element::new(name);

        loop {
            self.skip_whitespace();
            match self.peek() {
                Some('/') => {
                    self.bump();
                    if !self.eat(">") {
                        return Err(self.error("expected '>' after '/'"));
                    }
                    return Ok(element);
                }
                Some('>') => {
                    self.bump();
                    break;
                }
                Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                    let attr = self.parse_name()?;
                    if !self.eat("=") {
                        return Err(self.error("expected '=' in attribute"));
                    }
                    let quote = match self.peek() {
                        Some(q @ ('"' | '\'')) => {
                            self.bump();
                            q
                        }
                        _ => return Err(self.error("expected quoted attribute value")),
                    };
                    let mut value = String::new();
                    loop {
                        match self.peek() {
                            Some(c) if c == quote => {
                                self.bump();
                                break;
                            }
                            Some('<') | None => {
                                return Err(self.error("unterminated attribute value"))
                            }
                            Some('&') => value.push(self.parse_entity()?),
                            Some(c) => {
                                value.push(c);
                                self.bump();
                            }
                        }
                    }
                    element.attributes.push((attr, value));
                }
                _ => return Err(self.error("malformed start tag")),
            }
        }

        // Mixed content until the matching end tag.
        let mut text = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error(format!("unclosed element <{}>", element.name))),
                Some('<') => {
                    if !text.is_empty() {
                        element.children.push(Content::Text(std::mem::take(&mut text)));
                    }
                    if self.eat("</") {
                        let end = self.parse_name()?;
                        if end != element.name {
                            return Err(self.error(format!(
                                "mismatched end tag </{end}>, expected </{}>",
                                element.name
                            )));
                        }
                        self.skip_whitespace();
                        if !self.eat(">") {
                            return Err(self.error("expected '>' in end tag"));
                        }
                        return Ok(element);
                    } else if self.eat("<!--") {
                        match self.rest().find("-->") {
                            Some(i) => self.pos += i + 3,
                            None => return Err(self.error("unterminated comment")),
                        }
                    } else if self.rest().starts_with("<!") || self.rest().starts_with("<?") {
                        return Err(self.error("unsupported markup"));
                    } else {
                        let child = self.parse_element()?;
                        element.children.push(Content::Element(child));
                    }
                }
                Some('&') => text.push(self.parse_entity()?),
                Some(c) => {
                    text.push(c);
                    self.bump();
                }
            }
        }
    }

    fn parse_entity(&mut self) -> Result<char, XmlError> {
        debug_assert_eq!(self.peek(), Some('&'));
        let start = self.pos;
        self.bump();
        let semi = match self.rest().find(';') {
            Some(i) if i <= 10 => i,
            _ => {
                self.pos = start;
                return Err(self.error("invalid entity reference"));
            }
        };
        let entity = &self.rest()[..semi];
        let c = match entity {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            _ => {
                self.pos = start;
                return Err(self.error(format!("unknown entity &{entity};")));
            }
        };
        self.pos += semi + 1;
        Ok(c)
    }
}
