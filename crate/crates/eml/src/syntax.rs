//! Lexing, parsing, and canonical rendering of EML command and
//! acknowledgment lines.
//!
//! The notation is flat and line-oriented: a keyword, a colon, then
//! comma-separated parameters. Acknowledgments use the same shape with an
//! `-ack` keyword and a trailing `True`/`False`. Parsing is total over
//! well-formed lines and rejects everything else with exactly one typed
//! [`SyntaxError`]; rendering produces the canonical spelling that parses
//! back to the same AST.
//!
//! Two lexical extensions keep opaque payloads on one line:
//!
//! * a parameter may be written as a quoted string (`"..."`, with `\"` and
//!   `\\` escapes) so text containing commas survives the comma split;
//! * a parameter starting with `<` is read as one balanced XML document,
//!   so report payloads embed verbatim.

use std::fmt;

use thiserror::Error;

use crate::xml;

/// The ten command keywords, in signature-table order.
pub const KEYWORDS: [&str; 10] = [
    "bind",
    "unbind",
    "update",
    "delete",
    "enable",
    "getClients",
    "grant",
    "createReplica",
    "getInfo",
    "executeSAP",
];

/// Identifies one of the ten commands (and its acknowledgment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommandKind {
    Bind,
    Unbind,
    Update,
    Delete,
    Enable,
    GetClients,
    Grant,
    CreateReplica,
    GetInfo,
    ExecuteSap,
}

impl CommandKind {
    pub const ALL: [CommandKind; 10] = [
        CommandKind::Bind,
        CommandKind::Unbind,
        CommandKind::Update,
        CommandKind::Delete,
        CommandKind::Enable,
        CommandKind::GetClients,
        CommandKind::Grant,
        CommandKind::CreateReplica,
        CommandKind::GetInfo,
        CommandKind::ExecuteSap,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            CommandKind::Bind => "bind",
            CommandKind::Unbind => "unbind",
            CommandKind::Update => "update",
            CommandKind::Delete => "delete",
            CommandKind::Enable => "enable",
            CommandKind::GetClients => "getClients",
            CommandKind::Grant => "grant",
            CommandKind::CreateReplica => "createReplica",
            CommandKind::GetInfo => "getInfo",
            CommandKind::ExecuteSap => "executeSAP",
        }
    }

    pub fn ack_keyword(self) -> &'static str {
        match self {
            CommandKind::Bind => "bind-ack",
            CommandKind::Unbind => "unbind-ack",
            CommandKind::Update => "update-ack",
            CommandKind::Delete => "delete-ack",
            CommandKind::Enable => "enable-ack",
            CommandKind::GetClients => "getClients-ack",
            CommandKind::Grant => "grant-ack",
            CommandKind::CreateReplica => "createReplica-ack",
            CommandKind::GetInfo => "getInfo-ack",
            CommandKind::ExecuteSap => "executeSAP-ack",
        }
    }

    pub fn from_keyword(s: &str) -> Option<CommandKind> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    pub fn from_ack_keyword(s: &str) -> Option<CommandKind> {
        Self::ALL.into_iter().find(|k| k.ack_keyword() == s)
    }

    fn command_arity(self) -> usize {
        match self {
            CommandKind::Unbind
            | CommandKind::Delete
            | CommandKind::GetClients
            | CommandKind::GetInfo => 1,
            _ => 2,
        }
    }

    fn ack_arity(self) -> usize {
        match self {
            CommandKind::GetClients | CommandKind::CreateReplica | CommandKind::GetInfo => 3,
            _ => 2,
        }
    }
}

/// Grant direction for one permission token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermAction {
    Allow,
    Deny,
}

impl PermAction {
    pub fn literal(self) -> &'static str {
        match self {
            PermAction::Allow => "allow",
            PermAction::Deny => "deny",
        }
    }
}

/// A zero-argument self-adaptation procedure reference, e.g.
/// `IncreaseNetBandwidth()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SapCall {
    pub name: String,
}

impl SapCall {
    pub fn new(name: impl Into<String>) -> Self {
        SapCall { name: name.into() }
    }
}

/// A parsed command line. Parameter arity and types are enforced by
/// construction; service IDs are kept as plain integers (`-1` only ever
/// appears in acknowledgments, as the failure sentinel).
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Bind { url: String, wsdl: String },
    Unbind { id: i64 },
    Update { id: i64, wsdl: String },
    Delete { id: i64 },
    Enable { id: i64, enabled: bool },
    GetClients { id: i64 },
    Grant { id: i64, perms: Vec<(String, PermAction)> },
    CreateReplica { id: i64, replica_ip: String },
    GetInfo { id: i64 },
    ExecuteSap { id: i64, call: SapCall },
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Bind { .. } => CommandKind::Bind,
            Command::Unbind { .. } => CommandKind::Unbind,
            Command::Update { .. } => CommandKind::Update,
            Command::Delete { .. } => CommandKind::Delete,
            Command::Enable { .. } => CommandKind::Enable,
            Command::GetClients { .. } => CommandKind::GetClients,
            Command::Grant { .. } => CommandKind::Grant,
            Command::CreateReplica { .. } => CommandKind::CreateReplica,
            Command::GetInfo { .. } => CommandKind::GetInfo,
            Command::ExecuteSap { .. } => CommandKind::ExecuteSap,
        }
    }

    /// The addressed service ID; `None` for `bind`, which has no ID yet.
    pub fn service_id(&self) -> Option<i64> {
        match self {
            Command::Bind { .. } => None,
            Command::Unbind { id }
            | Command::Update { id, .. }
            | Command::Delete { id }
            | Command::Enable { id, .. }
            | Command::GetClients { id }
            | Command::Grant { id, .. }
            | Command::CreateReplica { id, .. }
            | Command::GetInfo { id }
            | Command::ExecuteSap { id, .. } => Some(*id),
        }
    }
}

/// A parsed acknowledgment line. The final `True`/`False` is stored in
/// `ok`; `grant-ack` has no trailing boolean — its success is carried by
/// the per-permission result list.
#[derive(Debug, Clone, PartialEq)]
pub enum Ack {
    Bind { id: i64, ok: bool },
    Unbind { id: i64, ok: bool },
    Update { id: i64, ok: bool },
    Delete { id: i64, ok: bool },
    Enable { id: i64, ok: bool },
    GetClients { id: i64, count: i64, ok: bool },
    Grant { id: i64, results: Vec<(String, bool)> },
    CreateReplica { id: i64, replica_id: i64, ok: bool },
    GetInfo { id: i64, report: Option<String>, ok: bool },
    ExecuteSap { id: i64, ok: bool },
}

impl Ack {
    pub fn kind(&self) -> CommandKind {
        match self {
            Ack::Bind { .. } => CommandKind::Bind,
            Ack::Unbind { .. } => CommandKind::Unbind,
            Ack::Update { .. } => CommandKind::Update,
            Ack::Delete { .. } => CommandKind::Delete,
            Ack::Enable { .. } => CommandKind::Enable,
            Ack::GetClients { .. } => CommandKind::GetClients,
            Ack::Grant { .. } => CommandKind::Grant,
            Ack::CreateReplica { .. } => CommandKind::CreateReplica,
            Ack::GetInfo { .. } => CommandKind::GetInfo,
            Ack::ExecuteSap { .. } => CommandKind::ExecuteSap,
        }
    }

    /// The echoed service ID (for `bind`, the newly assigned or sentinel ID).
    pub fn service_id(&self) -> i64 {
        match self {
            Ack::Bind { id, .. }
            | Ack::Unbind { id, .. }
            | Ack::Update { id, .. }
            | Ack::Delete { id, .. }
            | Ack::Enable { id, .. }
            | Ack::GetClients { id, .. }
            | Ack::Grant { id, .. }
            | Ack::CreateReplica { id, .. }
            | Ack::GetInfo { id, .. }
            | Ack::ExecuteSap { id, .. } => *id,
        }
    }

    /// Overall success. For `grant-ack` this is true when at least one
    /// permission pair succeeded (a failed ack must leave state untouched,
    /// and a partially applied grant has touched it).
    pub fn success(&self) -> bool {
        match self {
            Ack::Bind { ok, .. }
            | Ack::Unbind { ok, .. }
            | Ack::Update { ok, .. }
            | Ack::Delete { ok, .. }
            | Ack::Enable { ok, .. }
            | Ack::GetClients { ok, .. }
            | Ack::CreateReplica { ok, .. }
            | Ack::GetInfo { ok, .. }
            | Ack::ExecuteSap { ok, .. } => *ok,
            Ack::Grant { results, .. } => results.iter().any(|(_, ok)| *ok),
        }
    }
}

/// Everything that can go wrong while reading a line. Exactly one of these
/// is produced per rejected line; the console surfaces `code()` on its
/// `error:` diagnostic lines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("missing ':' after the command name")]
    MissingColon,
    #[error("empty command name")]
    EmptyCommandName,
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("unknown acknowledgment `{0}`")]
    UnknownAck(String),
    #[error("`{keyword}` takes {expected} parameter(s), got {got}")]
    ArityMismatch {
        keyword: String,
        expected: usize,
        got: usize,
    },
    #[error("parameter {index} must be {expected}, got `{got}`")]
    TypeMismatch {
        index: usize,
        expected: &'static str,
        got: String,
    },
    #[error("malformed permission list `{0}`")]
    MalformedPermissionList(String),
    #[error("malformed SAP call `{0}`")]
    MalformedSapCall(String),
    #[error("malformed XML payload")]
    MalformedXmlPayload,
    #[error("malformed quoted parameter")]
    MalformedQuote,
}

impl SyntaxError {
    /// Stable machine-readable code, used on `error: <code>` lines.
    pub fn code(&self) -> &'static str {
        match self {
            SyntaxError::MissingColon => "MissingColon",
            SyntaxError::EmptyCommandName => "EmptyCommandName",
            SyntaxError::UnknownCommand(_) => "UnknownCommand",
            SyntaxError::UnknownAck(_) => "UnknownAck",
            SyntaxError::ArityMismatch { .. } => "ArityMismatch",
            SyntaxError::TypeMismatch { .. } => "TypeMismatch",
            SyntaxError::MalformedPermissionList(_) => "MalformedPermissionList",
            SyntaxError::MalformedSapCall(_) => "MalformedSapCall",
            SyntaxError::MalformedXmlPayload => "MalformedXmlPayload",
            SyntaxError::MalformedQuote => "MalformedQuote",
        }
    }
}

/// One lexed token: the keyword before the colon, or one raw parameter
/// slice. Slices keep `;` and interior `:` intact for sub-parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Keyword(String),
    Param(RawParam),
}

/// A raw parameter slice with surrounding whitespace trimmed. `quoted`
/// marks slices that came from the `"..."` form; their text is already
/// unescaped and is never re-interpreted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawParam {
    pub text: String,
    pub quoted: bool,
}

impl RawParam {
    fn plain(text: impl Into<String>) -> Self {
        RawParam {
            text: text.into(),
            quoted: false,
        }
    }
}

/// Split one line into its keyword and raw parameter slices.
pub fn tokenize(line: &str) -> Result<Vec<Token>, SyntaxError> {
    let line = line.trim();
    let mut colon = None;
    for (i, c) in line.char_indices() {
        if c == ':' {
            colon = Some(i);
            break;
        }
        if c.is_whitespace() {
            return Err(SyntaxError::MissingColon);
        }
    }
    let colon = colon.ok_or(SyntaxError::MissingColon)?;
    if colon == 0 {
        return Err(SyntaxError::EmptyCommandName);
    }

    let mut tokens = vec![Token::Keyword(line[..colon].to_string())];
    let rest = &line[colon + 1..];
    if rest.trim().is_empty() {
        return Ok(tokens);
    }

    let mut pos = 0;
    loop {
        while rest[pos..].starts_with(|c: char| c.is_whitespace()) {
            pos += rest[pos..].chars().next().unwrap().len_utf8();
        }
        if pos >= rest.len() {
            // Only reachable right after a comma: a trailing empty slice.
            tokens.push(Token::Param(RawParam::plain("")));
            break;
        }

        let slice = &rest[pos..];
        if slice.starts_with('"') {
            let (text, used) = take_quoted(slice)?;
            pos += used;
            while rest[pos..].starts_with(|c: char| c.is_whitespace()) {
                pos += rest[pos..].chars().next().unwrap().len_utf8();
            }
            tokens.push(Token::Param(RawParam { text, quoted: true }));
            match rest[pos..].chars().next() {
                None => break,
                Some(',') => {
                    pos += 1;
                    continue;
                }
                Some(_) => return Err(SyntaxError::MalformedQuote),
            }
        }

        if slice.starts_with('<') {
            if let Some(len) = xml::scan_document(slice) {
                let mut after = pos + len;
                while rest[after..].starts_with(|c: char| c.is_whitespace()) {
                    after += rest[after..].chars().next().unwrap().len_utf8();
                }
                match rest[after..].chars().next() {
                    None => {
                        tokens.push(Token::Param(RawParam::plain(&slice[..len])));
                        break;
                    }
                    Some(',') => {
                        tokens.push(Token::Param(RawParam::plain(&slice[..len])));
                        pos = after + 1;
                        continue;
                    }
                    // Trailing junk: fall through to the plain comma split.
                    Some(_) => {}
                }
            }
        }

        match slice.find(',') {
            Some(j) => {
                tokens.push(Token::Param(RawParam::plain(slice[..j].trim_end())));
                pos += j + 1;
            }
            None => {
                tokens.push(Token::Param(RawParam::plain(slice.trim_end())));
                break;
            }
        }
    }
    Ok(tokens)
}

/// Consume a `"..."` slice; returns the unescaped text and bytes used.
fn take_quoted(slice: &str) -> Result<(String, usize), SyntaxError> {
    debug_assert!(slice.starts_with('"'));
    let mut text = String::new();
    let mut chars = slice.char_indices().skip(1);
    while let Some((i, c)) = chars.next() {
        match c {
            '"' => return Ok((text, i + 1)),
            '\\' => match chars.next() {
                Some((_, '"')) => text.push('"'),
                Some((_, '\\')) => text.push('\\'),
                _ => return Err(SyntaxError::MalformedQuote),
            },
            _ => text.push(c),
        }
    }
    Err(SyntaxError::MalformedQuote)
}

fn split_tokens(tokens: Vec<Token>) -> (String, Vec<RawParam>) {
    let mut keyword = String::new();
    let mut params = Vec::new();
    for token in tokens {
        match token {
            Token::Keyword(k) => keyword = k,
            Token::Param(p) => params.push(p),
        }
    }
    (keyword, params)
}

fn check_arity(keyword: &str, got: usize, expected: usize) -> Result<(), SyntaxError> {
    if got == expected {
        Ok(())
    } else {
        Err(SyntaxError::ArityMismatch {
            keyword: keyword.to_string(),
            expected,
            got,
        })
    }
}

fn int_param(p: &RawParam, index: usize) -> Result<i64, SyntaxError> {
    let mismatch = || SyntaxError::TypeMismatch {
        index,
        expected: "an integer",
        got: p.text.clone(),
    };
    if p.quoted {
        return Err(mismatch());
    }
    let digits = p.text.strip_prefix('-').unwrap_or(&p.text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(mismatch());
    }
    p.text.parse::<i64>().map_err(|_| mismatch())
}

fn bool_param(p: &RawParam, index: usize) -> Result<bool, SyntaxError> {
    match (p.quoted, p.text.as_str()) {
        (false, "True") => Ok(true),
        (false, "False") => Ok(false),
        _ => Err(SyntaxError::TypeMismatch {
            index,
            expected: "`True` or `False`",
            got: p.text.clone(),
        }),
    }
}

fn text_param(p: &RawParam) -> String {
    p.text.clone()
}

fn is_permission_token(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_lowercase())
        && bytes.all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b) if b.is_ascii_alphabetic())
        && bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Parse `tok:val;tok:val` with no interior whitespace; `parse_value`
/// interprets the right-hand side (allow/deny or True/False).
fn perm_pairs<V>(
    p: &RawParam,
    parse_value: impl Fn(&str) -> Option<V>,
) -> Result<Vec<(String, V)>, SyntaxError> {
    let malformed = || SyntaxError::MalformedPermissionList(p.text.clone());
    if p.quoted || p.text.is_empty() {
        return Err(malformed());
    }
    let mut pairs = Vec::new();
    for chunk in p.text.split(';') {
        let (token, value) = chunk.split_once(':').ok_or_else(malformed)?;
        if !is_permission_token(token) {
            return Err(malformed());
        }
        let value = parse_value(value).ok_or_else(malformed)?;
        pairs.push((token.to_string(), value));
    }
    Ok(pairs)
}

fn sap_param(p: &RawParam) -> Result<SapCall, SyntaxError> {
    let malformed = || SyntaxError::MalformedSapCall(p.text.clone());
    if p.quoted {
        return Err(malformed());
    }
    let name = p.text.strip_suffix("()").ok_or_else(malformed)?;
    if !is_identifier(name) {
        return Err(malformed());
    }
    Ok(SapCall::new(name))
}

fn payload_param(p: &RawParam) -> Result<Option<String>, SyntaxError> {
    if p.quoted {
        return Err(SyntaxError::MalformedXmlPayload);
    }
    if p.text == "null" {
        return Ok(None);
    }
    match xml::scan_document(&p.text) {
        Some(len) if len == p.text.len() => Ok(Some(p.text.clone())),
        _ => Err(SyntaxError::MalformedXmlPayload),
    }
}

/// Parse one command line into its typed AST.
pub fn parse_command(line: &str) -> Result<Command, SyntaxError> {
    let (keyword, params) = split_tokens(tokenize(line)?);
    let kind = CommandKind::from_keyword(&keyword)
        .ok_or_else(|| SyntaxError::UnknownCommand(keyword.clone()))?;
    check_arity(&keyword, params.len(), kind.command_arity())?;
    Ok(match kind {
        CommandKind::Bind => Command::Bind {
            url: text_param(&params[0]),
            wsdl: text_param(&params[1]),
        },
        CommandKind::Unbind => Command::Unbind {
            id: int_param(&params[0], 0)?,
        },
        CommandKind::Update => Command::Update {
            id: int_param(&params[0], 0)?,
            wsdl: text_param(&params[1]),
        },
        CommandKind::Delete => Command::Delete {
            id: int_param(&params[0], 0)?,
        },
        CommandKind::Enable => Command::Enable {
            id: int_param(&params[0], 0)?,
            enabled: bool_param(&params[1], 1)?,
        },
        CommandKind::GetClients => Command::GetClients {
            id: int_param(&params[0], 0)?,
        },
        CommandKind::Grant => Command::Grant {
            id: int_param(&params[0], 0)?,
            perms: perm_pairs(&params[1], |v| match v {
                "allow" => Some(PermAction::Allow),
                "deny" => Some(PermAction::Deny),
                _ => None,
            })?,
        },
        CommandKind::CreateReplica => Command::CreateReplica {
            id: int_param(&params[0], 0)?,
            replica_ip: text_param(&params[1]),
        },
        CommandKind::GetInfo => Command::GetInfo {
            id: int_param(&params[0], 0)?,
        },
        CommandKind::ExecuteSap => Command::ExecuteSap {
            id: int_param(&params[0], 0)?,
            call: sap_param(&params[1])?,
        },
    })
}

/// Parse one acknowledgment line into its typed AST.
pub fn parse_ack(line: &str) -> Result<Ack, SyntaxError> {
    let (keyword, params) = split_tokens(tokenize(line)?);
    let kind = CommandKind::from_ack_keyword(&keyword)
        .ok_or_else(|| SyntaxError::UnknownAck(keyword.clone()))?;
    check_arity(&keyword, params.len(), kind.ack_arity())?;
    let id = int_param(&params[0], 0)?;
    Ok(match kind {
        CommandKind::Bind => Ack::Bind {
            id,
            ok: bool_param(&params[1], 1)?,
        },
        CommandKind::Unbind => Ack::Unbind {
            id,
            ok: bool_param(&params[1], 1)?,
        },
        CommandKind::Update => Ack::Update {
            id,
            ok: bool_param(&params[1], 1)?,
        },
        CommandKind::Delete => Ack::Delete {
            id,
            ok: bool_param(&params[1], 1)?,
        },
        CommandKind::Enable => Ack::Enable {
            id,
            ok: bool_param(&params[1], 1)?,
        },
        CommandKind::GetClients => Ack::GetClients {
            id,
            count: int_param(&params[1], 1)?,
            ok: bool_param(&params[2], 2)?,
        },
        CommandKind::Grant => Ack::Grant {
            id,
            results: perm_pairs(&params[1], |v| match v {
                "True" => Some(true),
                "False" => Some(false),
                _ => None,
            })?,
        },
        CommandKind::CreateReplica => Ack::CreateReplica {
            id,
            replica_id: int_param(&params[1], 1)?,
            ok: bool_param(&params[2], 2)?,
        },
        CommandKind::GetInfo => Ack::GetInfo {
            id,
            report: payload_param(&params[1])?,
            ok: bool_param(&params[2], 2)?,
        },
        CommandKind::ExecuteSap => Ack::ExecuteSap {
            id,
            ok: bool_param(&params[1], 1)?,
        },
    })
}

fn bool_literal(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn needs_quoting(s: &str) -> bool {
    s.is_empty()
        || s.contains(',')
        || s.starts_with('"')
        || s.starts_with('<')
        || s.starts_with(|c: char| c.is_whitespace())
        || s.ends_with(|c: char| c.is_whitespace())
}

fn render_text(s: &str) -> String {
    if needs_quoting(s) {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                _ => out.push(c),
            }
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

fn render_line(keyword: &str, params: &[String]) -> String {
    format!("{}: {}", keyword, params.join(", "))
}

/// Canonical rendering: keyword, colon, one space, parameters joined by
/// `", "`, permission pairs joined by `;` with no spaces. Round-trips
/// through [`parse_command`].
pub fn render_command(cmd: &Command) -> String {
    let keyword = cmd.kind().keyword();
    let params = match cmd {
        Command::Bind { url, wsdl } => vec![render_text(url), render_text(wsdl)],
        Command::Unbind { id } | Command::Delete { id } | Command::GetClients { id } | Command::GetInfo { id } => {
            vec![id.to_string()]
        }
        Command::Update { id, wsdl } => vec![id.to_string(), render_text(wsdl)],
        Command::Enable { id, enabled } => vec![id.to_string(), bool_literal(*enabled).to_string()],
        Command::Grant { id, perms } => {
            let list = perms
                .iter()
                .map(|(tok, act)| format!("{tok}:{}", act.literal()))
                .collect::<Vec<_>>()
                .join(";");
            vec![id.to_string(), list]
        }
        Command::CreateReplica { id, replica_ip } => vec![id.to_string(), render_text(replica_ip)],
        Command::ExecuteSap { id, call } => vec![id.to_string(), format!("{}()", call.name)],
    };
    render_line(keyword, &params)
}

/// Canonical rendering of an acknowledgment; round-trips through
/// [`parse_ack`].
pub fn render_ack(ack: &Ack) -> String {
    let keyword = ack.kind().ack_keyword();
    let params = match ack {
        Ack::Bind { id, ok }
        | Ack::Unbind { id, ok }
        | Ack::Update { id, ok }
        | Ack::Delete { id, ok }
        | Ack::Enable { id, ok }
        | Ack::ExecuteSap { id, ok } => vec![id.to_string(), bool_literal(*ok).to_string()],
        Ack::GetClients { id, count, ok } => vec![
            id.to_string(),
            count.to_string(),
            bool_literal(*ok).to_string(),
        ],
        Ack::Grant { id, results } => {
            let list = results
                .iter()
                .map(|(tok, ok)| format!("{tok}:{}", bool_literal(*ok)))
                .collect::<Vec<_>>()
                .join(";");
            vec![id.to_string(), list]
        }
        Ack::CreateReplica { id, replica_id, ok } => vec![
            id.to_string(),
            replica_id.to_string(),
            bool_literal(*ok).to_string(),
        ],
        Ack::GetInfo { id, report, ok } => vec![
            id.to_string(),
            report.clone().unwrap_or_else(|| "null".to_string()),
            bool_literal(*ok).to_string(),
        ],
    };
    render_line(keyword, &params)
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_command(self))
    }
}

impl fmt::Display for Ack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ack(self))
    }
}
