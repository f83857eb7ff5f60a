//! The getInfo XML report: building it from a service record, serializing
//! it (single-line for the wire, pretty for humans), parsing it back, and
//! structurally validating arbitrary documents against the report content
//! model.
//!
//! The content model is small and fixed, so validation is a purpose-built
//! walk over the parsed tree rather than a general DTD engine; the model
//! itself is also shipped as `report.dtd` next to this crate's manifest.

use std::fmt;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike};
use thiserror::Error;

use crate::exec::PermissionTable;
use crate::registry::ServiceRecord;
use crate::xml::{self, Element, XmlError};

/// Child elements of `<report>`, in required document order.
pub const REPORT_CHILDREN: [&str; 8] = [
    "serviceID",
    "serviceIP",
    "serviceWSDL",
    "isEnabled",
    "isReplica",
    "grantedPermissions",
    "stamp",
    "version",
];

/// The report's current schema version.
pub const REPORT_VERSION: &str = "1.0";

/// The report content, field for field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub service_id: i64,
    pub service_ip: String,
    /// Empty when the service's WSDL has been deleted.
    pub service_wsdl: String,
    pub is_enabled: bool,
    pub is_replica: bool,
    /// Display names, in grant order.
    pub granted_permissions: Vec<String>,
    pub stamp: NaiveDateTime,
    pub version: String,
}

/// Serialization layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    /// No inter-element whitespace; embeddable as one ack parameter.
    SingleLine,
    /// Two-space indentation, one element per line.
    Pretty,
}

/// Assemble the report for a live record at the given report-clock time.
pub fn build_report(record: &ServiceRecord, table: &PermissionTable, now: NaiveDateTime) -> Report {
    Report {
        service_id: record.id,
        service_ip: record.ip.clone(),
        service_wsdl: record.wsdl.clone().unwrap_or_default(),
        is_enabled: record.enabled,
        is_replica: record.is_replica,
        granted_permissions: record
            .permissions
            .iter()
            .map(|token| {
                table
                    .display_name(token)
                    .unwrap_or(token.as_str())
                    .to_string()
            })
            .collect(),
        stamp: now,
        version: REPORT_VERSION.to_string(),
    }
}

fn bool_literal(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

/// `M/D/YYYY hh:mm:ssAM|PM` — unpadded date, zero-padded 12-hour time,
/// no space before the meridiem.
pub fn format_stamp(t: NaiveDateTime) -> String {
    let (pm, hour12) = t.hour12();
    format!(
        "{}/{}/{} {:02}:{:02}:{:02}{}",
        t.month(),
        t.day(),
        t.year(),
        hour12,
        t.minute(),
        t.second(),
        if pm { "PM" } else { "AM" }
    )
}

/// Inverse of [`format_stamp`].
pub fn parse_stamp(s: &str) -> Result<NaiveDateTime, ReportParseError> {
    let bad = || ReportParseError::BadStamp(s.to_string());
    let (date, time) = s.split_once(' ').ok_or_else(bad)?;

    let mut date_parts = date.splitn(3, '/');
    let month: u32 = date_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let day: u32 = date_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let year: i32 = date_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;

    let (clock, meridiem) = time.split_at(time.len().checked_sub(2).ok_or_else(bad)?);
    let pm = match meridiem {
        "AM" => false,
        "PM" => true,
        _ => return Err(bad()),
    };
    let mut clock_parts = clock.splitn(3, ':');
    let hour12: u32 = clock_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let minute: u32 = clock_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let second: u32 = clock_parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    if !(1..=12).contains(&hour12) {
        return Err(bad());
    }
    let hour = match (hour12, pm) {
        (12, false) => 0,
        (12, true) => 12,
        (h, false) => h,
        (h, true) => h + 12,
    };
    NaiveDate::from_ymd_opt(year, month, day)
        .and_then(|d| d.and_hms_opt(hour, minute, second))
        .ok_or_else(bad)
}

/// Serialize in DTD order with `&`, `<`, `>` escaped in character data.
pub fn serialize_report(report: &Report, mode: ReportMode) -> String {
    let fields: [(&str, String); 8] = [
        ("serviceID", report.service_id.to_string()),
        ("serviceIP", xml::escape_text(&report.service_ip)),
        ("serviceWSDL", xml::escape_text(&report.service_wsdl)),
        ("isEnabled", bool_literal(report.is_enabled).to_string()),
        ("isReplica", bool_literal(report.is_replica).to_string()),
        ("grantedPermissions", String::new()),
        ("stamp", xml::escape_text(&format_stamp(report.stamp))),
        ("version", xml::escape_text(&report.version)),
    ];

    let mut out = String::new();
    let (open, indent, inner_indent, newline) = match mode {
        ReportMode::SingleLine => ("<report>", "", "", ""),
        ReportMode::Pretty => ("<report>", "  ", "    ", "\n"),
    };
    out.push_str(open);
    out.push_str(newline);
    for (name, value) in &fields {
        if *name == "grantedPermissions" {
            out.push_str(indent);
            if report.granted_permissions.is_empty() {
                out.push_str("<grantedPermissions></grantedPermissions>");
            } else {
                out.push_str("<grantedPermissions>");
                out.push_str(newline);
                for permission in &report.granted_permissions {
                    out.push_str(inner_indent);
                    out.push_str("<permission>");
                    out.push_str(&xml::escape_text(permission));
                    out.push_str("</permission>");
                    out.push_str(newline);
                }
                out.push_str(indent);
                out.push_str("</grantedPermissions>");
            }
        } else {
            out.push_str(indent);
            out.push('<');
            out.push_str(name);
            out.push('>');
            out.push_str(value);
            out.push_str("</");
            out.push_str(name);
            out.push('>');
        }
        out.push_str(newline);
    }
    out.push_str("</report>");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportParseError {
    #[error(transparent)]
    NotWellFormed(#[from] XmlError),
    #[error("missing <{0}> element")]
    MissingField(&'static str),
    #[error("<{0}> must contain `True` or `False`")]
    BadBoolean(&'static str),
    #[error("bad stamp `{0}`")]
    BadStamp(String),
    #[error("serviceID is not an integer")]
    BadServiceId,
    #[error("root element must be <report>")]
    WrongRoot,
}

/// Read a serialized report back into a [`Report`]. Accepts both layout
/// modes (whitespace between elements is ignored).
pub fn parse_report(doc: &str) -> Result<Report, ReportParseError> {
    let root = xml::parse_document(doc)?;
    if root.name != "report" {
        return Err(ReportParseError::WrongRoot);
    }
    let field = |name: &'static str| -> Result<&Element, ReportParseError> {
        root.child_elements()
            .find(|e| e.name == name)
            .ok_or(ReportParseError::MissingField(name))
    };
    let boolean = |name: &'static str| -> Result<bool, ReportParseError> {
        match field(name)?.text().as_str() {
            "True" => Ok(true),
            "False" => Ok(false),
            _ => Err(ReportParseError::BadBoolean(name)),
        }
    };

    let service_id = field("serviceID")?
        .text()
        .parse::<i64>()
        .map_err(|_| ReportParseError::BadServiceId)?;
    let granted_permissions = field("grantedPermissions")?
        .child_elements()
        .filter(|e| e.name == "permission")
        .map(|e| e.text())
        .collect();

    Ok(Report {
        service_id,
        service_ip: field("serviceIP")?.text(),
        service_wsdl: field("serviceWSDL")?.text(),
        is_enabled: boolean("isEnabled")?,
        is_replica: boolean("isReplica")?,
        granted_permissions,
        stamp: parse_stamp(&field("stamp")?.text())?,
        version: field("version")?.text(),
    })
}

/// What a structural check found wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    WrongRoot,
    UnknownElement,
    MissingElement,
    DuplicateElement,
    OrderViolation,
    BooleanContent,
    AttributeNotAllowed,
    TextNotAllowed,
    ChildNotAllowed,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::WrongRoot => "wrong root element",
            ViolationKind::UnknownElement => "unknown element",
            ViolationKind::MissingElement => "missing element",
            ViolationKind::DuplicateElement => "duplicate element",
            ViolationKind::OrderViolation => "element out of order",
            ViolationKind::BooleanContent => "boolean content",
            ViolationKind::AttributeNotAllowed => "attribute not allowed",
            ViolationKind::TextNotAllowed => "character data not allowed",
            ViolationKind::ChildNotAllowed => "child element not allowed",
        };
        f.write_str(s)
    }
}

/// One content-model violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Outcome of a structural check on a well-formed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// Every violation found, not just the first.
    Invalid(Vec<Violation>),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Validity::Valid => &[],
            Validity::Invalid(v) => v,
        }
    }
}

/// Check a document against the report content model. Well-formedness
/// failures come back as `Err`; they are a different kind of broken than
/// a model violation.
pub fn validate_report(doc: &str) -> Result<Validity, XmlError> {
    let root = xml::parse_document(doc)?;
    let mut violations = Vec::new();

    if root.name != "report" {
        violations.push(Violation::new(
            ViolationKind::WrongRoot,
            format!("<{}> instead of <report>", root.name),
        ));
        return Ok(Validity::Invalid(violations));
    }

    flag_attributes(&root, &mut violations);

    if root.has_significant_text() {
        violations.push(Violation::new(
            ViolationKind::TextNotAllowed,
            "character data directly inside <report>",
        ));
    }

    // Presence, multiplicity, and order of the eight children.
    let mut counts = [0usize; REPORT_CHILDREN.len()];
    let mut first_seen: Vec<usize> = Vec::new();
    for child in root.child_elements() {
        match REPORT_CHILDREN.iter().position(|n| *n == child.name) {
            None => violations.push(Violation::new(
                ViolationKind::UnknownElement,
                format!("<{}> inside <report>", child.name),
            )),
            Some(idx) => {
                counts[idx] += 1;
                if counts[idx] == 1 {
                    first_seen.push(idx);
                } else {
                    violations.push(Violation::new(
                        ViolationKind::DuplicateElement,
                        format!("<{}>", child.name),
                    ));
                }
            }
        }
    }
    for (idx, name) in REPORT_CHILDREN.iter().enumerate() {
        if counts[idx] == 0 {
            violations.push(Violation::new(ViolationKind::MissingElement, format!("<{name}>")));
        }
    }
    for pair in first_seen.windows(2) {
        if pair[1] < pair[0] {
            violations.push(Violation::new(
                ViolationKind::OrderViolation,
                format!(
                    "<{}> must come before <{}>",
                    REPORT_CHILDREN[pair[1]], REPORT_CHILDREN[pair[0]]
                ),
            ));
        }
    }

    for child in root.child_elements() {
        match child.name.as_str() {
            "isEnabled" | "isReplica" => {
                flag_element_children(child, &mut violations);
                let text = child.text();
                if text != "True" && text != "False" {
                    violations.push(Violation::new(
                        ViolationKind::BooleanContent,
                        format!("<{}> contains `{text}`", child.name),
                    ));
                }
            }
            "grantedPermissions" => {
                if child.has_significant_text() {
                    violations.push(Violation::new(
                        ViolationKind::TextNotAllowed,
                        "character data inside <grantedPermissions>",
                    ));
                }
                for grandchild in child.child_elements() {
                    if grandchild.name != "permission" {
                        violations.push(Violation::new(
                            ViolationKind::UnknownElement,
                            format!("<{}> inside <grantedPermissions>", grandchild.name),
                        ));
                    } else {
                        flag_element_children(grandchild, &mut violations);
                    }
                }
            }
            "serviceID" | "serviceIP" | "serviceWSDL" | "stamp" | "version" => {
                flag_element_children(child, &mut violations);
            }
            _ => {} // unknown, already flagged
        }
    }

    Ok(if violations.is_empty() {
        Validity::Valid
    } else {
        Validity::Invalid(violations)
    })
}

fn flag_attributes(element: &Element, violations: &mut Vec<Violation>) {
    for (name, _) in &element.attributes {
        violations.push(Violation::new(
            ViolationKind::AttributeNotAllowed,
            format!("{name} on <{}>", element.name),
        ));
    }
    for child in element.child_elements() {
        flag_attributes(child, violations);
    }
}

fn flag_element_children(element: &Element, violations: &mut Vec<Violation>) {
    for child in element.child_elements() {
        violations.push(Violation::new(
            ViolationKind::ChildNotAllowed,
            format!("<{}> inside <{}>", child.name, element.name),
        ));
    }
}
