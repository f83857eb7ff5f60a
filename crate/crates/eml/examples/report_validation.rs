//! Service reports: building, the two serialization layouts, and the
//! structural validator that enforces the fixed content model.
//!
//! Run with: `cargo run -p eml --example report_validation`

use chrono::NaiveDate;

use eml::report::{
    parse_report, serialize_report, validate_report, Report, ReportMode, REPORT_VERSION,
};

fn main() {
    let report = Report {
        service_id: 2,
        service_ip: "192.168.1.6".into(),
        service_wsdl: "WSDL".into(),
        is_enabled: true,
        is_replica: false,
        granted_permissions: vec!["Disk Access".into()],
        stamp: NaiveDate::from_ymd_opt(2011, 12, 7)
            .unwrap()
            .and_hms_opt(20, 15, 21)
            .unwrap(),
        version: REPORT_VERSION.into(),
    };

    println!("=== Single-line (as embedded in getInfo-ack) ===\n");
    let single = serialize_report(&report, ReportMode::SingleLine);
    println!("{single}\n");

    println!("=== Pretty ===\n");
    let pretty = serialize_report(&report, ReportMode::Pretty);
    println!("{pretty}\n");

    // Both layouts carry the same content.
    assert_eq!(parse_report(&single).unwrap(), report);
    assert_eq!(parse_report(&pretty).unwrap(), report);

    println!("=== Validation ===\n");
    println!("serializer output: {:?}", validate_report(&single).unwrap());

    // Swap two elements: one order violation.
    let swapped = single.replace(
        "<serviceID>2</serviceID><serviceIP>192.168.1.6</serviceIP>",
        "<serviceIP>192.168.1.6</serviceIP><serviceID>2</serviceID>",
    );
    report_violations("swapped serviceID/serviceIP", &swapped);

    // Non-boolean content.
    let bad_bool = single.replace("<isEnabled>True</isEnabled>", "<isEnabled>yes</isEnabled>");
    report_violations("isEnabled = yes", &bad_bool);

    // Unknown element and a dropped one.
    let unknown = single.replace("</report>", "<color>red</color></report>");
    report_violations("injected <color>", &unknown);
    let missing = single.replace("<version>1.0</version>", "");
    report_violations("deleted <version>", &missing);

    // Not XML at all is a different failure class.
    println!("\nnot well-formed: {:?}", validate_report("<report><oops</report>").unwrap_err());
}

fn report_violations(label: &str, doc: &str) {
    let verdict = validate_report(doc).unwrap();
    println!("\n{label}:");
    for violation in verdict.violations() {
        println!("  - {violation}");
    }
}
