use serde_json::{json, Value};

use genfib_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violated,
    Skipped,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violated => "violated",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

/// One output line.
pub struct Record {
    kind: &'static str,
    input: Value,
    result: Value,
    status: Status,
    resource: bool,
}

impl Record {
    pub fn new(kind: &'static str, input: Value, result: Value, status: Status) -> Self {
        Record {
            kind,
            input,
            result,
            status,
            resource: false,
        }
    }

    pub fn error(kind: &'static str, input: Value, err: &Error) -> Self {
        Record {
            kind,
            input,
            result: json!({"error": err.to_string()}),
            status: Status::Error,
            resource: matches!(err, Error::Resource(_)),
        }
    }

    pub fn diagnostic(&self) -> Option<String> {
        (self.status == Status::Error).then(|| {
            format!(
                "{}: {}",
                self.kind,
                self.result["error"].as_str().unwrap_or_default()
            )
        })
    }

    pub fn to_line(&self) -> String {
        json!({
            "kind": self.kind,
            "input": self.input,
            "result": self.result,
            "status": self.status.as_str(),
        })
        .to_string()
    }
}

/// 3 on any resource failure, else 2 on any other error, else 1 on any violation.
pub fn exit_code(records: &[Record]) -> u8 {
    if records.iter().any(|r| r.resource) {
        3
    } else if records.iter().any(|r| r.status == Status::Error) {
        2
    } else if records.iter().any(|r| r.status == Status::Violated) {
        1
    } else {
        0
    }
}
