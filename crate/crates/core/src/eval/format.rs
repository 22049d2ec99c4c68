use std::str::FromStr;

use serde_json::{Map, Value};

use super::{Mapping, MappingSet};
use crate::surface::format_term;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AnswerFormat {
    #[default]
    Tsv,
    Json,
}

impl FromStr for AnswerFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(AnswerFormat::Tsv),
            "json" | "jsonl" => Ok(AnswerFormat::Json),
            other => Err(format!("unknown answer format `{other}` (expected tsv or json)")),
        }
    }
}

/// `?x=JonSmith<TAB>?y=SemanticUniversity`, variables in sorted order.
pub fn format_mapping_tsv(m: &Mapping) -> String {
    m.iter()
        .map(|(v, t)| format!("{v}={}", format_term(t)))
        .collect::<Vec<_>>()
        .join("\t")
}

/// `{"?x":"JonSmith","?y":"SemanticUniversity"}` with sorted keys.
pub fn format_mapping_json(m: &Mapping) -> String {
    let obj: Map<String, Value> = m
        .iter()
        .map(|(v, t)| (v.to_string(), Value::String(format_term(t))))
        .collect();
    Value::Object(obj).to_string()
}

/// One line per mapping, in canonical order.
pub fn format_answers(set: &MappingSet, format: AnswerFormat) -> String {
    let line = match format {
        AnswerFormat::Tsv => format_mapping_tsv,
        AnswerFormat::Json => format_mapping_json,
    };
    set.iter().map(|m| line(m) + "\n").collect()
}
