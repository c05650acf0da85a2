//! The JSON pullback specification read by the command-line front end.
//!
//! ```json
//! {
//!   "point_group_order": 4,
//!   "blocks": [
//!     "line-minus",
//!     { "name": "my-line", "cells": [[4, 4], [2]],
//!       "differentials": [[[-1, 0, -1, 0, 1, 0, 1, 0], [0, -1, 0, -1, 0, 1, 0, 1]]] }
//!   ],
//!   "options": { "oracle": false, "tor_depth": 0, "full_product_oracle": false,
//!                "format": "human" }
//! }
//! ```
//!
//! `blocks` lists built-in names or inline blocks. An inline block gives, per degree, the
//! isotropy orders of its cells and, per degree `d`, the differential to degree `d + 1` as
//! rows of integers in the canonical bases described on [`GcwBlock`]. `options` and each of
//! its fields are optional.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bredon::{builtin_block, validate_block, GcwBlock};
use crate::linalg::IntMatrix;
use crate::pullback::{PullbackOptions, PullbackSpec};
use crate::ring::PointGroup;

/// Report rendering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Human,
    Machine,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpecOptions {
    pub oracle: bool,
    pub tor_depth: usize,
    pub full_product_oracle: bool,
    pub format: OutputFormat,
}

/// An inline block definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomBlock {
    pub name: String,
    pub cells: Vec<Vec<usize>>,
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockEntry {
    Builtin(String),
    Custom(CustomBlock),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub point_group_order: usize,
    pub blocks: Vec<BlockEntry>,
    #[serde(default)]
    pub options: SpecOptions,
}

/// A problem with a spec, located by line and column for syntax errors and by field path
/// for invalid content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecError {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl SpecError {
    fn at_field(field: impl Into<String>, message: impl Into<String>) -> Self {
        SpecError {
            message: message.into(),
            line: None,
            column: None,
            field: Some(field.into()),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column, &self.field) {
            (Some(l), Some(c), _) => write!(f, "line {l}, column {c}: {}", self.message),
            (_, _, Some(field)) => write!(f, "{field}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for SpecError {}

impl CustomBlock {
    fn to_block(&self, group: PointGroup) -> Result<GcwBlock, String> {
        let mats = self
            .differentials
            .iter()
            .enumerate()
            .map(|(d, rows)| {
                IntMatrix::from_rows(rows).map_err(|e| format!("differentials[{d}]: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GcwBlock::from_parts(
            self.name.clone(),
            group,
            self.cells.clone(),
            mats,
        ))
    }
}

impl SpecDocument {
    pub fn point_group(&self) -> Result<PointGroup, SpecError> {
        PointGroup::new(self.point_group_order)
            .map_err(|e| SpecError::at_field("point_group_order", e.to_string()))
    }

    /// Resolves built-in names and validates inline blocks.
    pub fn resolve_blocks(&self) -> Result<Vec<GcwBlock>, SpecError> {
        let group = self.point_group()?;
        if self.blocks.is_empty() {
            return Err(SpecError::at_field(
                "blocks",
                "at least one block is required",
            ));
        }
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let field = format!("blocks[{i}]");
                match entry {
                    BlockEntry::Builtin(name) => {
                        let b = builtin_block(name)
                            .map_err(|e| SpecError::at_field(&field, e.to_string()))?;
                        if b.point_group() != group {
                            return Err(SpecError::at_field(
                                &field,
                                format!(
                                    "built-in block `{name}` has point group order {}, \
                                     the spec declares {}",
                                    b.point_group().order(),
                                    group.order()
                                ),
                            ));
                        }
                        Ok(b)
                    }
                    BlockEntry::Custom(c) => {
                        let b = c
                            .to_block(group)
                            .map_err(|e| SpecError::at_field(&field, e))?;
                        let report = validate_block(&b);
                        if report.is_valid() {
                            Ok(b)
                        } else {
                            let msgs: Vec<String> =
                                report.findings.iter().map(ToString::to_string).collect();
                            Err(SpecError::at_field(
                                &field,
                                format!("invalid block `{}`: {}", c.name, msgs.join("; ")),
                            ))
                        }
                    }
                }
            })
            .collect()
    }

    pub fn pullback_options(&self) -> PullbackOptions {
        PullbackOptions {
            oracle: self.options.oracle,
            tor_depth: self.options.tor_depth,
            full_product_oracle: self.options.full_product_oracle,
        }
    }

    pub fn pullback_spec(&self) -> Result<PullbackSpec, SpecError> {
        let blocks = self.resolve_blocks()?;
        PullbackSpec::new(self.point_group()?, blocks, self.pullback_options())
            .map_err(|e| SpecError::at_field("blocks", e.to_string()))
    }
}

/// Parses and validates a spec.
pub fn parse_spec(text: &str) -> Result<SpecDocument, SpecError> {
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| SpecError {
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
        field: None,
    })?;
    doc.pullback_spec()?;
    Ok(doc)
}
