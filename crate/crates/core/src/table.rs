//! The reference classification table, embedded as versioned data.

use crate::ade::AdeType;
use crate::rational::{parse_q, Q};
use std::sync::OnceLock;

pub const TABLE_VERSION: u32 = 1;

const RAW: &str = include_str!("../data/main_table.csv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub degree: u32,
    pub lines: usize,
    pub ade: AdeType,
    pub delta: Q,
    /// Line count of the lattice model when it differs from `lines`.
    pub model_lines: Option<usize>,
}

impl TableRow {
    /// Line count the lattice model has.
    pub fn expected_model_lines(&self) -> usize {
        self.model_lines.unwrap_or(self.lines)
    }
}

/// All rows in published order.
pub fn rows() -> &'static [TableRow] {
    static ROWS: OnceLock<Vec<TableRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        RAW.lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                assert!(f.len() == 3 || f.len() == 4, "bad table line {l:?}");
                TableRow {
                    degree: 2,
                    lines: f[0].parse().expect("line count"),
                    ade: AdeType::parse(f[1]).expect("ADE type"),
                    delta: parse_q(f[2]).expect("delta"),
                    model_lines: f.get(3).map(|x| x.parse().expect("model line count")),
                }
            })
            .collect()
    })
}

/// Line counts listed for a type.
pub fn line_counts(ade: &AdeType) -> Vec<usize> {
    rows()
        .iter()
        .filter(|r| &r.ade == ade)
        .map(|r| r.lines)
        .collect()
}

pub fn lookup(ade: &AdeType, lines: usize) -> Option<&'static TableRow> {
    rows().iter().find(|r| &r.ade == ade && r.lines == lines)
}
