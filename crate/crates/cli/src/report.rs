//! The report every subcommand produces, rendered as JSON or as text tables.

use std::collections::BTreeMap;
use std::fmt::Write;

use magpath::homology::GroupShape;
use magpath::linalg::describe_group;
use magpath::Int;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input_digest: String,
    pub bounds: Bounds,
    pub cells: Vec<Cell>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nmax: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rmax: Option<i64>,
}

/// One group in a table. `indices` are `[l, k]` for `MH`/`dMH`, `[k]` for
/// `H~`, and `[l, n]` for spectral cells `E`, whose page is `"0"`, `"1"`, ...
/// or `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub page: Option<String>,
    pub indices: Vec<i64>,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub generator_count: usize,
}

impl Cell {
    pub fn new(group: &str, page: Option<String>, indices: Vec<i64>, shape: &GroupShape) -> Self {
        Cell {
            group: group.to_string(),
            page,
            indices,
            free_rank: shape.free_rank,
            torsion: shape.torsion.clone(),
            generator_count: shape.generator_count(),
        }
    }

    pub fn describe(&self) -> String {
        describe_group(self.free_rank, &self.torsion)
    }

    fn page_key(&self) -> i64 {
        match self.page.as_deref() {
            None => -1,
            Some("inf") => i64::MAX,
            Some(p) => p.parse().unwrap_or(i64::MAX),
        }
    }

    fn sort_key(&self) -> (String, i64, Vec<i64>) {
        (self.group.clone(), self.page_key(), self.indices.clone())
    }
}

/// A named check. Informational verdicts describe the input and never cause
/// a failing exit status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn check(name: &str, witness: Option<String>) -> Self {
        Verdict {
            name: name.to_string(),
            passed: witness.is_none(),
            informational: false,
            witness,
        }
    }

    pub fn info(name: &str, holds: bool, witness: Option<String>) -> Self {
        Verdict {
            name: name.to_string(),
            passed: holds,
            informational: true,
            witness,
        }
    }
}

impl Report {
    pub fn new(command: &str, input_digest: String, bounds: Bounds, mut cells: Vec<Cell>, verdicts: Vec<Verdict>) -> Self {
        cells.sort_by_key(Cell::sort_key);
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest,
            bounds,
            cells,
            verdicts,
        }
    }

    /// True unless some non-informational verdict failed.
    pub fn succeeded(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed || v.informational)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "input:   {}", self.input_digest);
        let bounds: Vec<String> = [
            ("lmax", self.bounds.lmax),
            ("kmax", self.bounds.kmax),
            ("nmax", self.bounds.nmax),
            ("rmax", self.bounds.rmax),
        ]
        .iter()
        .filter_map(|(n, v)| v.map(|v| format!("{n}={v}")))
        .collect();
        if !bounds.is_empty() {
            let _ = writeln!(out, "bounds:  {}", bounds.join(" "));
        }

        let mut sections: BTreeMap<(String, i64), Vec<&Cell>> = BTreeMap::new();
        for c in &self.cells {
            sections.entry((c.group.clone(), c.page_key())).or_default().push(c);
        }
        for cells in sections.values() {
            out.push('\n');
            render_section(&mut out, cells);
        }

        if !self.verdicts.is_empty() {
            out.push('\n');
            for v in &self.verdicts {
                let status = match (v.passed, v.informational) {
                    (true, false) => "PASS",
                    (false, false) => "FAIL",
                    (true, true) => "yes ",
                    (false, true) => "no  ",
                };
                let _ = write!(out, "{status} {}", v.name);
                if let Some(w) = &v.witness {
                    let _ = write!(out, ": {w}");
                }
                out.push('\n');
            }
        }
        out
    }
}

fn axes(group: &str) -> (&'static str, &'static str) {
    match group {
        "E" => ("l", "n"),
        "H~" => ("k", ""),
        _ => ("l", "k"),
    }
}

fn render_section(out: &mut String, cells: &[&Cell]) {
    let first = cells[0];
    let title = match &first.page {
        Some(p) => format!("{} page {p}", first.group),
        None => first.group.clone(),
    };
    let (row_axis, col_axis) = axes(&first.group);

    if first.indices.len() == 1 {
        let _ = writeln!(out, "{title}");
        for c in cells {
            let _ = writeln!(out, "  {row_axis}={:<3} {}", c.indices[0], c.describe());
        }
        return;
    }

    let mut rows: Vec<i64> = cells.iter().map(|c| c.indices[0]).collect();
    let mut cols: Vec<i64> = cells.iter().map(|c| c.indices[1]).collect();
    rows.sort_unstable();
    rows.dedup();
    cols.sort_unstable();
    cols.dedup();
    let lookup: BTreeMap<(i64, i64), String> = cells.iter().map(|c| ((c.indices[0], c.indices[1]), c.describe())).collect();

    let header = format!("{row_axis}\\{col_axis}");
    let first_width = rows.iter().map(|r| r.to_string().len()).max().unwrap_or(0).max(header.len());
    let widths: Vec<usize> = cols
        .iter()
        .map(|&c| {
            rows.iter()
                .filter_map(|&r| lookup.get(&(r, c)).map(String::len))
                .chain([c.to_string().len(), 1])
                .max()
                .unwrap_or(1)
        })
        .collect();

    let _ = writeln!(out, "{title}");
    let _ = write!(out, "  {header:>first_width$}");
    for (c, w) in cols.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    for r in &rows {
        let _ = write!(out, "  {r:>first_width$}");
        for (c, w) in cols.iter().zip(&widths) {
            let text = lookup.get(&(*r, *c)).map_or(".", String::as_str);
            let _ = write!(out, "  {text:>w$}");
        }
        out.push('\n');
    }
}

/// `sha256:` followed by the hex digest of the canonical edge list.
pub fn digest(canonical: &str) -> String {
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
