//! Counts of admissible architectures against all irreducible signed
//! permutation representations, per type.

use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::architect::GroupAnalysis;
use crate::error::{GsnnError, Result};
use crate::group::GroupSpec;
use crate::scalar::{Scalar, Tolerances};

/// `admissible/total` for each type.
///
/// For every conjugacy class of `H` one representative is fixed and every
/// `K ≤ H` with `|H:K| ≤ 2` is counted, so the type-2 total is the number of
/// nonzero classes in the groups `H¹(G, M_H)`. `strict_*` count pair classes instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub group: String,
    pub order: usize,
    pub type1: (usize, usize),
    pub type2: (usize, usize),
    pub strict_type1: (usize, usize),
    pub strict_type2: (usize, usize),
}

pub fn table_row<S: Scalar>(label: &str, analysis: &GroupAnalysis<S>) -> Result<TableRow> {
    let lattice = &analysis.lattice;
    let class_of = |h: usize, k: usize| {
        analysis
            .classes
            .iter()
            .position(|c| c.members.contains(&(h, k)))
            .ok_or_else(|| GsnnError::InternalInconsistency("pair missing from its class".into()))
    };
    let mut row = TableRow {
        group: label.to_string(),
        order: analysis.group.order(),
        type1: (0, 0),
        type2: (0, 0),
        strict_type1: (0, 0),
        strict_type2: (0, 0),
    };
    for h in lattice.class_representatives() {
        let mut ks = vec![h];
        ks.extend(lattice.index2_subgroups(h));
        for k in ks {
            let ok = analysis.admissibility[class_of(h, k)?].admissible;
            let slot = if h == k { &mut row.type1 } else { &mut row.type2 };
            slot.1 += 1;
            slot.0 += usize::from(ok);
        }
    }
    for (c, adm) in analysis.classes.iter().zip(&analysis.admissibility) {
        let slot = if c.index == 1 { &mut row.strict_type1 } else { &mut row.strict_type2 };
        slot.1 += 1;
        slot.0 += usize::from(adm.admissible);
    }
    Ok(row)
}

/// Display name used in the table: the trivial group prints as `{e}`.
pub fn display_name(preset: &str) -> &str {
    if preset == "trivial" {
        "{e}"
    } else {
        preset
    }
}

/// Builds the rows for the given presets in parallel. A failing group yields
/// an error entry and does not stop the others.
pub fn build_table(presets: &[&str], max_order: usize, tol: Tolerances) -> Vec<std::result::Result<TableRow, (String, String)>> {
    presets
        .par_iter()
        .map(|&name| {
            let run = || -> Result<TableRow> {
                let spec = GroupSpec::parse(name)?;
                if spec.requires_float() {
                    let g = spec.build::<f64>(max_order, tol)?;
                    table_row(display_name(name), &GroupAnalysis::new(g)?)
                } else {
                    let g = spec.build::<num_rational::BigRational>(max_order, tol)?;
                    table_row(display_name(name), &GroupAnalysis::new(g)?)
                }
            };
            run().map_err(|e| (display_name(name).to_string(), e.to_string()))
        })
        .collect()
}

pub fn render_markdown(rows: &[std::result::Result<TableRow, (String, String)>]) -> String {
    let mut out = String::from("| G | Type 1 | Type 2 |\n|---|---|---|\n");
    for r in rows {
        let _ = match r {
            Ok(r) => writeln!(out, "| {} | {}/{} | {}/{} |", r.group, r.type1.0, r.type1.1, r.type2.0, r.type2.1),
            Err((g, e)) => writeln!(out, "| {g} | error: {e} | |"),
        };
    }
    out
}

pub fn render_csv(rows: &[std::result::Result<TableRow, (String, String)>]) -> String {
    let mut out = String::from("group,order,type1_admissible,type1_total,type2_admissible,type2_total\n");
    for r in rows.iter().flatten() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.group, r.order, r.type1.0, r.type1.1, r.type2.0, r.type2.1
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let rows = build_table(&[], 48, Tolerances::default());
        assert_eq!(render_markdown(&rows).lines().count(), 2);
    }

    #[test]
    fn small_rows() {
        let rows = build_table(&["C2", "C3", "trivial"], 48, Tolerances::default());
        let md = render_markdown(&rows);
        assert!(md.contains("| C2 | 2/2 | 1/1 |"));
        assert!(md.contains("| C3 | 2/2 | 0/0 |"));
        assert!(md.contains("| {e} | 1/1 | 0/0 |"));
    }

    #[test]
    fn failures_are_reported_per_group() {
        let rows = build_table(&["C2", "nonsense", "C8"], 4, Tolerances::default());
        assert!(rows[0].is_ok());
        assert!(rows[1].is_err());
        assert!(rows[2].is_err());
    }
}
