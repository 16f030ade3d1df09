//! CSV and JSON renderings of a [`ScoreReport`], numbers fixed to six
//! decimals.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::value::RawValue;

use super::simulate::ScoreReport;

fn fixed(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.6}")).expect("a fixed-point number is valid JSON")
}

/// `group,top1,top10` style rows, one per group.
pub fn report_csv(report: &ScoreReport) -> String {
    let mut out = String::from("group");
    for k in &report.ks {
        write!(out, ",top{k}").unwrap();
    }
    out.push('\n');
    for g in &report.groups {
        write!(out, "{}", g.index).unwrap();
        for m in &g.means {
            write!(out, ",{m:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Group {
    group: usize,
    mius: usize,
    #[serde(flatten)]
    scores: BTreeMap<String, Box<RawValue>>,
}

#[derive(Serialize)]
struct Summary<'a> {
    v: u32,
    engine: &'a str,
    group_size: usize,
    mius: usize,
    skipped: usize,
    total: BTreeMap<String, Box<RawValue>>,
    groups: Vec<Group>,
    joints: &'a [usize],
}

fn scores(ks: &[usize], values: &[f64]) -> BTreeMap<String, Box<RawValue>> {
    ks.iter().zip(values).map(|(k, v)| (format!("top{k}"), fixed(*v))).collect()
}

pub fn report_json(report: &ScoreReport, engine: &str) -> String {
    let summary = Summary {
        v: 1,
        engine,
        group_size: report.group_size,
        mius: report.scored,
        skipped: report.skipped.len(),
        total: scores(&report.ks, &report.totals),
        groups: report
            .groups
            .iter()
            .map(|g| Group {
                group: g.index,
                mius: g.mius,
                scores: scores(&report.ks, &g.means),
            })
            .collect(),
        joints: &report.joints,
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}
