//! Aggregation of run records into per-class tables and plot data.
//!
//! Means are taken over the instances every compared algorithm solved, so
//! each column averages the same instance set.

use std::{
    collections::{BTreeMap, BTreeSet},
    fmt::Write as _,
    fs, io,
    path::{Path, PathBuf},
};

use crate::record::{RunRecord, Status};

/// One algorithm group in a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub label: String,
    pub header: String,
    /// Emit the mean time next to the mean ratio.
    pub time: bool,
}

impl Column {
    pub fn new(label: impl Into<String>) -> Self {
        let label = label.into();
        Column { header: label.clone(), label, time: true }
    }

    pub fn ratio_only(mut self) -> Self {
        self.time = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub class: String,
    /// Instances in the common solved set.
    pub instances: usize,
    /// Mean ratio and mean seconds per column.
    pub means: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub columns: Vec<Column>,
    pub rows: Vec<AggregateRow>,
    pub average: Option<AggregateRow>,
}

/// Ratio and seconds per (instance, label), averaged over repeated runs.
fn solved_values(records: &[RunRecord]) -> BTreeMap<(&str, &str), (f64, f64, &str)> {
    let mut acc: BTreeMap<(&str, &str), (f64, f64, usize, &str)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.solved()) {
        let e = acc.entry((r.instance.as_str(), r.algorithm.as_str())).or_insert((0.0, 0.0, 0, r.class.as_str()));
        e.0 += r.ratio.expect("solved");
        e.1 += r.seconds;
        e.2 += 1;
    }
    acc.into_iter().map(|(k, (r, s, n, c))| (k, (r / n as f64, s / n as f64, c))).collect()
}

/// Instances solved by every label, with their class.
pub fn common_solved(records: &[RunRecord], labels: &[&str]) -> Vec<(String, String)> {
    let values = solved_values(records);
    let instances: BTreeSet<&str> = records.iter().map(|r| r.instance.as_str()).collect();
    instances
        .into_iter()
        .filter(|i| labels.iter().all(|l| values.contains_key(&(*i, *l))))
        .filter_map(|i| labels.first().map(|l| (i.to_string(), values[&(i, *l)].2.to_string())))
        .collect()
}

fn mean_row(class: String, instances: &[&str], labels: &[&str], values: &BTreeMap<(&str, &str), (f64, f64, &str)>) -> AggregateRow {
    let n = instances.len() as f64;
    let means = labels
        .iter()
        .map(|l| {
            let (r, s) = instances.iter().fold((0.0, 0.0), |(r, s), i| {
                let v = values[&(*i, *l)];
                (r + v.0, s + v.1)
            });
            (r / n, s / n)
        })
        .collect();
    AggregateRow { class, instances: instances.len(), means }
}

/// Per-class means plus the overall average over the common solved set.
pub fn aggregate(records: &[RunRecord], columns: &[Column]) -> Aggregate {
    let labels: Vec<&str> = columns.iter().map(|c| c.label.as_str()).collect();
    let values = solved_values(records);
    let common = common_solved(records, &labels);
    let mut by_class: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (inst, class) in &common {
        by_class.entry(class.as_str()).or_default().push(inst.as_str());
    }
    let rows = by_class.iter().map(|(c, insts)| mean_row(c.to_string(), insts, &labels, &values)).collect();
    let all: Vec<&str> = common.iter().map(|(i, _)| i.as_str()).collect();
    let average = (!all.is_empty()).then(|| mean_row("Average".into(), &all, &labels, &values));
    Aggregate { columns: columns.to_vec(), rows, average }
}

impl Aggregate {
    fn write_row(&self, out: &mut String, row: &AggregateRow) {
        out.push_str(&row.class);
        for (col, (ratio, secs)) in self.columns.iter().zip(&row.means) {
            let _ = write!(out, ",{ratio:.3}");
            if col.time {
                let _ = write!(out, ",{secs:.3}");
            }
        }
        out.push('\n');
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("class");
        for c in &self.columns {
            let _ = write!(out, ",{}_ratio", c.header);
            if c.time {
                let _ = write!(out, ",{}_time", c.header);
            }
        }
        out.push('\n');
        for row in &self.rows {
            self.write_row(&mut out, row);
        }
        if let Some(avg) = &self.average {
            self.write_row(&mut out, avg);
        }
        out
    }

    /// The `Average` line alone, without a newline.
    pub fn average_line(&self) -> Option<String> {
        let avg = self.average.as_ref()?;
        let mut out = String::new();
        self.write_row(&mut out, avg);
        out.pop();
        Some(out)
    }
}

/// Per-label count of instances solved within the limit.
pub fn solved_counts(records: &[RunRecord], labels: &[&str]) -> Vec<(String, usize, usize)> {
    let total = records.iter().map(|r| r.instance.as_str()).collect::<BTreeSet<_>>().len();
    labels
        .iter()
        .map(|l| {
            let solved = records
                .iter()
                .filter(|r| r.algorithm == *l && r.status == Status::Ok)
                .map(|r| r.instance.as_str())
                .collect::<BTreeSet<_>>()
                .len();
            (l.to_string(), solved, total)
        })
        .collect()
}

pub fn solved_counts_csv(records: &[RunRecord], columns: &[Column]) -> String {
    let labels: Vec<&str> = columns.iter().map(|c| c.label.as_str()).collect();
    let mut out = String::from("Algorithm,Solved cases,Percent\n");
    for (col, (_, solved, total)) in columns.iter().zip(solved_counts(records, &labels)) {
        let label = &col.header;
        let pct = if total == 0 { 0.0 } else { 100.0 * solved as f64 / total as f64 };
        let _ = writeln!(out, "{label},{solved},{pct:.0}%");
    }
    out
}

fn order_key(label: &str) -> (u8, usize, u8, String) {
    if let Some(rest) = label.strip_prefix("ir-k") {
        let (k, cached) = match rest.strip_suffix("-nocache") {
            Some(k) => (k, 0),
            None => (rest, 1),
        };
        if let Ok(k) = k.parse() {
            return (3, k, cached, String::new());
        }
    }
    let rank = match label {
        "dw" => 0,
        "greedy" => 1,
        "zel" => 2,
        "zel-two-largest" => 2,
        "msls" => 4,
        _ => 5,
    };
    (rank, 0, 0, label.to_string())
}

/// Labels present in `records`, in display order.
pub fn labels_in(records: &[RunRecord]) -> Vec<String> {
    let mut labels: Vec<String> =
        records.iter().map(|r| r.algorithm.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    labels.sort_by_key(|l| order_key(l));
    labels
}

/// IR labels with the shared cache, ordered by k.
pub fn k_sweep_labels(records: &[RunRecord]) -> Vec<String> {
    labels_in(records).into_iter().filter(|l| l.starts_with("ir-k") && !l.ends_with("-nocache")).collect()
}

/// Multistart runs are reported as `MS-naive`: the move interleaving is this
/// implementation's own convention.
fn display_column(label: &str) -> Column {
    let mut c = Column::new(label);
    if label == "msls" {
        c.header = "MS-naive".into();
    }
    c
}

/// Writes `table1.csv`, `table2.csv` and, when IR ran, `table3.csv`.
pub fn write_aggregate(records: &[RunRecord], out: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let labels = labels_in(records);
    let mut written = Vec::new();
    let mut put = |name: &str, text: String| -> io::Result<()> {
        let p = out.join(name);
        fs::write(&p, text)?;
        written.push(p);
        Ok(())
    };
    let columns: Vec<Column> = labels.iter().map(|l| display_column(l)).collect();
    put("table1.csv", solved_counts_csv(records, &columns))?;
    put("table2.csv", aggregate(records, &columns).to_csv())?;
    let sweep = k_sweep_labels(records);
    if !sweep.is_empty() {
        let columns: Vec<Column> = sweep.iter().map(Column::new).collect();
        put("table3.csv", aggregate(records, &columns).to_csv())?;
    }
    Ok(written)
}

pub const BIN_WIDTH: f64 = 0.01;

/// Bin index of a ratio; bin 100 starts at 1.00.
fn bin_of(ratio: f64) -> i64 {
    (ratio / BIN_WIDTH + 1e-9).floor() as i64
}

/// Ratio counts per 0.01-wide bin for each label, over the common solved set.
pub fn histogram_csv(records: &[RunRecord], labels: &[&str]) -> String {
    let values = solved_values(records);
    let common = common_solved(records, labels);
    let mut counts: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (inst, _) in &common {
        for (j, l) in labels.iter().enumerate() {
            let b = bin_of(values[&(inst.as_str(), *l)].0);
            counts.entry(b).or_insert_with(|| vec![0; labels.len()])[j] += 1;
        }
    }
    let mut out = String::from("bin");
    for l in labels {
        let _ = write!(out, ",{l}");
    }
    out.push('\n');
    if let (Some(&lo), Some(&hi)) = (counts.keys().next(), counts.keys().next_back()) {
        for b in lo..=hi {
            let _ = write!(out, "{:.2}", b as f64 * BIN_WIDTH);
            for c in counts.get(&b).cloned().unwrap_or_else(|| vec![0; labels.len()]) {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
    }
    out
}

/// Per-instance ratio pairs of two labels over the instances every label in
/// `within` solved.
pub fn scatter_csv(records: &[RunRecord], a: &str, b: &str, within: &[&str]) -> String {
    let values = solved_values(records);
    let mut out = format!("instance,{a},{b}\n");
    let mut labels = within.to_vec();
    labels.extend([a, b]);
    for (inst, _) in common_solved(records, &labels) {
        let (ra, rb) = (values[&(inst.as_str(), a)].0, values[&(inst.as_str(), b)].0);
        let _ = writeln!(out, "{inst},{ra:.3},{rb:.3}");
    }
    out
}

/// `histogram.csv` plus one `scatter_<a>__<b>.csv` per label pair.
pub fn emit_plots(records: &[RunRecord], out: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let labels = labels_in(records);
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut written = vec![out.join("histogram.csv")];
    fs::write(&written[0], histogram_csv(records, &refs))?;
    for (i, a) in refs.iter().enumerate() {
        for b in &refs[i + 1..] {
            let p = out.join(format!("scatter_{a}__{b}.csv"));
            fs::write(&p, scatter_csv(records, a, b, &refs))?;
            written.push(p);
        }
    }
    Ok(written)
}
