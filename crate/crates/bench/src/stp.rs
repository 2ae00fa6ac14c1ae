//! SteinLib STP reader and writer.
//!
//! Supported subset: the magic header, `SECTION Graph` with `Nodes`, `Edges`
//! and `E` lines, `SECTION Terminals` with `Terminals` and `T` lines, and
//! `EOF`. Other sections are skipped. Keywords are case-insensitive. Node ids
//! are 1-based in the file and 0-based in memory.

use std::{fmt::Write as _, fs, path::Path};

use steiner_core::{Cost, Graph, NodeId, SteinerInstance};

const MAGIC: &str = "33D32945";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StpErrorKind {
    #[error("missing magic header")]
    MissingHeader,
    #[error("missing SECTION {0}")]
    MissingSection(&'static str),
    #[error("node index out of range: {0}")]
    NodeOutOfRange(i64),
    #[error("expected a non-negative integer, found {0:?}")]
    BadNumber(String),
    #[error("declared {declared} {what} but found {found}")]
    CountMismatch { what: &'static str, declared: usize, found: usize },
    #[error("empty terminal set")]
    EmptyTerminals,
    #[error("arc lines are not supported")]
    ArcsUnsupported,
    #[error("unexpected line {0:?}")]
    Unexpected(String),
    #[error("missing END of SECTION {0}")]
    UnterminatedSection(&'static str),
    #[error("{0}")]
    Instance(steiner_core::Error),
    #[error("{0}")]
    Io(String),
}

/// A parse failure. `line` is 1-based; 0 refers to the document as a whole.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct StpError {
    pub line: usize,
    pub kind: StpErrorKind,
}

fn fail<T>(line: usize, kind: StpErrorKind) -> Result<T, StpError> {
    Err(StpError { line, kind })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Graph,
    Terminals,
    Skipped,
}

#[derive(Default)]
struct Counts {
    declared: Option<usize>,
    found: usize,
}

fn number(tok: Option<&str>, line: usize) -> Result<u64, StpError> {
    let tok = tok.ok_or_else(|| StpError { line, kind: StpErrorKind::BadNumber(String::new()) })?;
    tok.parse().map_err(|_| StpError { line, kind: StpErrorKind::BadNumber(tok.to_string()) })
}

fn node(tok: Option<&str>, nodes: usize, line: usize) -> Result<NodeId, StpError> {
    let raw = tok.ok_or_else(|| StpError { line, kind: StpErrorKind::BadNumber(String::new()) })?;
    let id: i64 = raw.parse().map_err(|_| StpError { line, kind: StpErrorKind::BadNumber(raw.to_string()) })?;
    if id < 1 || id as u64 > nodes as u64 {
        return fail(line, StpErrorKind::NodeOutOfRange(id));
    }
    Ok(id as usize - 1)
}

/// Parses an STP document. Instances whose graph is disconnected are trimmed
/// to the component holding the terminals.
pub fn parse_stp(name: &str, text: &str) -> Result<SteinerInstance, StpError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l.to_ascii_uppercase().starts_with(MAGIC) => {}
        Some((n, _)) => return fail(n, StpErrorKind::MissingHeader),
        None => return fail(0, StpErrorKind::MissingHeader),
    }
    let mut section = Section::None;
    let mut open_name = "";
    let mut nodes: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId, Cost)> = Vec::new();
    let mut edge_count = Counts::default();
    let mut terminals: Vec<NodeId> = Vec::new();
    let mut terminal_count = Counts::default();
    let (mut saw_graph, mut saw_terminals, mut saw_eof) = (false, false, false);
    let mut last_line = 0;
    for (n, line) in lines {
        last_line = n;
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap_or_default().to_ascii_lowercase();
        if section == Section::None {
            match key.as_str() {
                "section" => {
                    let which = toks.next().unwrap_or_default().to_ascii_lowercase();
                    (section, open_name) = match which.as_str() {
                        "graph" => {
                            saw_graph = true;
                            (Section::Graph, "Graph")
                        }
                        "terminals" => {
                            saw_terminals = true;
                            (Section::Terminals, "Terminals")
                        }
                        _ => (Section::Skipped, "other"),
                    };
                }
                "eof" => {
                    saw_eof = true;
                    break;
                }
                _ => return fail(n, StpErrorKind::Unexpected(line.to_string())),
            }
            continue;
        }
        if key == "end" {
            match section {
                Section::Graph => {
                    if let Some(d) = edge_count.declared {
                        if d != edge_count.found {
                            return fail(
                                n,
                                StpErrorKind::CountMismatch { what: "edges", declared: d, found: edge_count.found },
                            );
                        }
                    }
                }
                Section::Terminals => {
                    if terminal_count.found == 0 {
                        return fail(n, StpErrorKind::EmptyTerminals);
                    }
                    if let Some(d) = terminal_count.declared {
                        if d != terminal_count.found {
                            return fail(
                                n,
                                StpErrorKind::CountMismatch {
                                    what: "terminals",
                                    declared: d,
                                    found: terminal_count.found,
                                },
                            );
                        }
                    }
                }
                _ => {}
            }
            section = Section::None;
            continue;
        }
        match section {
            Section::Graph => match key.as_str() {
                "nodes" => nodes = Some(number(toks.next(), n)? as usize),
                "edges" => edge_count.declared = Some(number(toks.next(), n)? as usize),
                "e" => {
                    let count = nodes.ok_or(StpError { line: n, kind: StpErrorKind::Unexpected(line.to_string()) })?;
                    let u = node(toks.next(), count, n)?;
                    let v = node(toks.next(), count, n)?;
                    let w = number(toks.next(), n)?;
                    edges.push((u, v, w));
                    edge_count.found += 1;
                }
                "a" | "arcs" => return fail(n, StpErrorKind::ArcsUnsupported),
                _ => return fail(n, StpErrorKind::Unexpected(line.to_string())),
            },
            Section::Terminals => match key.as_str() {
                "terminals" => {
                    let d = number(toks.next(), n)? as usize;
                    if d == 0 {
                        return fail(n, StpErrorKind::EmptyTerminals);
                    }
                    terminal_count.declared = Some(d);
                }
                "t" => {
                    let count = nodes.ok_or(StpError { line: n, kind: StpErrorKind::MissingSection("Graph") })?;
                    terminals.push(node(toks.next(), count, n)?);
                    terminal_count.found += 1;
                }
                // rooted variants name a root; it plays no role here
                "root" | "rootp" => {}
                _ => return fail(n, StpErrorKind::Unexpected(line.to_string())),
            },
            Section::Skipped | Section::None => {}
        }
    }
    if section != Section::None {
        return fail(last_line, StpErrorKind::UnterminatedSection(open_name));
    }
    if !saw_graph {
        return fail(0, StpErrorKind::MissingSection("Graph"));
    }
    if !saw_terminals {
        return fail(0, StpErrorKind::MissingSection("Terminals"));
    }
    if !saw_eof {
        return fail(last_line, StpErrorKind::Unexpected("missing EOF".into()));
    }
    let nodes = nodes.ok_or(StpError { line: 0, kind: StpErrorKind::BadNumber("missing Nodes".into()) })?;
    let graph = Graph::new(nodes, edges).map_err(|e| StpError { line: 0, kind: StpErrorKind::Instance(e) })?;
    let (instance, _) = SteinerInstance::trimmed(name, graph, terminals)
        .map_err(|e| StpError { line: 0, kind: StpErrorKind::Instance(e) })?;
    Ok(instance)
}

/// Reads and parses a file; the instance is named after the file stem.
pub fn read_stp(path: &Path) -> Result<SteinerInstance, StpError> {
    let text = fs::read_to_string(path).map_err(|e| StpError { line: 0, kind: StpErrorKind::Io(e.to_string()) })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_stp(&name, &text)
}

/// Canonical STP text: edges in the stored order, terminals ascending.
pub fn write_stp(instance: &SteinerInstance) -> String {
    let g = &instance.graph;
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} STP File, STP Format Version 1.0\n");
    let _ = writeln!(out, "SECTION Comment\nName \"{}\"\nEND\n", instance.name);
    let _ = writeln!(out, "SECTION Graph\nNodes {}\nEdges {}", g.node_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "E {} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    let _ = writeln!(out, "END\n\nSECTION Terminals\nTerminals {}", instance.terminals.len());
    for t in &instance.terminals {
        let _ = writeln!(out, "T {}", t + 1);
    }
    out.push_str("END\n\nEOF\n");
    out
}
