//! Graph input/output: a plain edge-list text format and a small DOT
//! subset for directed graphs with integer node names.

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Parses the edge-list format: first non-comment line `n m`, then `m`
/// lines `u v` with 0-based endpoints. Lines starting with `#` and blank
/// lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = next_num(&mut it, "n")?;
    let m: usize = next_num(&mut it, "m")?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens on header: {header:?}")));
    }
    let mut g = Digraph::new(n);
    let mut count = 0usize;
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = next_num(&mut it, "u")?;
        let v: usize = next_num(&mut it, "v")?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens on arc line: {line:?}")));
        }
        g.add_arc(u, v)?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse(format!("header declares {m} arcs, found {count}")));
    }
    Ok(g)
}

fn next_num<'a, I: Iterator<Item = &'a str>>(it: &mut I, what: &str) -> Result<usize> {
    let tok = it
        .next()
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|e| Error::Parse(format!("bad {what} {tok:?}: {e}")))
}

pub fn write_edge_list(g: &Digraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a restricted DOT subset:
/// `digraph NAME? { statements }` where statements are `u -> v;` arc
/// declarations or bare `u;` node declarations, with integer node names.
/// Attributes in `[...]` are ignored. `//` line comments are stripped.
pub fn parse_dot(text: &str) -> Result<Digraph> {
    let stripped: String = text
        .lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let open = stripped
        .find('{')
        .ok_or_else(|| Error::Parse("missing '{' in dot input".into()))?;
    let close = stripped
        .rfind('}')
        .ok_or_else(|| Error::Parse("missing '}' in dot input".into()))?;
    let head = stripped[..open].trim();
    if !head.starts_with("digraph") {
        return Err(Error::Parse("only 'digraph' inputs are supported".into()));
    }
    let body = &stripped[open + 1..close];

    // First pass: collect all node ids to size the graph.
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut max_id: Option<usize> = None;
    for stmt in body.split(';') {
        // drop any attribute block
        let stmt = stmt.split('[').next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let parts: Vec<&str> = stmt.split("->").map(str::trim).collect();
        let ids: Vec<usize> = parts
            .iter()
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad dot node {p:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        for &id in &ids {
            max_id = Some(max_id.map_or(id, |m: usize| m.max(id)));
        }
        for w in ids.windows(2) {
            arcs.push((w[0], w[1]));
        }
    }
    let n = max_id.map_or(0, |m| m + 1);
    let mut g = Digraph::new(n);
    for (u, v) in arcs {
        // DOT files may repeat an arc; collapse duplicates silently
        g.ensure_arc(u, v)?;
    }
    Ok(g)
}

pub fn write_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph g {\n");
    for v in g.vertices() {
        if g.out_neighbors(v).is_empty() && g.in_neighbors(v).is_empty() {
            out.push_str(&format!("  {v};\n"));
        }
    }
    for (u, v) in g.arcs() {
        out.push_str(&format!("  {u} -> {v};\n"));
    }
    out.push_str("}\n");
    out
}

/// Parses a vertex set given as comma-separated 0-based ids, e.g. "0,3,5".
pub fn parse_vertex_set(text: &str) -> Result<std::collections::BTreeSet<usize>> {
    let mut set = std::collections::BTreeSet::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex {tok:?}: {e}")))?;
        set.insert(v);
    }
    Ok(set)
}
