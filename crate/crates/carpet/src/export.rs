//! DOT, CSV and JSON serializations of a built carpet.

use std::io::{self, Write};

use serde::Serialize;

use crate::build::{enumerate_holes, Coord, FiniteCarpet, Hole};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dot,
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "dot" => Some(Format::Dot),
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExportOptions {
    /// Emit absolute coordinates instead of root-relative ones.
    pub absolute: bool,
    /// Smallest hole level included in the JSON hole list.
    pub min_hole_level: u32,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            absolute: false,
            min_hole_level: 2,
        }
    }
}

pub fn export<W: Write>(
    g: &FiniteCarpet,
    format: Format,
    opts: &ExportOptions,
    out: &mut W,
) -> io::Result<()> {
    match format {
        Format::Dot => write_dot(g, opts, out),
        Format::Csv => write_csv(g, opts, out),
        Format::Json => write_json(g, opts, out),
    }
}

fn frame(g: &FiniteCarpet, opts: &ExportOptions, p: Coord) -> Coord {
    if opts.absolute {
        p
    } else {
        g.to_relative(p)
    }
}

fn node_name(c: Coord) -> String {
    format!("{}_{}", c.x, c.y)
}

pub fn write_dot<W: Write>(g: &FiniteCarpet, opts: &ExportOptions, out: &mut W) -> io::Result<()> {
    writeln!(out, "graph carpet {{")?;
    writeln!(out, "  node [shape=point];")?;
    let root = frame(g, opts, g.root_abs());
    for &v in g.vertices() {
        let v = frame(g, opts, v);
        if v == root {
            writeln!(out, "  \"{}\" [root=true];", node_name(v))?;
        } else {
            writeln!(out, "  \"{}\";", node_name(v))?;
        }
    }
    for (a, b) in g.edges() {
        writeln!(
            out,
            "  \"{}\" -- \"{}\";",
            node_name(frame(g, opts, a)),
            node_name(frame(g, opts, b))
        )?;
    }
    writeln!(out, "}}")
}

pub fn write_csv<W: Write>(g: &FiniteCarpet, opts: &ExportOptions, out: &mut W) -> io::Result<()> {
    writeln!(out, "# vertices")?;
    for &v in g.vertices() {
        let v = frame(g, opts, v);
        writeln!(out, "{},{}", v.x, v.y)?;
    }
    writeln!(out, "# edges")?;
    for (a, b) in g.edges() {
        let (a, b) = (frame(g, opts, a), frame(g, opts, b));
        writeln!(out, "{},{},{},{}", a.x, a.y, b.x, b.y)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonHole {
    level: u32,
    corners: [Coord; 4],
}

#[derive(Serialize)]
struct JsonCarpet {
    level: u32,
    side: i64,
    root: Coord,
    vertices: Vec<Coord>,
    edges: Vec<(Coord, Coord)>,
    holes: Vec<JsonHole>,
}

pub fn write_json<W: Write>(g: &FiniteCarpet, opts: &ExportOptions, out: &mut W) -> io::Result<()> {
    let holes: Vec<JsonHole> = if g.level() >= opts.min_hole_level.max(2) {
        enumerate_holes(g, opts.min_hole_level.max(2))
            .into_iter()
            .map(|h: Hole| JsonHole {
                level: h.hole_level,
                corners: [
                    frame(g, opts, h.a),
                    frame(g, opts, h.b),
                    frame(g, opts, h.c),
                    frame(g, opts, h.d),
                ],
            })
            .collect()
    } else {
        Vec::new()
    };
    let doc = JsonCarpet {
        level: g.level(),
        side: g.side(),
        root: frame(g, opts, g.root_abs()),
        vertices: g.vertices().iter().map(|&v| frame(g, opts, v)).collect(),
        edges: g
            .edges()
            .into_iter()
            .map(|(a, b)| (frame(g, opts, a), frame(g, opts, b)))
            .collect(),
        holes,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_level;
    use crate::word::WordSpec;

    fn lines_without_comments(s: &str) -> Vec<&str> {
        s.lines()
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .collect()
    }

    #[test]
    fn csv_level1() {
        let g = build_level(&WordSpec::parse("a(0)*").unwrap(), 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&g, &ExportOptions::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(lines_without_comments(&text).len(), 8); // 4 vertices + 4 edges
    }

    #[test]
    fn dot_level2() {
        let g = build_level(&WordSpec::parse("a(0)*").unwrap(), 2).unwrap();
        let mut buf = Vec::new();
        write_dot(&g, &ExportOptions::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.contains("--")).count(), 24);
        assert_eq!(
            text.lines()
                .filter(|l| l.trim_start().starts_with('"') && !l.contains("--"))
                .count(),
            16
        );
        assert_eq!(text.lines().filter(|l| l.contains("root=true")).count(), 1);
    }

    #[test]
    fn json_level3() {
        let g = build_level(&WordSpec::parse("b(7)*").unwrap(), 3).unwrap();
        let mut buf = Vec::new();
        write_json(&g, &ExportOptions::default(), &mut buf).unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["vertices"].as_array().unwrap().len(), 96);
        assert_eq!(doc["level"], 3);
        assert_eq!(doc["root"], serde_json::json!([0, 0]));
        assert_eq!(doc["holes"].as_array().unwrap().len(), 9);
    }
}
