//! Definition files: a line-oriented, sectioned key-value format.
//!
//! ```text
//! file     := (blank | comment | section)*
//! comment  := '#' text                     (also allowed after a value)
//! section  := '[' KIND ' ' NAME ']' NL (key '=' value NL)*
//! KIND     := chart | foliation | map | witness | slice | point
//! ```
//!
//! | kind      | keys                                                                         |
//! |-----------|------------------------------------------------------------------------------|
//! | chart     | `vars` (comma list), `avoid` (repeatable polynomial), `meta.<key>`           |
//! | foliation | `chart`, `gen` (repeatable vector field)                                     |
//! | map       | `source`, `target`, `comp` (one per target variable), `surjective`, `connected_fibers` (`unknown`, `asserted` or `structural`) |
//! | witness   | `pi_M`, `pi_N` (map names)                                                   |
//! | slice     | `chart`, `fix.<var>` (rational)                                              |
//! | point     | `chart`, `coords` (comma list of rationals)                                  |
//!
//! Names are referenced only after their section. Errors carry the 1-based
//! line and column of the offending text.

use std::fmt::Write as _;
use std::sync::Arc;

use folmod_core::algebra::display::poly_to_string;
use folmod_core::algebra::Rational;
use folmod_core::gallery::{GalleryEntry, SliceSpec};
use folmod_core::geometry::{Chart, FlagStatus, MapAssertions, PolyMap, RationalPoint, VectorField};
use folmod_core::foliation::SingularFoliation;
use folmod_core::morita::MoritaWitness;

use crate::expr::{parse_field, parse_polynomial, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct DefError {
    /// Set when a kernel resource cap, not the text, caused the failure.
    pub cap: bool,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// The objects declared in one file, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    pub charts: Vec<Arc<Chart>>,
    pub foliations: Vec<(String, SingularFoliation)>,
    pub maps: Vec<PolyMap>,
    pub witnesses: Vec<MoritaWitness>,
    pub slices: Vec<SliceSpec>,
    pub points: Vec<(String, RationalPoint)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no {kind} named {name}")]
pub struct Missing {
    pub kind: &'static str,
    pub name: String,
}

fn missing(kind: &'static str, name: &str) -> Missing {
    Missing { kind, name: name.to_string() }
}

impl Definitions {
    pub fn chart(&self, name: &str) -> Result<&Arc<Chart>, Missing> {
        self.charts.iter().find(|c| c.name() == name).ok_or_else(|| missing("chart", name))
    }

    pub fn foliation(&self, name: &str) -> Result<&SingularFoliation, Missing> {
        self.foliations.iter().find(|(n, _)| n == name).map(|(_, f)| f).ok_or_else(|| missing("foliation", name))
    }

    pub fn map(&self, name: &str) -> Result<&PolyMap, Missing> {
        self.maps.iter().find(|m| m.name() == name).ok_or_else(|| missing("map", name))
    }

    pub fn witness(&self, name: &str) -> Result<&MoritaWitness, Missing> {
        self.witnesses.iter().find(|w| w.name == name).ok_or_else(|| missing("witness", name))
    }

    pub fn slice(&self, name: &str) -> Result<&SliceSpec, Missing> {
        self.slices.iter().find(|s| s.name == name).ok_or_else(|| missing("slice", name))
    }

    pub fn point(&self, name: &str) -> Result<&RationalPoint, Missing> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, p)| p).ok_or_else(|| missing("point", name))
    }

    /// The objects of a gallery entry; witness maps that are not already
    /// listed are added under `<witness>.pi_M` / `<witness>.pi_N`.
    pub fn from_gallery(entry: &GalleryEntry) -> Self {
        let mut maps = entry.maps.clone();
        let mut witnesses = Vec::new();
        for w in &entry.witnesses {
            let mut adopt = |m: &PolyMap, side: &str| -> PolyMap {
                if let Some(existing) = maps.iter().find(|k| k.name() == m.name()) {
                    if same_map(existing, m) {
                        return existing.clone();
                    }
                }
                let renamed = m.clone().with_name(&format!("{}.{side}", w.name));
                if !maps.iter().any(|k| k.name() == renamed.name()) {
                    maps.push(renamed.clone());
                }
                renamed
            };
            let pi_m = adopt(&w.pi_m, "pi_M");
            let pi_n = adopt(&w.pi_n, "pi_N");
            witnesses.push(MoritaWitness { name: w.name.clone(), pi_m, pi_n });
        }
        Definitions {
            charts: entry.charts.clone(),
            foliations: entry.foliations.clone(),
            maps,
            witnesses,
            slices: entry.slices.clone(),
            points: entry.points.clone(),
        }
    }

    /// Renders the file; [`parse`] of the output declares equal objects.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        for c in &self.charts {
            let _ = writeln!(out, "[chart {}]", c.name());
            let _ = writeln!(out, "vars = {}", c.vars().join(", "));
            for a in c.avoid() {
                let _ = writeln!(out, "avoid = {}", poly_to_string(a, c.vars()));
            }
            for (k, v) in c.metadata() {
                let _ = writeln!(out, "meta.{k} = {v}");
            }
            out.push('\n');
        }
        for (name, f) in &self.foliations {
            let _ = writeln!(out, "[foliation {name}]");
            let _ = writeln!(out, "chart = {}", f.chart().name());
            for g in f.generators() {
                let _ = writeln!(out, "gen = {g}");
            }
            out.push('\n');
        }
        for m in &self.maps {
            let _ = writeln!(out, "[map {}]", m.name());
            let _ = writeln!(out, "source = {}", m.source().name());
            let _ = writeln!(out, "target = {}", m.target().name());
            for c in m.components() {
                let _ = writeln!(out, "comp = {}", poly_to_string(c, m.source().vars()));
            }
            let d = m.declared();
            let _ = writeln!(out, "surjective = {}", d.surjective.as_str());
            let _ = writeln!(out, "connected_fibers = {}", d.connected_fibers.as_str());
            out.push('\n');
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "[witness {}]", w.name);
            let _ = writeln!(out, "pi_M = {}", w.pi_m.name());
            let _ = writeln!(out, "pi_N = {}", w.pi_n.name());
            out.push('\n');
        }
        for s in &self.slices {
            let _ = writeln!(out, "[slice {}]", s.name);
            let _ = writeln!(out, "chart = {}", s.chart);
            let vars = self.chart(&s.chart).map(|c| c.vars().to_vec()).unwrap_or_default();
            for (i, c) in &s.fixed {
                let var = vars.get(*i).cloned().unwrap_or_else(|| i.to_string());
                let _ = writeln!(out, "fix.{var} = {c}");
            }
            out.push('\n');
        }
        for (name, p) in &self.points {
            let _ = writeln!(out, "[point {name}]");
            let _ = writeln!(out, "chart = {}", p.chart().name());
            let _ = writeln!(out, "coords = {}", list(p.coords()));
            out.push('\n');
        }
        while out.ends_with("\n\n") {
            out.pop();
        }
        out
    }
}

fn same_map(a: &PolyMap, b: &PolyMap) -> bool {
    a.source() == b.source() && a.target() == b.target() && a.components() == b.components()
}

/// One `key = value` line.
#[derive(Clone, Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    /// Column of the first character of `value`.
    column: usize,
}

struct Section {
    kind: String,
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn err(&self, message: impl Into<String>) -> DefError {
        DefError { cap: false, line: self.line, column: 1, message: message.into() }
    }

    fn kernel<E: std::fmt::Display>(&self, e: E, cap: bool) -> DefError {
        DefError { cap, ..self.err(e.to_string()) }
    }

    fn all<'a>(&'a self, key: &str) -> impl Iterator<Item = &'a Entry> + 'a {
        let key = key.to_string();
        self.entries.iter().filter(move |e| e.key == key)
    }

    fn one(&self, key: &str) -> Result<Option<&Entry>, DefError> {
        let mut it = self.all(key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return Err(at(dup, 1, format!("duplicate key {key}")));
        }
        Ok(first)
    }

    fn required(&self, key: &str) -> Result<&Entry, DefError> {
        self.one(key)?.ok_or_else(|| self.err(format!("[{} {}] is missing `{key}`", self.kind, self.name)))
    }

    fn check_keys(&self, allowed: &[&str], prefixes: &[&str]) -> Result<(), DefError> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) && !prefixes.iter().any(|p| e.key.starts_with(p)) {
                return Err(DefError { cap: false, line: e.line, column: 1, message: format!("unknown key {} in a {} section", e.key, self.kind) });
            }
        }
        Ok(())
    }
}

/// Error at byte offset `offset` (1-based, in characters) inside a value.
fn at(e: &Entry, offset: usize, message: impl Into<String>) -> DefError {
    DefError { cap: false, line: e.line, column: e.column + offset - 1, message: message.into() }
}

fn expr_err(e: &Entry, err: ParseError) -> DefError {
    at(e, err.column, err.kind.to_string())
}

fn split_list(e: &Entry) -> Vec<(usize, String)> {
    if e.value.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut start = 0;
    for piece in e.value.split(',') {
        let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
        out.push((start + lead + 1, piece.trim().to_string()));
        start += piece.chars().count() + 1;
    }
    out
}

fn rational(e: &Entry, offset: usize, s: &str) -> Result<Rational, DefError> {
    s.parse().map_err(|_| at(e, offset, format!("not a rational number: {s:?}")))
}

fn lookup<T>(e: &Entry, r: Result<T, Missing>) -> Result<T, DefError> {
    r.map_err(|m| at(e, 1, m.to_string()))
}

fn flag(e: Option<&Entry>) -> Result<FlagStatus, DefError> {
    match e.map(|e| (e, e.value.as_str())) {
        None | Some((_, "unknown")) => Ok(FlagStatus::Unknown),
        Some((_, "asserted")) => Ok(FlagStatus::Asserted),
        Some((_, "structural")) => Ok(FlagStatus::Structural),
        Some((e, v)) => Err(at(e, 1, format!("expected unknown, asserted or structural, found {v:?}"))),
    }
}

fn lex(text: &str) -> Result<Vec<Section>, DefError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| DefError { cap: false, line, column: indent + trimmed.chars().count(), message: "expected ] at end of section header".into() })?;
            let mut parts = inner.split_whitespace();
            let (Some(kind), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(DefError { cap: false, line, column: indent + 2, message: "section header must be [kind name]".into() });
            };
            if !["chart", "foliation", "map", "witness", "slice", "point"].contains(&kind) {
                return Err(DefError { cap: false, line, column: indent + 2, message: format!("unknown section kind {kind}") });
            }
            sections.push(Section { kind: kind.into(), name: name.into(), line, entries: Vec::new() });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(DefError { cap: false, line, column: indent + 1, message: "expected key = value".into() });
        };
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(DefError { cap: false, line, column: indent + 1, message: "empty key".into() });
        }
        let after = &content[eq + 1..];
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let column = content[..eq].chars().count() + 2 + lead;
        let entry = Entry { key: key.into(), value: after.trim().into(), line, column };
        match sections.last_mut() {
            Some(s) => s.entries.push(entry),
            None => return Err(DefError { cap: false, line, column: indent + 1, message: "key outside of any section".into() }),
        }
    }
    Ok(sections)
}

/// Parses and builds every declared object.
pub fn parse(text: &str) -> Result<Definitions, DefError> {
    let mut defs = Definitions::default();
    for s in lex(text)? {
        let taken = match s.kind.as_str() {
            "chart" => defs.chart(&s.name).is_ok(),
            "foliation" => defs.foliation(&s.name).is_ok(),
            "map" => defs.map(&s.name).is_ok(),
            "witness" => defs.witness(&s.name).is_ok(),
            "slice" => defs.slice(&s.name).is_ok(),
            _ => defs.point(&s.name).is_ok(),
        };
        if taken {
            return Err(s.err(format!("{} {} declared twice", s.kind, s.name)));
        }
        match s.kind.as_str() {
            "chart" => {
                s.check_keys(&["vars", "avoid"], &["meta."])?;
                let vars_entry = s.required("vars")?;
                let vars: Vec<String> = split_list(vars_entry).into_iter().map(|(_, v)| v).collect();
                for (off, v) in split_list(vars_entry) {
                    let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(at(vars_entry, off, format!("not a variable name: {v:?}")));
                    }
                }
                let mut chart = Chart::new(s.name.clone(), vars.clone()).map_err(|e| at(vars_entry, 1, e.to_string()))?;
                for e in s.all("avoid") {
                    let p = parse_polynomial(&e.value, &vars).map_err(|err| expr_err(e, err))?;
                    chart = chart.with_avoid(p).map_err(|err| at(e, 1, err.to_string()))?;
                }
                for e in s.entries.iter().filter(|e| e.key.starts_with("meta.")) {
                    chart = chart.with_meta(&e.key["meta.".len()..], &e.value);
                }
                defs.charts.push(Arc::new(chart));
            }
            "foliation" => {
                s.check_keys(&["chart", "gen"], &[])?;
                let ce = s.required("chart")?;
                let chart = lookup(ce, defs.chart(&ce.value))?.clone();
                let mut gens = Vec::new();
                for e in s.all("gen") {
                    let comps = parse_field(&e.value, chart.vars()).map_err(|err| expr_err(e, err))?;
                    gens.push(VectorField::new(&chart, comps).map_err(|err| at(e, 1, err.to_string()))?);
                }
                if gens.is_empty() {
                    return Err(s.err(format!("foliation {} has no `gen` lines", s.name)));
                }
                let f = SingularFoliation::new(&chart, gens).map_err(|e| s.kernel(&e, e.is_cap()))?;
                defs.foliations.push((s.name.clone(), f));
            }
            "map" => {
                s.check_keys(&["source", "target", "comp", "surjective", "connected_fibers"], &[])?;
                let se = s.required("source")?;
                let te = s.required("target")?;
                let source = lookup(se, defs.chart(&se.value))?.clone();
                let target = lookup(te, defs.chart(&te.value))?.clone();
                let comps = s
                    .all("comp")
                    .map(|e| parse_polynomial(&e.value, source.vars()).map_err(|err| expr_err(e, err)))
                    .collect::<Result<Vec<_>, _>>()?;
                if comps.len() != target.dim() {
                    return Err(s.err(format!("map {} has {} `comp` lines but its target has dimension {}", s.name, comps.len(), target.dim())));
                }
                let declared = MapAssertions { surjective: flag(s.one("surjective")?)?, connected_fibers: flag(s.one("connected_fibers")?)? };
                let m = PolyMap::new(&s.name, &source, &target, comps, declared).map_err(|e| s.kernel(&e, e.is_cap()))?;
                defs.maps.push(m);
            }
            "witness" => {
                s.check_keys(&["pi_M", "pi_N"], &[])?;
                let me = s.required("pi_M")?;
                let ne = s.required("pi_N")?;
                let pi_m = lookup(me, defs.map(&me.value))?.clone();
                let pi_n = lookup(ne, defs.map(&ne.value))?.clone();
                let w = MoritaWitness::new(&s.name, pi_m, pi_n).map_err(|e| s.err(e.to_string()))?;
                defs.witnesses.push(w);
            }
            "slice" => {
                s.check_keys(&["chart"], &["fix."])?;
                let ce = s.required("chart")?;
                let chart = lookup(ce, defs.chart(&ce.value))?.clone();
                let mut fixed = Vec::new();
                for e in s.entries.iter().filter(|e| e.key.starts_with("fix.")) {
                    let var = &e.key["fix.".len()..];
                    let i = chart.var_index(var).ok_or_else(|| DefError { cap: false, line: e.line, column: 1, message: format!("unknown variable {var}") })?;
                    if fixed.iter().any(|(j, _)| *j == i) {
                        return Err(DefError { cap: false, line: e.line, column: 1, message: format!("{var} fixed twice") });
                    }
                    fixed.push((i, rational(e, 1, &e.value)?));
                }
                fixed.sort_by_key(|(i, _)| *i);
                defs.slices.push(SliceSpec { name: s.name.clone(), chart: chart.name().to_string(), fixed });
            }
            _ => {
                s.check_keys(&["chart", "coords"], &[])?;
                let ce = s.required("chart")?;
                let chart = lookup(ce, defs.chart(&ce.value))?.clone();
                let e = s.required("coords")?;
                let coords = split_list(e).into_iter().map(|(off, v)| rational(e, off, &v)).collect::<Result<Vec<_>, _>>()?;
                let p = RationalPoint::new(&chart, coords).map_err(|err| at(e, 1, err.to_string()))?;
                defs.points.push((s.name.clone(), p));
            }
        }
    }
    Ok(defs)
}

/// Parses a comma-separated rational point.
pub fn parse_coords(text: &str) -> Option<Vec<Rational>> {
    if text.trim().is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|s| s.trim().parse().ok()).collect()
}
