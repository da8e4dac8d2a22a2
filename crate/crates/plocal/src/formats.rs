//! Text formats: the `SSET/1` simplicial-set format, the `KINV/1`
//! k-invariant format, and the homology-profile JSON schema.
//!
//! `SSET/1` grammar (line oriented; `#` starts a comment):
//!
//! ```text
//! SSET/1
//! top_degree <N>
//! degree <q>: <name> <name> ...          # one line per degree, any order
//! d <i> <gen> = [s<j> ...] <gen'>        # the i-th face of <gen>
//! ```
//!
//! Generator names are global (no two generators share a name, whatever
//! their degrees). A face is a degeneracy word applied to a generator one
//! total degree down; the serializer always writes the word in normal form,
//! the parser accepts any word and normalizes. Every generator of positive
//! degree must have all of its faces defined.
//!
//! `KINV/1` encodes a simplicial map into `K(pi, m)` by its normalized
//! cocycle:
//!
//! ```text
//! KINV/1
//! group <f1,f2,...>                      # invariant factors of pi
//! target_degree <m>
//! u <gen> = <r1,r2,...>                  # value on a degree-m generator
//! ```
//!
//! Unlisted generators take the value zero.


use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::FiniteAbelianGroup;
use crate::homology::{HomologyGroup, HomologyProfile};
use crate::postnikov::EmValuedMap;
use crate::sset::{FinSimplicialSet, SimplexRef, SsetBuilder};
use crate::word::DegeneracyWord;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{0}")]
    Build(#[from] crate::sset::BuildError),
    #[error("invalid group: {0}")]
    Group(#[from] crate::abelian::GroupError),
    #[error("invalid profile JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, col, message: message.into() }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>, // (column, token)
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut col = 0;
        for piece in line.split_whitespace() {
            let at = line[col..].find(piece).map(|o| col + o).unwrap_or(col);
            tokens.push((at + 1, piece));
            col = at + piece.len();
        }
        if !tokens.is_empty() {
            out.push(Line { number: idx + 1, tokens });
        }
    }
    out
}

fn parse_usize(line: &Line, pos: usize, what: &str) -> Result<usize, FormatError> {
    let (col, tok) = line
        .tokens
        .get(pos)
        .ok_or_else(|| syntax(line.number, 1, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line.number, *col, format!("expected {what}, found `{tok}`")))
}

/// Parse the `SSET/1` format. Rejects unresolved references and incomplete
/// face tables; run the identity checker separately for deeper validation.
pub fn parse_sset(text: &str) -> Result<FinSimplicialSet, FormatError> {
    let lines = tokenize(text);
    let mut iter = lines.iter();
    let header = iter.next().ok_or_else(|| syntax(1, 1, "empty input, expected SSET/1"))?;
    if header.tokens[0].1 != "SSET/1" {
        return Err(syntax(header.number, header.tokens[0].0, "expected the header SSET/1"));
    }
    let tline = iter
        .next()
        .ok_or_else(|| syntax(header.number, 1, "missing top_degree line"))?;
    if tline.tokens[0].1 != "top_degree" {
        return Err(syntax(tline.number, tline.tokens[0].0, "expected `top_degree <N>`"));
    }
    let top = parse_usize(tline, 1, "top degree")?;
    let mut builder = SsetBuilder::new(top);
    let mut face_lines = Vec::new();
    for line in iter {
        match line.tokens[0].1 {
            "degree" => {
                let (col, spec) = line.tokens[1];
                let q: usize = spec
                    .trim_end_matches(':')
                    .parse()
                    .map_err(|_| syntax(line.number, col, format!("bad degree `{spec}`")))?;
                if q > top {
                    return Err(syntax(line.number, col, format!("degree {q} above top_degree {top}")));
                }
                let names = if spec.ends_with(':') { &line.tokens[2..] } else {
                    match line.tokens.get(2) {
                        Some(&(_, ":")) => &line.tokens[3..],
                        _ => return Err(syntax(line.number, col, "expected `degree <q>: ...`")),
                    }
                };
                for &(ncol, name) in names {
                    let reserved = name == "="
                        || name.strip_prefix('s').is_some_and(|r| r.parse::<usize>().is_ok());
                    if reserved {
                        return Err(syntax(
                            line.number,
                            ncol,
                            format!("`{name}` is reserved (degeneracy-word token)"),
                        ));
                    }
                    builder
                        .add_generator(q, name)
                        .map_err(|e| syntax(line.number, ncol, e.to_string()))?;
                }
            }
            "d" => face_lines.push(line),
            other => {
                return Err(syntax(
                    line.number,
                    line.tokens[0].0,
                    format!("expected `degree` or `d`, found `{other}`"),
                ))
            }
        }
    }
    for line in face_lines {
        let i = parse_usize(line, 1, "face index")?;
        let (gcol, gname) = *line
            .tokens
            .get(2)
            .ok_or_else(|| syntax(line.number, 1, "missing generator name"))?;
        let (q, g) = builder
            .lookup(gname)
            .ok_or_else(|| syntax(line.number, gcol, format!("unknown generator `{gname}`")))?;
        match line.tokens.get(3) {
            Some(&(_, "=")) => {}
            _ => return Err(syntax(line.number, gcol, "expected `=` after the generator")),
        }
        if q == 0 {
            return Err(syntax(line.number, gcol, "vertices have no faces"));
        }
        if i > q {
            return Err(syntax(line.number, gcol, format!("face index {i} out of range for degree {q}")));
        }
        let mut word = Vec::new();
        let mut target = None;
        for &(tcol, tok) in &line.tokens[4..] {
            if let Some(idx) = tok.strip_prefix('s').and_then(|s| s.parse::<usize>().ok()) {
                if target.is_none() {
                    word.push(idx);
                    continue;
                }
            }
            if target.is_some() {
                return Err(syntax(line.number, tcol, "unexpected token after the face target"));
            }
            target = Some((tcol, tok));
        }
        let (tcol, tname) = target
            .ok_or_else(|| syntax(line.number, 1, "missing face target"))?;
        let (tq, tg) = builder
            .lookup(tname)
            .ok_or_else(|| syntax(line.number, tcol, format!("unresolved reference `{tname}`")))?;
        let w = DegeneracyWord::normalize(&word);
        if tq + w.len() + 1 != q {
            return Err(syntax(
                line.number,
                tcol,
                format!("face of a degree-{q} generator must have total degree {}", q - 1),
            ));
        }
        if !w.valid_on_degree(tq) {
            return Err(syntax(line.number, tcol, "degeneracy word out of range for its generator"));
        }
        builder.set_face(q, g, i, SimplexRef::new(tq, tg, w));
    }
    Ok(builder.finish()?)
}

/// Serialize to `SSET/1`; the output parses back to an identical set.
pub fn serialize_sset(set: &FinSimplicialSet, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("SSET/1\n");
    out.push_str(&format!("top_degree {}\n", set.top_degree()));
    for q in 0..=set.top_degree() {
        out.push_str(&format!("degree {q}:"));
        for g in 0..set.generator_count(q) {
            out.push(' ');
            out.push_str(set.generator_name(q, g));
        }
        out.push('\n');
    }
    for q in 1..=set.top_degree() {
        for g in 0..set.generator_count(q) {
            for i in 0..=q {
                let f = set.generator_face(q, g, i);
                let mut word = String::new();
                for idx in f.word().indices() {
                    word.push_str(&format!("s{idx} "));
                }
                out.push_str(&format!(
                    "d {i} {} = {word}{}\n",
                    set.generator_name(q, g),
                    set.generator_name(f.gen_degree(), f.gen_index()),
                ));
            }
        }
    }
    out
}

/// Parse a `KINV/1` file against its source simplicial set.
pub fn parse_kinv(text: &str, source: &FinSimplicialSet) -> Result<EmValuedMap, FormatError> {
    let lines = tokenize(text);
    let mut iter = lines.iter();
    let header = iter.next().ok_or_else(|| syntax(1, 1, "empty input, expected KINV/1"))?;
    if header.tokens[0].1 != "KINV/1" {
        return Err(syntax(header.number, header.tokens[0].0, "expected the header KINV/1"));
    }
    let gline = iter.next().ok_or_else(|| syntax(header.number, 1, "missing group line"))?;
    if gline.tokens[0].1 != "group" {
        return Err(syntax(gline.number, gline.tokens[0].0, "expected `group <factors>`"));
    }
    let (gcol, gspec) = gline.tokens[1];
    let factors: Vec<u64> = gspec
        .split(',')
        .map(|s| s.parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| syntax(gline.number, gcol, format!("bad group factors `{gspec}`")))?;
    let group = FiniteAbelianGroup::from_factors(&factors)?;
    let dline = iter.next().ok_or_else(|| syntax(gline.number, 1, "missing target_degree line"))?;
    if dline.tokens[0].1 != "target_degree" {
        return Err(syntax(dline.number, dline.tokens[0].0, "expected `target_degree <m>`"));
    }
    let m = parse_usize(dline, 1, "target degree")?;
    let mut values = vec![group.zero(); source.generator_count(m)];
    for line in iter {
        if line.tokens[0].1 != "u" {
            return Err(syntax(line.number, line.tokens[0].0, "expected a `u <gen> = <value>` line"));
        }
        let (ncol, name) = *line
            .tokens
            .get(1)
            .ok_or_else(|| syntax(line.number, 1, "missing generator name"))?;
        let (q, g) = source
            .generator_index(name)
            .ok_or_else(|| syntax(line.number, ncol, format!("unknown generator `{name}`")))?;
        if q != m {
            return Err(syntax(line.number, ncol, format!("generator `{name}` has degree {q}, expected {m}")));
        }
        match line.tokens.get(2) {
            Some(&(_, "=")) => {}
            _ => return Err(syntax(line.number, ncol, "expected `=` after the generator")),
        }
        let (vcol, vspec) = *line
            .tokens
            .get(3)
            .ok_or_else(|| syntax(line.number, ncol, "missing value"))?;
        let residues: Vec<i64> = vspec
            .split(',')
            .map(|s| s.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(line.number, vcol, format!("bad value `{vspec}`")))?;
        if residues.len() != group.factors().len() {
            return Err(syntax(
                line.number,
                vcol,
                format!("value needs {} residues, found {}", group.factors().len(), residues.len()),
            ));
        }
        values[g] = group.element(&residues);
    }
    Ok(EmValuedMap::new(group, m, values))
}

/// Serialize an EM-valued map as `KINV/1` (nonzero values only).
pub fn serialize_kinv(map: &EmValuedMap, source: &FinSimplicialSet, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("KINV/1\n");
    let factors: Vec<String> = map.group.factors().iter().map(|f| f.to_string()).collect();
    out.push_str(&format!("group {}\n", factors.join(",")));
    out.push_str(&format!("target_degree {}\n", map.target_degree));
    for (g, v) in map.values().iter().enumerate() {
        if !v.is_zero() {
            let rs: Vec<String> = v.residues().iter().map(|r| r.to_string()).collect();
            out.push_str(&format!(
                "u {} = {}\n",
                source.generator_name(map.target_degree, g),
                rs.join(",")
            ));
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GroupDto {
    #[serde(default)]
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ProfileDto {
    groups: Vec<GroupDto>,
}

/// Parse the homology-profile JSON schema: `{"groups": [{"free_rank": r,
/// "torsion": [d1, d2, ...]}, ...]}`, degrees implicit from position.
pub fn parse_profile(text: &str) -> Result<HomologyProfile, FormatError> {
    let dto: ProfileDto = serde_json::from_str(text)?;
    let groups = dto
        .groups
        .into_iter()
        .map(|g| HomologyGroup { free_rank: g.free_rank, torsion: g.torsion.into_iter().map(Into::into).collect() })
        .collect();
    Ok(HomologyProfile { groups })
}

pub fn profile_to_json(profile: &HomologyProfile) -> String {
    let dto = ProfileDto {
        groups: profile
            .groups
            .iter()
            .map(|g| GroupDto {
                free_rank: g.free_rank,
                torsion: g.torsion.iter().map(|d| u64::try_from(d).expect("small divisor")).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("profile serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_standard_simplex_round_trip() {
        let d2 = FinSimplicialSet::standard(2);
        let text = serialize_sset(&d2, Some("standard 2-simplex"));
        let back = parse_sset(&text).unwrap();
        assert_eq!(back, d2);
    }

    #[test]
    fn parse_degenerate_faces() {
        let text = "SSET/1\ntop_degree 2\ndegree 0: pt\ndegree 2: cell\n\
                    d 0 cell = s0 pt\nd 1 cell = s0 pt\nd 2 cell = s0 pt\n";
        let s = parse_sset(text).unwrap();
        assert!(s.check_simplicial_identities().is_valid());
        assert_eq!(s.generator_count(2), 1);
        let back = parse_sset(&serialize_sset(&s, None)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dangling_reference_is_named() {
        let text = "SSET/1\ntop_degree 1\ndegree 0: a\ndegree 1: e\nd 0 e = a\nd 1 e = ghost\n";
        let err = parse_sset(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("ghost"), "{msg}");
        assert!(msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn missing_face_is_reported() {
        let text = "SSET/1\ntop_degree 1\ndegree 0: a b\ndegree 1: e\nd 0 e = b\n";
        let err = parse_sset(text).unwrap_err();
        assert!(err.to_string().contains("missing face"), "{err}");
    }

    #[test]
    fn kinv_round_trip() {
        let src = FinSimplicialSet::standard(2);
        let group = FiniteAbelianGroup::from_factors(&[2, 4]).unwrap();
        let mut values = vec![group.zero(); src.generator_count(2)];
        values[0] = group.element(&[1, 3]);
        let map = EmValuedMap::new(group, 2, values);
        let text = serialize_kinv(&map, &src, Some("test"));
        let back = parse_kinv(&text, &src).unwrap();
        assert_eq!(back.values(), map.values());
        assert_eq!(back.target_degree, 2);
    }

    #[test]
    fn profile_json() {
        let text = r#"{"groups": [{"free_rank": 1}, {}, {"torsion": [2, 4]}]}"#;
        let p = parse_profile(text).unwrap();
        assert_eq!(p.dimension(), 2);
        assert_eq!(p.groups[0].free_rank, 1);
        assert_eq!(p.groups[2].torsion.len(), 2);
        let text2 = profile_to_json(&p);
        let p2 = parse_profile(&text2).unwrap();
        assert_eq!(p2.groups[2].torsion, p.groups[2].torsion);
    }
}
