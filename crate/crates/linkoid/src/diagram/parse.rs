//! Text and JSON I/O for linkoid diagrams.
//!
//! Text format, one diagram per file:
//!
//! ```text
//! linkoid v1
//! open 1: a0 X0.u a1 X1.o a2    # arc walk from leg to head
//! open 2: b0 X0.o b1 X1.u b2
//! closed: c0 X2.u c1 X2.o       # cyclic walk
//! loops: 1                      # crossing-free circles
//! crossing X0: (a0 b1 a1 b0)    # CCW from the incoming under arc-end
//! ```
//!
//! Crossing quadruples are resolved against the walks; over/under data in
//! the walks is authoritative and any mismatch is a parse error. When the
//! over-strand enters and leaves a crossing by the same arc, the two
//! quadruple entries carry `>` (arriving end) and `<` (departing end).

use super::{Arc, ArcEnd, Attach, Crossing, DiagramError, LinkoidDiagram, PortRef};
use serde_json::{json, Value};
use std::collections::HashMap;

#[derive(Debug, Clone)]
enum Token {
    Arc(String),
    Passage { crossing: String, over: bool },
}

#[derive(Debug, Clone)]
struct QuadEntry {
    name: String,
    hint: Option<ArcEnd>,
}

#[derive(Debug, Default)]
struct Stanza {
    open: Vec<(Vec<Token>, usize)>,
    closed: Vec<(Vec<Token>, usize)>,
    loops: usize,
    crossings: Vec<(String, [QuadEntry; 4], usize)>,
}

fn err(line: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Parse {
        line,
        msg: msg.into(),
    }
}

fn lex_tokens(body: &str, line: usize) -> Result<Vec<Token>, DiagramError> {
    let mut out = Vec::new();
    for w in body.split_whitespace() {
        if let Some((name, tag)) = w.rsplit_once('.') {
            match tag {
                "u" => out.push(Token::Passage {
                    crossing: name.to_string(),
                    over: false,
                }),
                "o" => out.push(Token::Passage {
                    crossing: name.to_string(),
                    over: true,
                }),
                _ => return Err(err(line, format!("unknown passage tag '{w}'"))),
            }
        } else {
            out.push(Token::Arc(w.to_string()));
        }
    }
    Ok(out)
}

fn lex_quad(body: &str, line: usize) -> Result<[QuadEntry; 4], DiagramError> {
    let inner = body
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(line, "crossing quadruple must be parenthesized"))?;
    let entries: Vec<QuadEntry> = inner
        .split_whitespace()
        .map(|w| {
            if let Some(name) = w.strip_suffix('>') {
                QuadEntry {
                    name: name.to_string(),
                    hint: Some(ArcEnd::Head),
                }
            } else if let Some(name) = w.strip_suffix('<') {
                QuadEntry {
                    name: name.to_string(),
                    hint: Some(ArcEnd::Tail),
                }
            } else {
                QuadEntry {
                    name: w.to_string(),
                    hint: None,
                }
            }
        })
        .collect();
    entries
        .try_into()
        .map_err(|_| err(line, "crossing needs exactly 4 arc-ends"))
}

fn parse_stanza(text: &str) -> Result<Stanza, DiagramError> {
    let mut stanza = Stanza::default();
    let mut saw_header = false;
    let mut next_open = 1usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !saw_header {
            if content != "linkoid v1" {
                return Err(err(line, "expected header 'linkoid v1'"));
            }
            saw_header = true;
            continue;
        }
        let (keyword, rest) = content
            .split_once(':')
            .ok_or_else(|| err(line, "expected 'keyword: ...'"))?;
        let keyword = keyword.trim();
        if let Some(num) = keyword.strip_prefix("open") {
            let n: usize = num
                .trim()
                .parse()
                .map_err(|_| err(line, "open component needs an index"))?;
            if n != next_open {
                return Err(err(
                    line,
                    format!("open components must be numbered in order; expected {next_open}"),
                ));
            }
            next_open += 1;
            stanza.open.push((lex_tokens(rest, line)?, line));
        } else if keyword == "closed" {
            stanza.closed.push((lex_tokens(rest, line)?, line));
        } else if keyword == "loops" {
            stanza.loops = rest
                .trim()
                .parse()
                .map_err(|_| err(line, "loops needs a count"))?;
        } else if let Some(name) = keyword.strip_prefix("crossing") {
            stanza
                .crossings
                .push((name.trim().to_string(), lex_quad(rest, line)?, line));
        } else {
            return Err(err(line, format!("unknown keyword '{keyword}'")));
        }
    }
    if !saw_header {
        return Err(err(0, "empty input"));
    }
    Ok(stanza)
}

struct CrossingPassages {
    under: Option<(usize, usize)>, // (arriving arc, departing arc)
    over: Option<(usize, usize)>,
    line: usize,
}

fn build(stanza: Stanza) -> Result<LinkoidDiagram, DiagramError> {
    struct ArcTable {
        ids: HashMap<String, usize>,
        names: Vec<String>,
        froms: Vec<Option<Attach>>,
        tos: Vec<Option<Attach>>,
    }
    impl ArcTable {
        fn intern(&mut self, name: &str, line: usize) -> Result<usize, DiagramError> {
            if self.ids.contains_key(name) {
                return Err(err(line, format!("arc '{name}' appears in two walks")));
            }
            let id = self.names.len();
            self.ids.insert(name.to_string(), id);
            self.names.push(name.to_string());
            self.froms.push(None);
            self.tos.push(None);
            Ok(id)
        }
    }
    let mut arcs_tab = ArcTable {
        ids: HashMap::new(),
        names: Vec::new(),
        froms: Vec::new(),
        tos: Vec::new(),
    };
    let mut passages: HashMap<String, CrossingPassages> = HashMap::new();
    let record = |xname: &str,
                      over: bool,
                      arr: usize,
                      dep: usize,
                      line: usize,
                      passages: &mut HashMap<String, CrossingPassages>|
     -> Result<(), DiagramError> {
        let entry = passages.entry(xname.to_string()).or_insert(CrossingPassages {
            under: None,
            over: None,
            line,
        });
        let slot = if over {
            &mut entry.over
        } else {
            &mut entry.under
        };
        if slot.is_some() {
            return Err(err(
                line,
                format!(
                    "crossing '{xname}' passed {} twice",
                    if over { "over" } else { "under" }
                ),
            ));
        }
        *slot = Some((arr, dep));
        Ok(())
    };

    let n_open = stanza.open.len();
    for (j, (tokens, line)) in stanza.open.iter().enumerate() {
        if tokens.is_empty() || tokens.len() % 2 == 0 {
            return Err(err(*line, "open walk must alternate arc passage arc"));
        }
        let mut ids = Vec::new();
        for (k, t) in tokens.iter().enumerate() {
            match (k % 2 == 0, t) {
                (true, Token::Arc(name)) => ids.push(arcs_tab.intern(name, *line)?),
                (false, Token::Passage { .. }) => {}
                _ => return Err(err(*line, "open walk must alternate arc passage arc")),
            }
        }
        arcs_tab.froms[ids[0]] = Some(Attach::Endpoint(2 * j + 1));
        arcs_tab.tos[*ids.last().unwrap()] = Some(Attach::Endpoint(2 * j + 2));
        for (k, t) in tokens.iter().enumerate() {
            if let Token::Passage { crossing, over } = t {
                record(crossing, *over, ids[k / 2], ids[k / 2 + 1], *line, &mut passages)?;
            }
        }
    }
    for (tokens, line) in &stanza.closed {
        if tokens.is_empty() || tokens.len() % 2 != 0 {
            return Err(err(*line, "closed walk must alternate arc passage"));
        }
        let mut ids = Vec::new();
        for (k, t) in tokens.iter().enumerate() {
            match (k % 2 == 0, t) {
                (true, Token::Arc(name)) => ids.push(arcs_tab.intern(name, *line)?),
                (false, Token::Passage { .. }) => {}
                _ => return Err(err(*line, "closed walk must alternate arc passage")),
            }
        }
        for (k, t) in tokens.iter().enumerate() {
            if let Token::Passage { crossing, over } = t {
                let arr = ids[k / 2];
                let dep = ids[(k / 2 + 1) % ids.len()];
                record(crossing, *over, arr, dep, *line, &mut passages)?;
            }
        }
    }

    // resolve quadruples against the recorded passages
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut seen_lines: HashMap<String, ()> = HashMap::new();
    for (xname, quad, line) in &stanza.crossings {
        if seen_lines.insert(xname.clone(), ()).is_some() {
            return Err(err(*line, format!("crossing '{xname}' defined twice")));
        }
        let p = passages
            .get(xname)
            .ok_or_else(|| err(*line, format!("crossing '{xname}' not met by any walk")))?;
        let (u_in, u_out) = p.under.ok_or_else(|| {
            err(*line, format!("crossing '{xname}' is never passed under"))
        })?;
        let (o_in, o_out) = p
            .over
            .ok_or_else(|| err(*line, format!("crossing '{xname}' is never passed over")))?;
        let name_of = |id: usize| arcs_tab.names[id].as_str();
        if quad[0].name != name_of(u_in) || quad[2].name != name_of(u_out) {
            return Err(err(
                *line,
                format!(
                    "crossing '{xname}': slots 0/2 must be the under strand '{}' -> '{}'",
                    name_of(u_in),
                    name_of(u_out)
                ),
            ));
        }
        let x = crossings.len();
        let mut ports = [PortRef { arc: 0, end: ArcEnd::Tail }; 4];
        ports[0] = PortRef { arc: u_in, end: ArcEnd::Head };
        ports[2] = PortRef { arc: u_out, end: ArcEnd::Tail };
        if o_in != o_out {
            if quad[1].name == name_of(o_in) && quad[3].name == name_of(o_out) {
                ports[1] = PortRef { arc: o_in, end: ArcEnd::Head };
                ports[3] = PortRef { arc: o_out, end: ArcEnd::Tail };
            } else if quad[3].name == name_of(o_in) && quad[1].name == name_of(o_out) {
                ports[3] = PortRef { arc: o_in, end: ArcEnd::Head };
                ports[1] = PortRef { arc: o_out, end: ArcEnd::Tail };
            } else {
                return Err(err(
                    *line,
                    format!("crossing '{xname}': slots 1/3 do not match the over strand"),
                ));
            }
        } else {
            // over strand arrives and leaves by the same arc: need end hints
            if quad[1].name != name_of(o_in) || quad[3].name != name_of(o_in) {
                return Err(err(
                    *line,
                    format!("crossing '{xname}': slots 1/3 do not match the over strand"),
                ));
            }
            match (quad[1].hint, quad[3].hint) {
                (Some(ArcEnd::Head), Some(ArcEnd::Tail)) => {
                    ports[1] = PortRef { arc: o_in, end: ArcEnd::Head };
                    ports[3] = PortRef { arc: o_in, end: ArcEnd::Tail };
                }
                (Some(ArcEnd::Tail), Some(ArcEnd::Head)) => {
                    ports[1] = PortRef { arc: o_in, end: ArcEnd::Tail };
                    ports[3] = PortRef { arc: o_in, end: ArcEnd::Head };
                }
                _ => {
                    return Err(err(
                        *line,
                        format!("crossing '{xname}': ambiguous arc ends; use 'name>' and 'name<'"),
                    ))
                }
            }
        }
        for (s, p) in ports.iter().enumerate() {
            let att = Attach::Port {
                crossing: x,
                slot: s as u8,
            };
            let cell = match p.end {
                ArcEnd::Head => &mut arcs_tab.tos[p.arc],
                ArcEnd::Tail => &mut arcs_tab.froms[p.arc],
            };
            if cell.is_some() {
                return Err(err(
                    *line,
                    format!(
                        "arc '{}' has more than two incidences (non-involutive)",
                        arcs_tab.names[p.arc]
                    ),
                ));
            }
            *cell = Some(att);
        }
        crossings.push(Crossing { ports });
    }
    for (xname, p) in &passages {
        if !seen_lines.contains_key(xname) {
            return Err(err(
                p.line,
                format!("crossing '{xname}' has no quadruple line"),
            ));
        }
    }
    let mut arcs = Vec::with_capacity(arcs_tab.names.len());
    for (a, name) in arcs_tab.names.iter().enumerate() {
        match (arcs_tab.froms[a], arcs_tab.tos[a]) {
            (Some(f), Some(t)) => arcs.push(Arc { from: f, to: t }),
            _ => {
                return Err(err(
                    0,
                    format!("arc '{name}' has a dangling end (missing crossing reference)"),
                ))
            }
        }
    }
    let d = LinkoidDiagram {
        n_open,
        free_loops: stanza.loops,
        arcs,
        crossings,
    };
    d.validate()?;
    Ok(d)
}

/// Parse the text format.
pub fn parse_diagram(text: &str) -> Result<LinkoidDiagram, DiagramError> {
    build(parse_stanza(text)?)
}

/// Parse the JSON equivalent of the text format.
pub fn parse_diagram_json(v: &Value) -> Result<LinkoidDiagram, DiagramError> {
    let mut stanza = Stanza::default();
    let as_tokens = |v: &Value, what: &str| -> Result<Vec<Token>, DiagramError> {
        let items = v
            .as_array()
            .ok_or_else(|| err(0, format!("{what} must be an array of token strings")))?;
        let words: Vec<String> = items
            .iter()
            .map(|t| {
                t.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| err(0, format!("{what} token must be a string")))
            })
            .collect::<Result<_, _>>()?;
        lex_tokens(&words.join(" "), 0)
    };
    if let Some(open) = v.get("open") {
        for w in open.as_array().unwrap_or(&Vec::new()) {
            stanza.open.push((as_tokens(w, "open walk")?, 0));
        }
    }
    if let Some(closed) = v.get("closed") {
        for w in closed.as_array().unwrap_or(&Vec::new()) {
            stanza.closed.push((as_tokens(w, "closed walk")?, 0));
        }
    }
    stanza.loops = v.get("loops").and_then(Value::as_u64).unwrap_or(0) as usize;
    if let Some(xs) = v.get("crossings") {
        for item in xs
            .as_array()
            .ok_or_else(|| err(0, "crossings must be an array"))?
        {
            let row = item
                .as_array()
                .ok_or_else(|| err(0, "crossing row must be an array"))?;
            if row.len() != 5 {
                return Err(err(0, "crossing row must be [name, e0, e1, e2, e3]"));
            }
            let name = row[0]
                .as_str()
                .ok_or_else(|| err(0, "crossing name must be a string"))?;
            let quad_body = format!(
                "({} {} {} {})",
                row[1].as_str().unwrap_or(""),
                row[2].as_str().unwrap_or(""),
                row[3].as_str().unwrap_or(""),
                row[4].as_str().unwrap_or("")
            );
            stanza
                .crossings
                .push((name.to_string(), lex_quad(&quad_body, 0)?, 0));
        }
    }
    build(stanza)
}

/// Canonical text form (components ascending, crossings by first traversal).
pub(crate) fn print_diagram(d: &LinkoidDiagram) -> String {
    let layout = d.canonical_layout();
    let arc_name = |a: usize| format!("a{}", layout.arc_new[a]);
    let x_name = |x: usize| format!("X{}", layout.cross_new[x]);
    let mut out = String::from("linkoid v1\n");
    let walk_line = |steps: &[super::WalkStep]| -> String {
        let mut parts = Vec::new();
        for st in steps {
            parts.push(arc_name(st.arc));
            if let Some(p) = &st.passage {
                parts.push(format!(
                    "{}.{}",
                    x_name(p.crossing),
                    if p.over { 'o' } else { 'u' }
                ));
            }
        }
        parts.join(" ")
    };
    for (j, w) in layout.open_walks.iter().enumerate() {
        if w.start_label == 2 * j + 1 && w.end_label == 2 * j + 2 {
            out.push_str(&format!("open {}: {}\n", j + 1, walk_line(&w.steps)));
        } else {
            // strands of intermediate diagrams can pair arbitrary labels
            out.push_str(&format!(
                "open {}-{}: {}\n",
                w.start_label,
                w.end_label,
                walk_line(&w.steps)
            ));
        }
    }
    for w in &layout.closed_walks {
        out.push_str(&format!("closed: {}\n", walk_line(&w.steps)));
    }
    if d.free_loops > 0 {
        out.push_str(&format!("loops: {}\n", d.free_loops));
    }
    let mut order: Vec<(usize, usize)> = layout
        .cross_new
        .iter()
        .enumerate()
        .map(|(old, &new)| (new, old))
        .collect();
    order.sort_unstable();
    for (_, old) in order {
        let mut ports = d.crossings[old].ports;
        if ports[0].end == ArcEnd::Tail && ports[2].end == ArcEnd::Head {
            ports.rotate_left(2);
        }
        let ambiguous = ports[1].arc == ports[3].arc;
        let entry = |p: &PortRef| {
            if ambiguous {
                format!(
                    "{}{}",
                    arc_name(p.arc),
                    if p.end == ArcEnd::Head { '>' } else { '<' }
                )
            } else {
                arc_name(p.arc)
            }
        };
        out.push_str(&format!(
            "crossing {}: ({} {} {} {})\n",
            x_name(old),
            arc_name(ports[0].arc),
            entry(&ports[1]),
            arc_name(ports[2].arc),
            entry(&ports[3]),
        ));
    }
    out
}

/// JSON form mirroring the text format.
pub fn print_diagram_json(d: &LinkoidDiagram) -> Value {
    let layout = d.canonical_layout();
    let arc_name = |a: usize| format!("a{}", layout.arc_new[a]);
    let x_name = |x: usize| format!("X{}", layout.cross_new[x]);
    let walk_tokens = |steps: &[super::WalkStep]| -> Vec<String> {
        let mut parts = Vec::new();
        for st in steps {
            parts.push(arc_name(st.arc));
            if let Some(p) = &st.passage {
                parts.push(format!(
                    "{}.{}",
                    x_name(p.crossing),
                    if p.over { 'o' } else { 'u' }
                ));
            }
        }
        parts
    };
    let open: Vec<Value> = layout
        .open_walks
        .iter()
        .map(|w| json!(walk_tokens(&w.steps)))
        .collect();
    let closed: Vec<Value> = layout
        .closed_walks
        .iter()
        .map(|w| json!(walk_tokens(&w.steps)))
        .collect();
    let mut order: Vec<(usize, usize)> = layout
        .cross_new
        .iter()
        .enumerate()
        .map(|(old, &new)| (new, old))
        .collect();
    order.sort_unstable();
    let crossings: Vec<Value> = order
        .iter()
        .map(|&(_, old)| {
            let mut ports = d.crossings[old].ports;
            if ports[0].end == ArcEnd::Tail && ports[2].end == ArcEnd::Head {
                ports.rotate_left(2);
            }
            let ambiguous = ports[1].arc == ports[3].arc;
            let entry = |p: &PortRef| {
                if ambiguous {
                    format!(
                        "{}{}",
                        arc_name(p.arc),
                        if p.end == ArcEnd::Head { '>' } else { '<' }
                    )
                } else {
                    arc_name(p.arc)
                }
            };
            json!([
                x_name(old),
                arc_name(ports[0].arc),
                entry(&ports[1]),
                arc_name(ports[2].arc),
                entry(&ports[3]),
            ])
        })
        .collect();
    json!({
        "format": "linkoid v1",
        "open": open,
        "closed": closed,
        "loops": d.free_loops,
        "crossings": crossings,
    })
}
