//! Text documents for graphs, morphisms, complexes, origami certificates,
//! block vectors, reports and realizers, plus the command-line driver.
//!
//! Every document starts with `rcurv <kind> 1`. Numbers are integers or
//! exact rationals `p/q`; unknown sections and keys are rejected.

mod cli;
mod doc;

use thiserror::Error;

use crate::blocks::BlockCatalogue;
use crate::complex::{BranchedComplex, BranchedMap, ComplexError, MapError};
use crate::lp::{fmt_rational, parse_rational, Rational};
use crate::origami::{Origami, OrigamiError};
use crate::partition::Partition;
use crate::pipeline::{ExtremumReport, Extended};
use crate::serre_graph::{GraphMorphism, MorphismError, SerreGraph};

pub use cli::{run, Cli, Command, EXIT_BUDGET, EXIT_INVALID, EXIT_OK};
pub use doc::{Document, Entry, Section, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Origami(#[from] OrigamiError),
}

const GRAPH_KEYS: &[&str] = &["vertices", "edge"];

/// Reads `vertices = n` and one `edge = id from to inverse` per oriented
/// edge, ids in order. Inconsistent pairings are syntax errors.
pub fn read_graph(s: &Section) -> Result<SerreGraph, SyntaxError> {
    s.check_keys(GRAPH_KEYS)?;
    let n = s.one("vertices")?.usize()?;
    let rows: Vec<(&Entry, Vec<usize>)> = s
        .all("edge")
        .map(|e| {
            let v = e.usizes()?;
            if v.len() != 4 {
                return Err(e.error("expected 'id from to inverse'"));
            }
            Ok((e, v))
        })
        .collect::<Result<_, _>>()?;
    let m = rows.len();
    for (k, (e, v)) in rows.iter().enumerate() {
        let cols: Vec<usize> = e.tokens().iter().map(|t| t.0).collect();
        let at = |i: usize, msg: String| SyntaxError::new(e.line, cols[i], msg);
        if v[0] != k {
            return Err(at(0, format!("expected edge id {k}")));
        }
        for i in [1, 2] {
            if v[i] >= n {
                return Err(at(i, format!("vertex {} out of range", v[i])));
            }
        }
        let j = v[3];
        if j >= m {
            return Err(at(3, format!("inverse {j} out of range")));
        }
        if j == k {
            return Err(at(3, "an edge cannot be its own inverse".into()));
        }
    }
    for (k, (e, v)) in rows.iter().enumerate() {
        let col = e.tokens()[3].0;
        let at = |msg: String| SyntaxError::new(e.line, col, msg);
        let j = v[3];
        let w = &rows[j].1;
        if w[3] != k {
            return Err(at(format!("edge {j} does not have inverse {k}")));
        }
        if w[1] != v[2] || w[2] != v[1] {
            return Err(at(format!("edge {j} does not run backwards along edge {k}")));
        }
    }
    let init = rows.iter().map(|(_, v)| v[1]).collect();
    let inv = rows.iter().map(|(_, v)| v[3]).collect();
    SerreGraph::new(n, init, inv).map_err(|err| s.error(err.to_string()))
}

pub fn write_graph(s: &mut Section, g: &SerreGraph) {
    s.put("vertices", g.vertex_count().to_string());
    for e in g.edges() {
        s.put("edge", doc::join([e, g.init(e), g.term(e), g.inv(e)]));
    }
}

pub fn parse_graph(text: &str) -> Result<SerreGraph, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("graph")?;
    d.check_sections(&["graph"])?;
    Ok(read_graph(d.require("graph")?)?)
}

pub fn serialize_graph(g: &SerreGraph) -> String {
    let mut d = Document::new("graph");
    write_graph(d.push("graph"), g);
    d.render()
}

fn read_map(s: &Section, dom: SerreGraph, cod: SerreGraph) -> Result<GraphMorphism, IoError> {
    s.check_keys(&["vertices", "edges"])?;
    let vmap = s.one("vertices")?.usizes()?;
    let emap = s.one("edges")?.usizes()?;
    Ok(GraphMorphism::new(dom, cod, vmap, emap)?)
}

fn write_map(s: &mut Section, f: &GraphMorphism) {
    s.put("vertices", doc::join(f.vertex_map()));
    s.put("edges", doc::join(f.edge_map()));
}

/// Sections `[domain]`, `[codomain]` (graphs) and `[map]` with the vertex
/// and edge images.
pub fn parse_morphism(text: &str) -> Result<GraphMorphism, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("morphism")?;
    d.check_sections(&["domain", "codomain", "map"])?;
    let dom = read_graph(d.require("domain")?)?;
    let cod = read_graph(d.require("codomain")?)?;
    read_map(d.require("map")?, dom, cod)
}

pub fn serialize_morphism(f: &GraphMorphism) -> String {
    let mut d = Document::new("morphism");
    write_graph(d.push("domain"), f.domain());
    write_graph(d.push("codomain"), f.codomain());
    write_map(d.push("map"), f);
    d.render()
}

fn read_areas(s: Option<&Section>, faces: usize) -> Result<Vec<Rational>, SyntaxError> {
    let Some(s) = s else {
        return Ok(vec![Rational::from_integer(1.into()); faces]);
    };
    s.check_keys(&["areas"])?;
    let e = s.one("areas")?;
    e.tokens()
        .into_iter()
        .map(|(col, t)| {
            parse_rational(t).ok_or_else(|| SyntaxError::new(e.line, col, format!("bad rational {t:?}")))
        })
        .collect()
}

/// Reads a complex from sections with a common `prefix`. Three spellings:
/// `[presentation]` (`generators`, `relator` with capitals for inverses),
/// `[skeleton]` + `[faces]` (one edge word per `face`), or the explicit
/// `[skeleton]` + `[boundary]` + `[attach]`. `[areas]` defaults to ones.
fn read_complex(d: &Document, prefix: &str) -> Result<BranchedComplex, IoError> {
    let sec = |name: &str| d.section(&format!("{prefix}{name}"));
    let x = if let Some(p) = sec("presentation") {
        p.check_keys(&["generators", "relator"])?;
        let gens = p.one("generators")?;
        let letters: Vec<char> = gens
            .tokens()
            .into_iter()
            .map(|(col, t)| {
                let mut cs = t.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => Ok(c),
                    _ => Err(SyntaxError::new(gens.line, col, format!("bad generator {t:?}"))),
                }
            })
            .collect::<Result<_, _>>()?;
        let rels: Vec<&str> = p.all("relator").map(|e| e.value.as_str()).collect();
        if let Some(e) = p.all("relator").find(|e| e.value.contains(char::is_whitespace)) {
            return Err(e.error("a relator is a single word").into());
        }
        for e in p.all("relator") {
            if let Some((i, c)) = e.value.chars().enumerate().find(|(_, c)| !letters.contains(&c.to_ascii_lowercase())) {
                return Err(SyntaxError::new(e.line, e.col + i, format!("unknown generator {c:?}")).into());
            }
        }
        if sec("skeleton").is_some() || sec("faces").is_some() || sec("boundary").is_some() {
            return Err(p.error("[presentation] excludes the other complex sections").into());
        }
        BranchedComplex::from_presentation(&letters, &rels)?
    } else {
        let skeleton = read_graph(d.require(&format!("{prefix}skeleton"))?)?;
        match (sec("faces"), sec("boundary")) {
            (Some(f), None) => {
                f.check_keys(&["face"])?;
                let words: Vec<Vec<usize>> = f.all("face").map(|e| e.usizes()).collect::<Result<_, _>>()?;
                BranchedComplex::from_words(skeleton, &words)?
            }
            (None, Some(b)) => {
                let boundary = read_graph(b)?;
                let attach = read_map(d.require(&format!("{prefix}attach"))?, boundary, skeleton)?;
                BranchedComplex::standard(attach)?
            }
            (Some(f), Some(_)) => return Err(f.error("give either [faces] or [boundary], not both").into()),
            (None, None) => return Err(SyntaxError::new(1, 1, "missing [faces] or [boundary]").into()),
        }
    };
    let areas = read_areas(sec("areas"), x.face_count())?;
    Ok(x.with_areas(areas)?)
}

fn write_complex(d: &mut Document, prefix: &str, x: &BranchedComplex) {
    write_graph(d.push(&format!("{prefix}skeleton")), x.skeleton());
    write_graph(d.push(&format!("{prefix}boundary")), x.boundary());
    write_map(d.push(&format!("{prefix}attach")), x.attach());
    d.push(&format!("{prefix}areas"))
        .put("areas", doc::join(x.areas().iter().map(fmt_rational)));
}

const COMPLEX_SECTIONS: &[&str] = &["presentation", "skeleton", "faces", "boundary", "attach", "areas"];

pub fn parse_complex(text: &str) -> Result<BranchedComplex, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("complex")?;
    d.check_sections(COMPLEX_SECTIONS)?;
    read_complex(&d, "")
}

/// Always the explicit form, so parsing gives back the same complex.
pub fn serialize_complex(x: &BranchedComplex) -> String {
    let mut d = Document::new("complex");
    write_complex(&mut d, "", x);
    d.render()
}

/// An origami on `[base]` given by its open classes, one `class` per line
/// (singletons may be omitted).
pub fn parse_certificate(text: &str) -> Result<Origami, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("certificate")?;
    d.check_sections(&["base", "classes"])?;
    let base = read_graph(d.require("base")?)?;
    let mut classes = Vec::new();
    if let Some(s) = d.section("classes") {
        s.check_keys(&["class"])?;
        for e in s.all("class") {
            classes.push(e.usizes()?);
        }
    }
    let open = Partition::from_classes(base.edge_count(), &classes)
        .ok_or_else(|| SyntaxError::new(1, 1, "classes overlap or name unknown edges"))?;
    Ok(Origami::candidate(base, open)?)
}

pub fn serialize_certificate(o: &Origami) -> String {
    let mut d = Document::new("certificate");
    write_graph(d.push("base"), o.base());
    let s = d.push("classes");
    for c in o.open_relation().classes() {
        s.put("class", doc::join(c));
    }
    d.render()
}

/// A point of the cone: the class name, the coordinates and the canonical
/// key of the block behind each coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockVector {
    pub pi: String,
    pub t: Vec<u64>,
    pub keys: Vec<String>,
}

impl BlockVector {
    pub fn new(pi: &str, t: Vec<u64>, catalogue: &BlockCatalogue) -> Self {
        BlockVector {
            pi: pi.to_string(),
            t,
            keys: catalogue.blocks.iter().map(|b| b.canonical_key()).collect(),
        }
    }
}

pub fn parse_block_vector(text: &str) -> Result<BlockVector, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("blockvector")?;
    d.check_sections(&["vector"])?;
    let s = d.require("vector")?;
    s.check_keys(&["pi", "t", "block"])?;
    let pi = s.one("pi")?.value.clone();
    let te = s.one("t")?;
    let t = te
        .tokens()
        .into_iter()
        .map(|(col, tok)| tok.parse().map_err(|_| SyntaxError::new(te.line, col, format!("bad count {tok:?}"))))
        .collect::<Result<Vec<u64>, _>>()?;
    let keys: Vec<String> = s.all("block").map(|e| e.value.clone()).collect();
    if keys.len() != t.len() {
        return Err(te.error(format!("{} coordinates but {} blocks", t.len(), keys.len())).into());
    }
    Ok(BlockVector { pi, t, keys })
}

pub fn serialize_block_vector(v: &BlockVector) -> String {
    let mut d = Document::new("blockvector");
    let s = d.push("vector");
    s.put("pi", v.pi.clone()).put("t", doc::join(&v.t));
    for k in &v.keys {
        s.put("block", k.clone());
    }
    d.render()
}

/// One line per extremum: its label and value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub values: Vec<(String, Extended)>,
}

impl Report {
    pub fn from_reports(reports: &[&ExtremumReport]) -> Self {
        Report {
            values: reports.iter().map(|r| (r.label.clone(), r.value.clone())).collect(),
        }
    }
}

fn parse_extended(e: &Entry) -> Result<Extended, SyntaxError> {
    match e.value.as_str() {
        "+inf" => Ok(Extended::PosInf),
        "-inf" => Ok(Extended::NegInf),
        v => parse_rational(v)
            .map(Extended::Finite)
            .ok_or_else(|| e.error(format!("bad value {v:?}"))),
    }
}

pub fn parse_report(text: &str) -> Result<Report, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("report")?;
    d.check_sections(&["values"])?;
    let s = d.require("values")?;
    let mut values = Vec::new();
    for e in &s.entries {
        if values.iter().any(|(k, _)| k == &e.key) {
            return Err(SyntaxError::new(e.line, 1, format!("duplicate key {:?}", e.key)).into());
        }
        values.push((e.key.clone(), parse_extended(e)?));
    }
    Ok(Report { values })
}

pub fn serialize_report(r: &Report) -> String {
    let mut d = Document::new("report");
    let s = d.push("values");
    for (k, v) in &r.values {
        s.put(k, v.to_string());
    }
    d.render()
}

/// An element `(Y, φ, Ω)` with the predicate it was built for and its
/// claimed curvature, for independent re-checking.
#[derive(Clone, Debug)]
pub struct RealizerDoc {
    pub pi: String,
    pub kappa: Rational,
    pub map: BranchedMap,
    pub origami: Origami,
}

pub fn parse_realizer(text: &str) -> Result<RealizerDoc, IoError> {
    let d = Document::parse(text)?;
    d.expect_kind("realizer")?;
    let mut allowed = vec!["claim", "skeleton-map", "boundary-map", "origami"];
    let names: Vec<String> = ["domain.", "codomain."]
        .iter()
        .flat_map(|p| COMPLEX_SECTIONS.iter().map(move |s| format!("{p}{s}")))
        .collect();
    allowed.extend(names.iter().map(String::as_str));
    d.check_sections(&allowed)?;
    let claim = d.require("claim")?;
    claim.check_keys(&["pi", "kappa"])?;
    let pi = claim.one("pi")?.value.clone();
    let ke = claim.one("kappa")?;
    let kappa = parse_rational(&ke.value).ok_or_else(|| ke.error("bad rational"))?;
    let y = read_complex(&d, "domain.")?;
    let x = read_complex(&d, "codomain.")?;
    let skel = read_map(d.require("skeleton-map")?, y.skeleton().clone(), x.skeleton().clone())?;
    let bdry = read_map(d.require("boundary-map")?, y.boundary().clone(), x.boundary().clone())?;
    let map = BranchedMap::new(y.clone(), x, skel, bdry)?;
    let o = d.require("origami")?;
    o.check_keys(&["class"])?;
    let classes: Vec<Vec<usize>> = o.all("class").map(|e| e.usizes()).collect::<Result<_, _>>()?;
    let open = Partition::from_classes(y.skeleton().edge_count(), &classes)
        .ok_or_else(|| o.error("classes overlap or name unknown edges"))?;
    let origami = Origami::candidate(y.skeleton().clone(), open)?;
    Ok(RealizerDoc {
        pi,
        kappa,
        map,
        origami,
    })
}

pub fn serialize_realizer(r: &RealizerDoc) -> String {
    let mut d = Document::new("realizer");
    d.push("claim").put("pi", r.pi.clone()).put("kappa", fmt_rational(&r.kappa));
    write_complex(&mut d, "domain.", r.map.domain());
    write_complex(&mut d, "codomain.", r.map.codomain());
    write_map(d.push("skeleton-map"), r.map.skeleton());
    write_map(d.push("boundary-map"), r.map.boundary());
    let s = d.push("origami");
    for c in r.origami.open_relation().classes() {
        s.put("class", doc::join(c));
    }
    d.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::torus;
    use crate::lp::{int, ratio};
    use crate::serre_graph::{rose, theta};

    const TORUS: &str = "rcurv complex 1\n[presentation]\ngenerators = a b\nrelator = abAB\n";

    #[test]
    fn torus_from_text() {
        let x = parse_complex(TORUS).unwrap();
        assert_eq!(x, torus());
        assert_eq!(x.skeleton().vertex_count(), 1);
        assert_eq!(x.skeleton().geometric_edge_count(), 2);
        assert_eq!((x.face_count(), x.areas()), (1, &[int(1)][..]));
        let text = serialize_complex(&x);
        assert_eq!(parse_complex(&text).unwrap(), x);
        assert_eq!(serialize_complex(&parse_complex(&text).unwrap()), text);
    }

    #[test]
    fn words_and_areas() {
        let text = "rcurv complex 1\n[skeleton]\nvertices = 1\nedge = 0 0 0 1\nedge = 1 0 0 0\n\
                    [faces]\nface = 0 0\n[areas]\nareas = 2/3\n";
        let x = parse_complex(text).unwrap();
        assert_eq!(x.areas(), &[ratio(2, 3)]);
        assert_eq!(x.face_length(0), 4);
        let bad = text.replace("2/3", "2/0");
        assert!(matches!(parse_complex(&bad), Err(IoError::Syntax(e)) if (e.line, e.col) == (9, 9)));
        let unreduced = text.replace("face = 0 0", "face = 0 1");
        assert_eq!(parse_complex(&unreduced), Err(IoError::Complex(ComplexError::RelatorNotReduced(0))));
    }

    #[test]
    fn malformed_inverse_pairing() {
        let text = "rcurv graph 1\n[graph]\nvertices = 2\nedge = 0 0 1 1\nedge = 1 1 0 1\n";
        let Err(IoError::Syntax(e)) = parse_graph(text) else { panic!() };
        assert_eq!((e.line, e.col), (5, 14));
        let text = "rcurv graph 1\n[graph]\nvertices = 2\nedge = 0 0 1 1\nedge = 1 0 1 0\n";
        assert!(matches!(parse_graph(text), Err(IoError::Syntax(e)) if e.line == 4));
        let g = theta();
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn unknown_keys_and_sections() {
        let extra = format!("{TORUS}colour = red\n");
        assert!(matches!(parse_complex(&extra), Err(IoError::Syntax(e)) if e.line == 5));
        let extra = format!("{TORUS}[notes]\n");
        assert!(matches!(parse_complex(&extra), Err(IoError::Syntax(e)) if e.line == 5));
        assert!(matches!(parse_graph(TORUS), Err(IoError::Syntax(e)) if e.msg.contains("expected a graph")));
        let stray = "rcurv complex 1\n[presentation]\ngenerators = a b\nrelator = abAc\n";
        assert!(matches!(parse_complex(stray), Err(IoError::Syntax(e)) if (e.line, e.col) == (4, 14)));
    }

    #[test]
    fn other_documents_round_trip() {
        let f = GraphMorphism::from_edge_map(rose(2), rose(1), vec![0, 1, 0, 1], |_| 0).unwrap();
        let text = serialize_morphism(&f);
        assert_eq!(parse_morphism(&text).unwrap(), f);

        let o = Origami::new(rose(2), Partition::from_classes(4, &[vec![0, 2], vec![1, 3]]).unwrap()).unwrap();
        let text = serialize_certificate(&o);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.open_relation(), o.open_relation());
        assert_eq!(serialize_certificate(&back), text);

        let v = BlockVector {
            pi: "surface".into(),
            t: vec![2, 0],
            keys: vec!["x0 0:1 O[0] C[0]".into(), "x0 1:2 O[0] C[0]".into()],
        };
        assert_eq!(parse_block_vector(&serialize_block_vector(&v)).unwrap(), v);

        let r = Report {
            values: vec![
                ("rho+".into(), Extended::NegInf),
                ("rho-".into(), Extended::PosInf),
                ("sigma+".into(), Extended::Finite(ratio(-1, 3))),
            ],
        };
        let text = serialize_report(&r);
        assert!(text.contains("sigma+ = -1/3"));
        assert_eq!(parse_report(&text).unwrap(), r);
    }
}
