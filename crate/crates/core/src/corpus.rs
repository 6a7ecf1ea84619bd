//! The shipped corpus of decompositions and its line-oriented grammar.
//!
//! Grammar (UTF-8, `#` comments, blank lines ignored):
//!
//! ```text
//! entry <id>
//! source <tag>
//! host complete <n> | host multipartite ...
//! action <id> ...            (one or more)
//! block <GRAPH> <action-id> t1 t2 ... tv
//! end
//! ```
//!
//! `INF` in a block tuple denotes the sentinel vertex `n - 1` of the host.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::actions::{ActionSpec, BaseBlock};
use crate::graphs::{load_catalog, Catalog};
use crate::hosts::HostSpec;
use crate::verify::Decomposition;

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

/// One corpus entry: an identified decomposition plus its source tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub source: String,
    pub decomposition: Decomposition,
}

const CORPUS_FILES: &[&str] = &[
    include_str!("../data/corpus/tietze.design"),
    include_str!("../data/corpus/blanusa18.design"),
    include_str!("../data/corpus/snark20.design"),
    include_str!("../data/corpus/snark22.design"),
    include_str!("../data/corpus/goldberg3.design"),
    include_str!("../data/corpus/celmins_blanusa26.design"),
    include_str!("../data/corpus/flower_j7.design"),
    include_str!("../data/corpus/double_star.design"),
    include_str!("../data/corpus/blanusa34.design"),
    include_str!("../data/corpus/zamfirescu.design"),
    include_str!("../data/corpus/goldberg5.design"),
    include_str!("../data/corpus/szekeres_watkins.design"),
];

/// All decompositions shipped with the crate, parsed and cached.
pub fn load_corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let catalog = load_catalog();
        let mut all = Vec::new();
        for text in CORPUS_FILES {
            all.extend(parse(text, catalog).expect("embedded corpus parses"));
        }
        all
    })
}

/// Looks up an embedded entry by id.
pub fn find(id: &str) -> Option<&'static CorpusEntry> {
    load_corpus().iter().find(|e| e.id == id)
}

/// Parses corpus text. Block tuples are validated against the catalog
/// (graph known, tuple length, vertex range) and action references are
/// resolved; failures carry line numbers.
pub fn parse(text: &str, catalog: &Catalog) -> Result<Vec<CorpusEntry>, ParseError> {
    let mut entries = Vec::new();
    let mut state: Option<EntryBuilder> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ParseError { line: ln + 1, msg };
        let word = line.split_whitespace().next().unwrap();
        match word {
            "entry" => {
                if state.is_some() {
                    return Err(err("nested entry (missing `end`?)".into()));
                }
                let id = line
                    .split_whitespace()
                    .nth(1)
                    .ok_or_else(|| err("missing entry id".into()))?;
                state = Some(EntryBuilder::new(id));
            }
            "source" => {
                let b = state
                    .as_mut()
                    .ok_or_else(|| err("source outside entry".into()))?;
                b.source = line.split_whitespace().nth(1).unwrap_or("").to_string();
            }
            "host" => {
                let b = state
                    .as_mut()
                    .ok_or_else(|| err("host outside entry".into()))?;
                b.host = Some(HostSpec::parse(line).map_err(|e| err(e.to_string()))?);
            }
            "action" => {
                let b = state
                    .as_mut()
                    .ok_or_else(|| err("action outside entry".into()))?;
                let host = b
                    .host
                    .as_ref()
                    .ok_or_else(|| err("action before host".into()))?;
                let (id, a) = ActionSpec::parse(line, host.n()).map_err(|e| err(e.to_string()))?;
                if b.actions.insert(id.clone(), a).is_some() {
                    return Err(err(format!("duplicate action id {id:?}")));
                }
            }
            "block" => {
                let b = state
                    .as_mut()
                    .ok_or_else(|| err("block outside entry".into()))?;
                let host = b
                    .host
                    .as_ref()
                    .ok_or_else(|| err("block before host".into()))?;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() < 4 {
                    return Err(err("expected `block <GRAPH> <action> t1 ... tv`".into()));
                }
                let gname = toks[1];
                let graph = catalog
                    .get(gname)
                    .map_err(|_| err(format!("unknown graph name {gname:?}")))?;
                match &b.graph {
                    None => b.graph = Some(gname.to_string()),
                    Some(g) if g != gname => {
                        return Err(err(format!("entry mixes graphs {g:?} and {gname:?}")))
                    }
                    _ => {}
                }
                let aid = toks[2];
                if !b.actions.contains_key(aid) {
                    return Err(err(format!("undeclared action id {aid:?}")));
                }
                let n = host.n();
                let mut tuple = Vec::with_capacity(toks.len() - 3);
                for t in &toks[3..] {
                    let v = if *t == "INF" {
                        n - 1
                    } else {
                        t.parse::<usize>()
                            .map_err(|_| err(format!("bad vertex {t:?}")))?
                    };
                    if v >= n {
                        return Err(err(format!("vertex {v} outside host of size {n}")));
                    }
                    tuple.push(v);
                }
                if tuple.len() != graph.v {
                    return Err(err(format!(
                        "tuple length {} \u{2260} {}",
                        tuple.len(),
                        graph.v
                    )));
                }
                b.blocks.push(BaseBlock {
                    graph: gname.to_string(),
                    action: aid.to_string(),
                    tuple,
                });
            }
            "end" => {
                let b = state
                    .take()
                    .ok_or_else(|| err("end outside entry".into()))?;
                entries.push(b.finish().map_err(|msg| err(msg))?);
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    if state.is_some() {
        return Err(ParseError {
            line: text.lines().count(),
            msg: "unterminated entry".into(),
        });
    }
    Ok(entries)
}

struct EntryBuilder {
    id: String,
    source: String,
    host: Option<HostSpec>,
    actions: BTreeMap<String, ActionSpec>,
    graph: Option<String>,
    blocks: Vec<BaseBlock>,
}

impl EntryBuilder {
    fn new(id: &str) -> Self {
        EntryBuilder {
            id: id.to_string(),
            source: String::new(),
            host: None,
            actions: BTreeMap::new(),
            graph: None,
            blocks: Vec::new(),
        }
    }

    fn finish(self) -> Result<CorpusEntry, String> {
        let host = self.host.ok_or("entry without host")?;
        let graph = self.graph.ok_or("entry without blocks")?;
        Ok(CorpusEntry {
            id: self.id.clone(),
            source: self.source,
            decomposition: Decomposition {
                host,
                graph,
                actions: self.actions,
                blocks: self.blocks,
                provenance: self.id,
            },
        })
    }
}

/// Renders an entry in canonical form; `parse(render(e))` gives `e` back.
pub fn render(entry: &CorpusEntry) -> String {
    let mut out = Vec::new();
    out.push(format!("entry {}", entry.id));
    if !entry.source.is_empty() {
        out.push(format!("source {}", entry.source));
    }
    let d = &entry.decomposition;
    out.push(d.host.render());
    for (id, a) in &d.actions {
        out.push(a.render(id));
    }
    let n = d.host.n();
    let inf_used = d
        .actions
        .values()
        .any(|a| !a.is_identity() && !a.fixed().is_empty());
    for b in &d.blocks {
        let toks: Vec<String> = b
            .tuple
            .iter()
            .map(|&v| {
                if inf_used && v == n - 1 {
                    "INF".to_string()
                } else {
                    v.to_string()
                }
            })
            .collect();
        out.push(format!("block {} {} {}", b.graph, b.action, toks.join(" ")));
    }
    out.push("end".to_string());
    out.push(String::new());
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_corpus_loads() {
        let corpus = load_corpus();
        assert!(corpus.len() >= 160, "corpus has {} entries", corpus.len());
        assert!(find("tietze.k37").is_some());
    }

    #[test]
    fn parse_single_entry() {
        let text = "\
entry tietze.k37
source tietze
host complete 37
action a0 shift 1 mod 37 on 0..36
block TIETZE a0 0 1 3 6 2 7 14 23 15 10 22 33
end
";
        let entries = parse(text, load_catalog()).unwrap();
        assert_eq!(entries.len(), 1);
        let e = &entries[0];
        assert_eq!(e.id, "tietze.k37");
        assert_eq!(e.decomposition.blocks.len(), 1);
        let a = &e.decomposition.actions["a0"];
        assert_eq!(a.permutation_order(), 37);
    }

    #[test]
    fn piecewise_tail_action_parses() {
        let e = find("s1.k60x60x75").unwrap();
        let a = &e.decomposition.actions["a0"];
        let segs = a.segments();
        assert_eq!(segs.len(), 2);
        assert_eq!((segs[1].lo, segs[1].hi, segs[1].step), (180, 194, 1));
        assert_eq!(e.decomposition.host.part_sizes().unwrap(), vec![60, 60, 75]);
    }

    #[test]
    fn tuple_length_mismatch_is_parse_error() {
        let text = "\
entry bad.k37
host complete 37
action a0 shift 1 mod 37 on 0..36
block TIETZE a0 0 1 3 6 2 7 14 23 15 10 22
end
";
        let err = parse(text, load_catalog()).unwrap_err();
        assert!(err.to_string().contains("tuple length 11"), "{err}");
        assert_eq!(err.line, 4);
    }

    #[test]
    fn unknown_graph_and_undeclared_action_are_errors() {
        let catalog = load_catalog();
        let e1 = parse(
            "entry x\nhost complete 4\naction a0 identity\nblock NOPE a0 0 1 2 3\nend\n",
            catalog,
        )
        .unwrap_err();
        assert!(e1.to_string().contains("unknown graph"));
        let e2 = parse(
            "entry x\nhost complete 37\naction a0 identity\nblock TIETZE a9 0 1 2 3 4 5 6 7 8 9 10 11\nend\n",
            catalog,
        )
        .unwrap_err();
        assert!(e2.to_string().contains("undeclared action"));
    }

    #[test]
    fn empty_text_parses_to_no_entries() {
        assert!(parse("", load_catalog()).unwrap().is_empty());
        assert!(parse("# only a comment\n\n", load_catalog())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn round_trip_all_entries() {
        let catalog = load_catalog();
        for e in load_corpus() {
            let text = render(e);
            let back = parse(&text, catalog).unwrap();
            assert_eq!(back.len(), 1, "{}", e.id);
            assert_eq!(&back[0], e, "{}", e.id);
        }
    }

    #[test]
    fn shipped_files_are_canonical() {
        // rendering the parsed entries reproduces each file byte for byte
        let catalog = load_catalog();
        for text in CORPUS_FILES {
            let entries = parse(text, catalog).unwrap();
            let rendered: Vec<String> = entries
                .iter()
                .map(|e| {
                    let back = CorpusEntry {
                        id: e.id.clone(),
                        source: e.source.clone(),
                        decomposition: e.decomposition.clone(),
                    };
                    render(&back)
                })
                .collect();
            assert_eq!(rendered.join("\n"), *text);
        }
    }
}
