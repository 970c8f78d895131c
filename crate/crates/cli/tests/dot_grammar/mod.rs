//! Recursive-descent recogniser for the Graphviz DOT language (graph, node,
//! edge, attribute and subgraph statements, ports, quoted and HTML ids,
//! comments). It returns the node and edge statements it saw so tests can
//! check structure as well as syntax.

#[derive(Debug, Default)]
pub struct Graph {
    pub directed: bool,
    pub name: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Id(String),
    Punct(char),
    EdgeOp(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at_line_start = |i: usize| chars[..i].iter().rev().take_while(|&&c| c != '\n').all(|c| c.is_whitespace());
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            i += 1;
        } else if (c == '/' && next == Some('/')) || (c == '#' && at_line_start(i)) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && next == Some('*') {
            let end = (i + 2..chars.len().saturating_sub(1))
                .find(|&j| chars[j] == '*' && chars[j + 1] == '/')
                .ok_or("unterminated comment")?;
            i = end + 2;
        } else if c == '-' && (next == Some('>') || next == Some('-')) {
            out.push(Tok::EdgeOp(if next == Some('>') { "->" } else { "--" }));
            i += 2;
        } else if "{}[];,=:".contains(c) {
            out.push(Tok::Punct(c));
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') if chars.get(i + 1) == Some(&'"') => {
                        s.push('"');
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s));
        } else if c == '<' {
            let (mut depth, start) = (0usize, i);
            loop {
                match chars.get(i) {
                    None => return Err("unterminated HTML id".into()),
                    Some('<') => depth += 1,
                    Some('>') => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            i += 1;
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' || !c.is_ascii() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || !chars[i].is_ascii()) {
                i += 1;
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() || c == '.' || c == '-' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            if num.matches('.').count() > 1 || !num.chars().any(|ch| ch.is_ascii_digit()) {
                return Err(format!("bad numeral `{num}`"));
            }
            out.push(Tok::Id(num));
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    graph: Graph,
}

fn keyword(t: Option<&Tok>, kw: &str) -> bool {
    matches!(t, Some(Tok::Id(s)) if s.eq_ignore_ascii_case(kw))
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.punct(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}` at token {}, found {:?}", self.pos, self.peek()))
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => Err(format!("expected an id at token {}, found {other:?}", self.pos)),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if keyword(self.peek(), "strict") {
            self.pos += 1;
        }
        if keyword(self.peek(), "digraph") {
            self.graph.directed = true;
        } else if !keyword(self.peek(), "graph") {
            return Err("expected `graph` or `digraph`".into());
        }
        self.pos += 1;
        if let Some(Tok::Id(_)) = self.peek() {
            self.graph.name = Some(self.id()?);
        }
        self.expect('{')?;
        self.stmt_list()?;
        self.expect('}')?;
        if self.pos != self.toks.len() {
            return Err("trailing input after the graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !matches!(self.peek(), Some(Tok::Punct('}')) | None) {
            self.stmt()?;
            self.punct(';');
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        let t = self.peek().cloned();
        if ["graph", "node", "edge"].iter().any(|kw| keyword(t.as_ref(), kw)) {
            self.pos += 1;
            return self.attr_list(true);
        }
        if matches!(t, Some(Tok::Id(_))) && self.toks.get(self.pos + 1) == Some(&Tok::Punct('=')) && !keyword(t.as_ref(), "subgraph") {
            self.pos += 2;
            self.id()?;
            return Ok(());
        }
        let first = self.node_or_subgraph()?;
        if let Some(Tok::EdgeOp(_)) = self.peek() {
            let want = if self.graph.directed { "->" } else { "--" };
            let mut prev = first;
            while let Some(&Tok::EdgeOp(op)) = self.peek() {
                if op != want {
                    return Err(format!("edge operator `{op}` in the wrong kind of graph"));
                }
                self.pos += 1;
                let next = self.node_or_subgraph()?;
                if let (Some(a), Some(b)) = (&prev, &next) {
                    self.graph.edges.push((a.clone(), b.clone()));
                }
                prev = next;
            }
            self.attr_list(false)
        } else {
            if let Some(name) = first {
                self.graph.nodes.push(name);
            }
            self.attr_list(false)
        }
    }

    /// A node id (returned) or a subgraph (`None`).
    fn node_or_subgraph(&mut self) -> Result<Option<String>, String> {
        if keyword(self.peek(), "subgraph") || self.peek() == Some(&Tok::Punct('{')) {
            if keyword(self.peek(), "subgraph") {
                self.pos += 1;
                if let Some(Tok::Id(_)) = self.peek() {
                    self.id()?;
                }
            }
            self.expect('{')?;
            self.stmt_list()?;
            self.expect('}')?;
            return Ok(None);
        }
        let name = self.id()?;
        if self.punct(':') {
            self.id()?;
            if self.punct(':') {
                self.id()?;
            }
        }
        Ok(Some(name))
    }

    fn attr_list(&mut self, required: bool) -> Result<(), String> {
        if required && self.peek() != Some(&Tok::Punct('[')) {
            return Err("attribute statement without `[`".into());
        }
        while self.punct('[') {
            while !self.punct(']') {
                self.id()?;
                self.expect('=')?;
                self.id()?;
                if !self.punct(';') {
                    self.punct(',');
                }
            }
        }
        Ok(())
    }
}

pub fn parse(src: &str) -> Result<Graph, String> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        graph: Graph::default(),
    };
    p.graph()?;
    Ok(p.graph)
}

#[test]
fn recogniser_accepts_and_rejects() {
    let ok = [
        "digraph { a -> b -> c; }",
        "strict graph g { a -- b [color=red, w=1.5]; node [shape=box] x:n; }",
        "digraph \"q\\\"x\" { \"a b\"; subgraph s { c } -> d; // done\n }",
        "/* lead */ digraph { a=1 -.5 <x<b>y</b>> }",
    ];
    for s in ok {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
    let bad = [
        "digraph { a -- b }",
        "graph { a -> b }",
        "digraph { a -> }",
        "digraph { \"open }",
        "digraph { a } b",
        "digraph { node a }",
        "tree { }",
    ];
    for s in bad {
        assert!(parse(s).is_err(), "{s}");
    }
    let g = parse("digraph m { \"A\"; \"B\"; \"A\" -> \"B\"; }").unwrap();
    assert_eq!(g.nodes, ["A", "B"]);
    assert_eq!(g.edges, [("A".to_string(), "B".to_string())]);
}
