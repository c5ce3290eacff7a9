//! The `.problem.xml` format, version 1.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8"?>
//! <problem format-version="1">
//!   <name>sphere</name>
//!   <continuous dimension="2">
//!     <bounds>
//!       <dim index="0" lower="-5.1200000000000001e0" upper="5.1200000000000001e0"/>
//!       <dim index="1" lower="-5.1200000000000001e0" upper="5.1200000000000001e0"/>
//!     </bounds>
//!     <objective builtin="sphere"/>
//!   </continuous>
//! </problem>
//! ```
//!
//! A tour problem replaces `<continuous>` with `<tsp>`, holding either
//! `<cities>` of `<city id x y/>` (Euclidean distances are derived) or
//! `<matrix n="N">` with N² whitespace-separated reals, row-major.
//!
//! Reading is strict: unknown elements and attributes are rejected.
//! Writing is canonical: fixed element order, two-space indentation, one
//! element per line, and reals in 17-significant-digit scientific notation,
//! so serializing a problem twice gives identical bytes.

use std::fmt::Write;

use roxmltree::{Document, Node, NodeType};

use super::{validate_problem, Diagnostic, DiagnosticCode, ProblemFileError, ProblemFileErrorKind};
use crate::benchmark::BenchmarkFunction;
use crate::problem::{Bounds, City, EdgeMatrix, Objective, Problem, SearchSpace, TourSpace};

pub const FORMAT_VERSION: u32 = 1;

type ParseResult<T> = Result<T, ProblemFileError>;

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
}

impl<'a, 'input> Reader<'a, 'input> {
    fn line(&self, node: Node) -> u32 {
        self.doc.text_pos_at(node.range().start).row
    }

    fn fail(&self, node: Node, code: DiagnosticCode, message: impl Into<String>) -> ProblemFileError {
        ProblemFileError::schema(Diagnostic::new(code, message).at(self.line(node)))
    }

    /// Child elements of `node`. Text children must be whitespace.
    fn elements(&self, node: Node<'a, 'input>) -> ParseResult<Vec<Node<'a, 'input>>> {
        let mut out = Vec::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Element => out.push(child),
                NodeType::Text if child.text().unwrap_or("").trim().is_empty() => {}
                NodeType::Text => {
                    return Err(self.fail(
                        child,
                        DiagnosticCode::UnexpectedText,
                        format!("unexpected text inside <{}>", node.tag_name().name()),
                    ))
                }
                _ => {}
            }
        }
        Ok(out)
    }

    fn no_children(&self, node: Node<'a, 'input>) -> ParseResult<()> {
        match self.elements(node)?.first() {
            Some(child) => Err(self.unknown(*child, node)),
            None => Ok(()),
        }
    }

    /// Like `no_children`, but text content is allowed.
    fn text_only(&self, node: Node<'a, 'input>) -> ParseResult<()> {
        match node.children().find(|c| c.is_element()) {
            Some(child) => Err(self.unknown(child, node)),
            None => Ok(()),
        }
    }

    fn unknown(&self, child: Node, parent: Node) -> ProblemFileError {
        self.fail(
            child,
            DiagnosticCode::UnknownElement,
            format!(
                "unknown element <{}> in <{}>",
                child.tag_name().name(),
                parent.tag_name().name()
            ),
        )
    }

    fn allow_attributes(&self, node: Node, allowed: &[&str]) -> ParseResult<()> {
        match node.attributes().find(|a| !allowed.contains(&a.name())) {
            Some(a) => Err(self.fail(
                node,
                DiagnosticCode::UnknownAttribute,
                format!("unknown attribute `{}` on <{}>", a.name(), node.tag_name().name()),
            )),
            None => Ok(()),
        }
    }

    fn attribute(&self, node: Node<'a, 'input>, name: &str) -> ParseResult<&'a str> {
        node.attribute(name).ok_or_else(|| {
            self.fail(
                node,
                DiagnosticCode::MissingAttribute,
                format!("<{}> needs attribute `{name}`", node.tag_name().name()),
            )
        })
    }

    fn real(&self, node: Node<'a, 'input>, name: &str) -> ParseResult<f64> {
        let raw = self.attribute(node, name)?;
        raw.trim().parse().map_err(|_| {
            self.fail(
                node,
                DiagnosticCode::InvalidNumber,
                format!("`{name}` on <{}> is not a number: {raw:?}", node.tag_name().name()),
            )
        })
    }

    fn integer(&self, node: Node<'a, 'input>, name: &str) -> ParseResult<usize> {
        let raw = self.attribute(node, name)?;
        raw.trim().parse().map_err(|_| {
            self.fail(
                node,
                DiagnosticCode::InvalidNumber,
                format!(
                    "`{name}` on <{}> is not a non-negative integer: {raw:?}",
                    node.tag_name().name()
                ),
            )
        })
    }

    /// Splits the children of `node` into exactly one of each of `names`.
    fn exactly_one_each<const N: usize>(
        &self,
        node: Node<'a, 'input>,
        names: [&str; N],
    ) -> ParseResult<[Node<'a, 'input>; N]> {
        let mut found: [Option<Node>; N] = [None; N];
        for child in self.elements(node)? {
            let Some(k) = names.iter().position(|n| *n == child.tag_name().name()) else {
                return Err(self.unknown(child, node));
            };
            if found[k].replace(child).is_some() {
                return Err(self.fail(
                    child,
                    DiagnosticCode::DuplicateElement,
                    format!("<{}> appears more than once", names[k]),
                ));
            }
        }
        let mut out = [node; N];
        for k in 0..N {
            out[k] = found[k].ok_or_else(|| {
                self.fail(
                    node,
                    DiagnosticCode::MissingElement,
                    format!("<{}> needs a <{}> element", node.tag_name().name(), names[k]),
                )
            })?;
        }
        Ok(out)
    }

    /// The single child of `node`, which must be one of `names`.
    fn one_of(&self, node: Node<'a, 'input>, names: &[&str]) -> ParseResult<Node<'a, 'input>> {
        let children = self.elements(node)?;
        if let Some(bad) = children.iter().find(|c| !names.contains(&c.tag_name().name())) {
            return Err(self.unknown(*bad, node));
        }
        match children.as_slice() {
            [only] => Ok(*only),
            [] => Err(self.fail(
                node,
                DiagnosticCode::MissingElement,
                format!("<{}> needs one of <{}>", node.tag_name().name(), names.join(">, <")),
            )),
            [_, second, ..] => Err(self.fail(
                *second,
                DiagnosticCode::DuplicateElement,
                format!(
                    "<{}> takes exactly one of <{}>",
                    node.tag_name().name(),
                    names.join(">, <")
                ),
            )),
        }
    }

    fn problem(&self) -> ParseResult<Problem> {
        let root = self.doc.root_element();
        if root.tag_name().name() != "problem" {
            return Err(self.fail(
                root,
                DiagnosticCode::UnknownElement,
                format!("root element is <{}>, expected <problem>", root.tag_name().name()),
            ));
        }
        self.allow_attributes(root, &["format-version"])?;
        let version = self.integer(root, "format-version")?;
        if version != FORMAT_VERSION as usize {
            return Err(self.fail(
                root,
                DiagnosticCode::UnsupportedVersion,
                format!("format-version {version} is not supported (expected {FORMAT_VERSION})"),
            ));
        }

        let mut name = None;
        let mut space = None;
        for child in self.elements(root)? {
            let slot = match child.tag_name().name() {
                "name" => &mut name,
                "continuous" | "tsp" => &mut space,
                _ => return Err(self.unknown(child, root)),
            };
            if slot.replace(child).is_some() {
                return Err(self.fail(
                    child,
                    DiagnosticCode::DuplicateElement,
                    "<problem> takes one <name> and exactly one of <continuous>, <tsp>",
                ));
            }
        }
        let missing = |what: &str| self.fail(root, DiagnosticCode::MissingElement, format!("<problem> needs {what}"));
        let name = name.ok_or_else(|| missing("a <name> element"))?;
        let space = space.ok_or_else(|| missing("a <continuous> or <tsp> element"))?;

        self.allow_attributes(name, &[])?;
        self.text_only(name)?;
        let name_text = name.text().unwrap_or("").trim().to_string();

        let (space, objective) = match space.tag_name().name() {
            "continuous" => self.continuous(space)?,
            _ => (SearchSpace::Tour(self.tsp(space)?), Objective::TourLength),
        };
        Ok(Problem {
            name: name_text,
            space,
            objective,
        })
    }

    fn continuous(&self, node: Node<'a, 'input>) -> ParseResult<(SearchSpace, Objective)> {
        self.allow_attributes(node, &["dimension"])?;
        let dimension = self.integer(node, "dimension")?;
        let [bounds, objective] = self.exactly_one_each(node, ["bounds", "objective"])?;

        self.allow_attributes(objective, &["builtin"])?;
        self.no_children(objective)?;
        let builtin = self.attribute(objective, "builtin")?;
        let function: BenchmarkFunction = builtin.trim().parse().map_err(|_| {
            self.fail(
                objective,
                DiagnosticCode::UnknownObjective,
                format!("unknown builtin objective `{builtin}`"),
            )
        })?;

        self.allow_attributes(bounds, &[])?;
        let mut lower = vec![f64::NAN; dimension];
        let mut upper = vec![f64::NAN; dimension];
        let mut seen = vec![false; dimension];
        let dims = self.elements(bounds)?;
        for dim in &dims {
            if dim.tag_name().name() != "dim" {
                return Err(self.unknown(*dim, bounds));
            }
            self.allow_attributes(*dim, &["index", "lower", "upper"])?;
            self.no_children(*dim)?;
            let index = self.integer(*dim, "index")?;
            if index >= dimension || std::mem::replace(&mut seen[index], true) {
                return Err(self.fail(
                    *dim,
                    DiagnosticCode::BadIndex,
                    format!("dim index {index} is out of range or repeated (dimension {dimension})"),
                ));
            }
            lower[index] = self.real(*dim, "lower")?;
            upper[index] = self.real(*dim, "upper")?;
        }
        if dims.len() != dimension {
            return Err(self.fail(
                bounds,
                DiagnosticCode::DimensionMismatch,
                format!("dimension is {dimension} but {} <dim> elements are given", dims.len()),
            ));
        }
        Ok((
            SearchSpace::Continuous(Bounds::new(lower, upper)),
            Objective::Builtin(function),
        ))
    }

    fn tsp(&self, node: Node<'a, 'input>) -> ParseResult<TourSpace> {
        self.allow_attributes(node, &[])?;
        let body = self.one_of(node, &["cities", "matrix"])?;
        if body.tag_name().name() == "cities" {
            self.cities(body)
        } else {
            self.matrix(body)
        }
    }

    fn cities(&self, node: Node<'a, 'input>) -> ParseResult<TourSpace> {
        self.allow_attributes(node, &[])?;
        let elements = self.elements(node)?;
        let n = elements.len();
        let mut cities = vec![
            City {
                x: f64::NAN,
                y: f64::NAN
            };
            n
        ];
        let mut seen = vec![false; n];
        for city in elements {
            if city.tag_name().name() != "city" {
                return Err(self.unknown(city, node));
            }
            self.allow_attributes(city, &["id", "x", "y"])?;
            self.no_children(city)?;
            let id = self.integer(city, "id")?;
            if id >= n || std::mem::replace(&mut seen[id], true) {
                return Err(self.fail(
                    city,
                    DiagnosticCode::BadIndex,
                    format!("city id {id} is out of range or repeated ({n} cities)"),
                ));
            }
            cities[id] = City {
                x: self.real(city, "x")?,
                y: self.real(city, "y")?,
            };
        }
        Ok(TourSpace::from_cities(cities))
    }

    fn matrix(&self, node: Node<'a, 'input>) -> ParseResult<TourSpace> {
        self.allow_attributes(node, &["n"])?;
        self.text_only(node)?;
        let n = self.integer(node, "n")?;
        let text = node.text().unwrap_or("");
        let values = text
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    self.fail(
                        node,
                        DiagnosticCode::InvalidNumber,
                        format!("matrix entry {t:?} is not a number"),
                    )
                })
            })
            .collect::<ParseResult<Vec<f64>>>()?;
        let expected = n.saturating_mul(n);
        if values.len() != expected {
            return Err(self.fail(
                node,
                DiagnosticCode::MatrixSizeMismatch,
                format!("matrix of order {n} needs {expected} entries, found {}", values.len()),
            ));
        }
        let matrix = EdgeMatrix::from_flat(n, values).expect("length checked");
        Ok(TourSpace::from_matrix(matrix))
    }
}

/// Reads and validates a problem file.
pub fn parse_problem_xml(text: &str) -> Result<Problem, ProblemFileError> {
    let doc = Document::parse(text).map_err(|e| ProblemFileError {
        kind: ProblemFileErrorKind::Parse,
        diagnostics: vec![Diagnostic::new(DiagnosticCode::MalformedXml, e.to_string()).at(e.pos().row)],
    })?;
    let problem = Reader { doc: &doc }.problem()?;
    let diagnostics = validate_problem(&problem);
    if !diagnostics.is_empty() {
        return Err(ProblemFileError {
            kind: ProblemFileErrorKind::Semantic,
            diagnostics,
        });
    }
    Ok(problem)
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Canonical text of `problem`.
pub fn serialize_problem_xml(problem: &Problem) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<problem format-version=\"{FORMAT_VERSION}\">");
    let _ = writeln!(out, "  <name>{}</name>", escape(&problem.name));
    match (&problem.space, problem.objective) {
        (SearchSpace::Continuous(bounds), objective) => {
            let _ = writeln!(out, "  <continuous dimension=\"{}\">", bounds.dimension());
            out.push_str("    <bounds>\n");
            for (d, (lo, hi)) in bounds.lower.iter().zip(&bounds.upper).enumerate() {
                let _ = writeln!(
                    out,
                    "      <dim index=\"{d}\" lower=\"{}\" upper=\"{}\"/>",
                    real(*lo),
                    real(*hi)
                );
            }
            out.push_str("    </bounds>\n");
            if let Objective::Builtin(f) = objective {
                let _ = writeln!(out, "    <objective builtin=\"{f}\"/>");
            }
            out.push_str("  </continuous>\n");
        }
        (SearchSpace::Tour(space), _) => {
            out.push_str("  <tsp>\n");
            match &space.cities {
                Some(cities) => {
                    out.push_str("    <cities>\n");
                    for (id, c) in cities.iter().enumerate() {
                        let _ = writeln!(out, "      <city id=\"{id}\" x=\"{}\" y=\"{}\"/>", real(c.x), real(c.y));
                    }
                    out.push_str("    </cities>\n");
                }
                None => {
                    let n = space.distances.order();
                    let _ = writeln!(out, "    <matrix n=\"{n}\">");
                    for i in 0..n {
                        let row: Vec<String> = space.distances.row(i).iter().map(|v| real(*v)).collect();
                        let _ = writeln!(out, "      {}", row.join(" "));
                    }
                    out.push_str("    </matrix>\n");
                }
            }
            out.push_str("  </tsp>\n");
        }
    }
    out.push_str("</problem>\n");
    out
}
