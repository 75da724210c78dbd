//! XMI 2.5 dialect for the quantum circuit profile.
//!
//! The writer renumbers every element to `e1`, `e2`, ... (activity,
//! partitions, nodes, edges, then stereotype applications), uses a fixed
//! attribute order (id, name, type, references, data) and emits LF line
//! endings with two-space indentation. Constraint edges are written as
//! `ownedRule` constraints in edge order so the reader restores the exact
//! edge sequence.

use std::fmt::Write;

use roxmltree::{Document, Node as XmlNode};

use crate::diagnostics::ErrorCode;
use crate::qasm::parse_param;
use crate::uml::{Diagnostic, Edge, EdgeKind, ModelError, Node, NodeKind, RuleId, StereotypeKind, UmlModel};

pub const XMI_NS: &str = "http://www.omg.org/spec/XMI/20131001";
pub const UML_NS: &str = "http://www.omg.org/spec/UML/20161101";
pub const PROFILE_NS: &str = "urn:quantum-uml-profile:1.0";

fn escape(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

struct Element {
    indent: usize,
    tag: String,
    attrs: Vec<(String, String)>,
}

impl Element {
    fn new(indent: usize, tag: impl Into<String>) -> Self {
        Self {
            indent,
            tag: tag.into(),
            attrs: Vec::new(),
        }
    }

    fn attr(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attrs.push((key.into(), value.into()));
        self
    }

    fn opt(self, key: &'static str, value: Option<impl Into<String>>) -> Self {
        match value {
            Some(v) => self.attr(key, v),
            None => self,
        }
    }

    fn open(&self, out: &mut String, close: bool) {
        let _ = write!(out, "{:width$}<{}", "", self.tag, width = self.indent * 2);
        for (k, v) in &self.attrs {
            let _ = write!(out, " {k}=\"{}\"", escape(v));
        }
        out.push_str(if close { "/>\n" } else { ">\n" });
    }
}

fn uml_type(metaclass: &str) -> String {
    format!("uml:{metaclass}")
}

/// Serializes a model. Profile conformance is not required, so invalid
/// models can be written for inspection.
pub fn write_xmi(model: &UmlModel) -> String {
    let m = model.renumbered();
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let root = Element::new(0, "xmi:XMI")
        .attr("xmi:version", "2.5.1")
        .attr("xmlns:xmi", XMI_NS)
        .attr("xmlns:uml", UML_NS)
        .attr("xmlns:QuantumUML", PROFILE_NS);
    root.open(&mut out, false);
    Element::new(1, "uml:Model")
        .attr("xmi:id", "model")
        .attr("name", m.activity().name.clone())
        .attr("xmi:type", "uml:Model")
        .open(&mut out, false);
    Element::new(2, "packagedElement")
        .attr("xmi:id", m.activity().id.clone())
        .attr("name", m.activity().name.clone())
        .attr("xmi:type", "uml:Activity")
        .open(&mut out, false);

    for p in m.partitions() {
        Element::new(3, "group")
            .attr("xmi:id", p.id.clone())
            .attr("name", p.name.clone())
            .attr("xmi:type", "uml:ActivityPartition")
            .open(&mut out, true);
    }
    for n in m.nodes() {
        let params = n
            .gate_info
            .as_ref()
            .filter(|g| !g.params.is_empty())
            .map(|g| g.params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
        Element::new(3, "node")
            .attr("xmi:id", n.id.clone())
            .attr("name", n.name.clone())
            .attr("xmi:type", uml_type(n.kind.metaclass()))
            .opt("inPartition", n.partition.clone())
            .opt("mnemonic", n.gate_info.as_ref().map(|g| g.mnemonic.clone()))
            .opt("params", params)
            .opt("register", n.measure_info.as_ref().map(|mi| mi.register.clone()))
            .opt("bit", n.measure_info.as_ref().map(|mi| mi.bit.to_string()))
            .opt("upperBound", n.upper_bound.map(|b| b.to_string()))
            .open(&mut out, true);
    }
    for e in m.edges() {
        let el = match e.kind {
            EdgeKind::Constraint => Element::new(3, "ownedRule")
                .attr("xmi:id", e.id.clone())
                .opt("name", e.label.clone())
                .attr("xmi:type", "uml:Constraint")
                .attr("constrainedElement", format!("{} {}", e.source, e.target)),
            kind => Element::new(3, "edge")
                .attr("xmi:id", e.id.clone())
                .opt("name", e.label.clone())
                .attr("xmi:type", uml_type(kind.metaclass()))
                .attr("source", e.source.clone())
                .attr("target", e.target.clone()),
        };
        el.opt("inPartition", e.partition.clone()).open(&mut out, true);
    }
    out.push_str("    </packagedElement>\n  </uml:Model>\n");

    let first = 2 + m.partitions().len() + m.nodes().len() + m.edges().len();
    for (i, s) in m.stereotypes().iter().enumerate() {
        let metaclass = m.metaclass_of(&s.base).unwrap_or("Element");
        Element::new(1, format!("QuantumUML:{}", s.kind.xmi_name()))
            .attr("xmi:id", format!("e{}", first + i))
            .attr(format!("base_{metaclass}"), s.base.clone())
            .open(&mut out, true);
    }
    out.push_str("</xmi:XMI>\n");
    out
}

/// A successfully read model plus any warnings about content that was
/// skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct XmiRead {
    pub model: UmlModel,
    pub warnings: Vec<Diagnostic>,
}

fn schema(elements: Vec<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic::code(ErrorCode::XmiSchema, elements, message)
}

fn from_model_error(err: ModelError) -> Diagnostic {
    let id = match &err {
        ModelError::DuplicateId(id)
        | ModelError::DanglingRef(id)
        | ModelError::PartitionRequired(id)
        | ModelError::PartitionForbidden(id)
        | ModelError::DuplicateStereotype(id) => id.clone(),
    };
    Diagnostic::code(err.code(), vec![id], err.to_string())
}

struct Reader {
    warnings: Vec<Diagnostic>,
}

impl Reader {
    fn warn(&mut self, node: XmlNode, message: String) {
        let id = node.attribute((XMI_NS, "id")).unwrap_or_default().to_string();
        let elements = if id.is_empty() { vec![] } else { vec![id] };
        self.warnings.push(Diagnostic::warning(
            RuleId::Code(ErrorCode::XmiSchema),
            elements,
            message,
        ));
    }

    /// Warns about attributes outside the known set.
    fn check_attrs(&mut self, node: XmlNode, known: &[&str]) {
        for a in node.attributes() {
            let name = match a.namespace() {
                Some(XMI_NS) => format!("xmi:{}", a.name()),
                Some(_) => continue,
                None => a.name().to_string(),
            };
            if !known.contains(&name.as_str()) {
                self.warn(node, format!("ignoring unknown attribute `{name}` on <{}>", node.tag_name().name()));
            }
        }
    }
}

fn id_of(node: XmlNode) -> Result<String, Diagnostic> {
    node.attribute((XMI_NS, "id"))
        .map(str::to_string)
        .ok_or_else(|| schema(vec![], format!("<{}> is missing xmi:id", node.tag_name().name())))
}

fn required<'a>(node: XmlNode<'a, '_>, attr: &str, id: &str) -> Result<&'a str, Diagnostic> {
    node.attribute(attr)
        .ok_or_else(|| schema(vec![id.to_string()], format!("missing `{attr}` attribute")))
}

fn type_of<'a>(node: XmlNode<'a, '_>, id: &str) -> Result<&'a str, Diagnostic> {
    let ty = node
        .attribute((XMI_NS, "type"))
        .ok_or_else(|| schema(vec![id.to_string()], "missing xmi:type attribute"))?;
    Ok(ty.strip_prefix("uml:").unwrap_or(ty))
}

fn parse_usize(node: XmlNode, attr: &str, id: &str) -> Result<Option<usize>, Diagnostic> {
    node.attribute(attr)
        .map(|v| {
            v.parse()
                .map_err(|_| schema(vec![id.to_string()], format!("`{attr}` must be a non-negative integer")))
        })
        .transpose()
}

fn read_node(reader: &mut Reader, el: XmlNode) -> Result<Node, Diagnostic> {
    let id = id_of(el)?;
    let ty = type_of(el, &id)?;
    let kind = NodeKind::from_metaclass(ty)
        .ok_or_else(|| schema(vec![id.clone()], format!("unsupported node type `{ty}`")))?;
    reader.check_attrs(
        el,
        &["xmi:id", "xmi:type", "name", "inPartition", "mnemonic", "params", "register", "bit", "upperBound"],
    );
    let mut node = Node::new(id.clone(), kind, el.attribute("name").unwrap_or_default());
    node.partition = el.attribute("inPartition").map(str::to_string);
    if let Some(mnemonic) = el.attribute("mnemonic") {
        let params = match el.attribute("params") {
            Some(text) => text
                .split(',')
                .map(|p| {
                    parse_param(p.trim()).map_err(|errs| {
                        schema(
                            vec![id.clone()],
                            format!("bad gate parameter `{}`: {}", p.trim(), errs[0].message),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        node = node.with_gate(mnemonic, params);
    }
    match (el.attribute("register"), parse_usize(el, "bit", &id)?) {
        (Some(reg), Some(bit)) => node = node.with_measure(reg, bit),
        (None, None) => {}
        _ => return Err(schema(vec![id], "`register` and `bit` must appear together")),
    }
    node.upper_bound = parse_usize(el, "upperBound", &id)?;
    Ok(node)
}

fn read_edge(reader: &mut Reader, el: XmlNode) -> Result<Edge, Diagnostic> {
    let id = id_of(el)?;
    let ty = type_of(el, &id)?;
    let (kind, source, target) = if el.tag_name().name() == "ownedRule" {
        if ty != "Constraint" {
            return Err(schema(vec![id], format!("ownedRule of type `{ty}` is not supported")));
        }
        reader.check_attrs(el, &["xmi:id", "xmi:type", "name", "constrainedElement", "inPartition"]);
        let refs: Vec<&str> = required(el, "constrainedElement", &id)?.split_whitespace().collect();
        let [source, target] = refs[..] else {
            return Err(schema(vec![id], "constraint must reference exactly two elements"));
        };
        (EdgeKind::Constraint, source, target)
    } else {
        let kind = match ty {
            "ControlFlow" => EdgeKind::ControlFlow,
            "ObjectFlow" => EdgeKind::ObjectFlow,
            other => return Err(schema(vec![id], format!("unsupported edge type `{other}`"))),
        };
        reader.check_attrs(el, &["xmi:id", "xmi:type", "name", "source", "target", "inPartition"]);
        (kind, required(el, "source", &id)?, required(el, "target", &id)?)
    };
    let mut edge = Edge::new(id, kind, source, target);
    edge.label = el.attribute("name").map(str::to_string);
    edge.partition = el.attribute("inPartition").map(str::to_string);
    Ok(edge)
}

/// Parses a document produced by [`write_xmi`]. Attribute order and
/// whitespace are not significant; unknown elements and attributes are
/// reported as warnings.
pub fn read_xmi(text: &str) -> Result<XmiRead, Vec<Diagnostic>> {
    let doc = Document::parse(text)
        .map_err(|e| vec![Diagnostic::code(ErrorCode::Xml, vec![], e.to_string())])?;
    let mut reader = Reader {
        warnings: Vec::new(),
    };
    read_document(&mut reader, &doc)
        .map(|model| XmiRead {
            model,
            warnings: reader.warnings,
        })
        .map_err(|d| vec![d])
}

fn read_document(reader: &mut Reader, doc: &Document) -> Result<UmlModel, Diagnostic> {
    let root = doc.root_element();
    if root.tag_name().name() != "XMI" || root.tag_name().namespace() != Some(XMI_NS) {
        return Err(schema(vec![], "root element must be xmi:XMI"));
    }
    let uml_model = root
        .children()
        .find(|c| c.is_element() && c.tag_name().name() == "Model" && c.tag_name().namespace() == Some(UML_NS))
        .ok_or_else(|| schema(vec![], "missing uml:Model element"))?;
    let mut activities = uml_model.children().filter(|c| {
        c.is_element()
            && c.tag_name().name() == "packagedElement"
            && c.attribute((XMI_NS, "type")) == Some("uml:Activity")
    });
    let activity_el = activities
        .next()
        .ok_or_else(|| schema(vec![], "uml:Model contains no uml:Activity"))?;
    for extra in activities {
        reader.warn(extra, "ignoring additional activity".to_string());
    }
    for other in uml_model.children().filter(|c| c.is_element() && *c != activity_el) {
        if other.tag_name().name() != "packagedElement" || other.attribute((XMI_NS, "type")) != Some("uml:Activity") {
            reader.warn(other, format!("ignoring unknown element <{}>", other.tag_name().name()));
        }
    }

    let activity_id = id_of(activity_el)?;
    let mut model = UmlModel::new(activity_id, activity_el.attribute("name").unwrap_or_default());

    let children: Vec<XmlNode> = activity_el.children().filter(|c| c.is_element()).collect();
    for el in &children {
        if el.tag_name().name() == "group" {
            let id = id_of(*el)?;
            if type_of(*el, &id)? != "ActivityPartition" {
                reader.warn(*el, "ignoring group that is not an ActivityPartition".to_string());
                continue;
            }
            reader.check_attrs(*el, &["xmi:id", "xmi:type", "name"]);
            model
                .add_partition(id, el.attribute("name").unwrap_or_default())
                .map_err(from_model_error)?;
        }
    }
    for el in &children {
        if el.tag_name().name() == "node" {
            let node = read_node(reader, *el)?;
            model.add_node(node).map_err(from_model_error)?;
        }
    }
    for el in &children {
        match el.tag_name().name() {
            "edge" | "ownedRule" => {
                let edge = read_edge(reader, *el)?;
                model.add_edge(edge).map_err(from_model_error)?;
            }
            "group" | "node" => {}
            other => reader.warn(*el, format!("ignoring unknown element <{other}>")),
        }
    }

    for el in root.children().filter(|c| c.is_element() && *c != uml_model) {
        if el.tag_name().namespace() != Some(PROFILE_NS) {
            reader.warn(el, format!("ignoring unknown element <{}>", el.tag_name().name()));
            continue;
        }
        let Some(kind) = StereotypeKind::from_xmi_name(el.tag_name().name()) else {
            reader.warn(el, format!("ignoring unknown stereotype `{}`", el.tag_name().name()));
            continue;
        };
        let base = el
            .attributes()
            .find(|a| a.namespace().is_none() && a.name().starts_with("base_"))
            .ok_or_else(|| schema(vec![], format!("stereotype `{}` has no base_ reference", kind.xmi_name())))?;
        model
            .apply_stereotype(kind, base.value())
            .map_err(from_model_error)?;
    }
    Ok(model)
}
