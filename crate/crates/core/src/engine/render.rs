//! Textual, DOT and JSON renderings of trees, answers and rule lists.

use std::fmt::Write;

use serde_json::{json, Value};

use super::{DerivationTree, FuzzyComputedAnswer, Node, StepLabel};
use crate::syntax::Rule;

/// `<value>\t<bindings>`, the line format shared by the REPL and batch mode.
pub fn format_answer(a: &FuzzyComputedAnswer) -> String {
    format!("{}\t{}", a.value, a.answer)
}

/// One node per line, indented by depth and prefixed by the label of the
/// step that produced it.
pub fn render_text(tree: &DerivationTree) -> String {
    let mut out = String::new();
    for n in tree.root.walk() {
        let indent = "  ".repeat(n.depth);
        match &n.step {
            None => writeln!(out, "{}", n.state),
            Some(label) => writeln!(out, "{indent}{label} {}", n.state),
        }
        .unwrap();
        if let Some(e) = &n.error {
            writeln!(out, "{indent}  error: {e}").unwrap();
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn render_dot(tree: &DerivationTree) -> String {
    let mut out = String::from("digraph tree {\n  node [shape=ellipse];\n");
    let mut next_id = 0usize;
    dot_node(&tree.root, &mut next_id, &mut out);
    out.push_str("}\n");
    out
}

fn dot_node(n: &Node, next_id: &mut usize, out: &mut String) -> usize {
    let id = *next_id;
    *next_id += 1;
    let mut label = n.state.to_string();
    if let Some(e) = &n.error {
        label.push_str("\nerror: ");
        label.push_str(e);
    }
    writeln!(out, "  n{id} [label=\"{}\"];", dot_escape(&label)).unwrap();
    for child in &n.children {
        let cid = dot_node(child, next_id, out);
        let edge = child
            .step
            .as_ref()
            .map(|s| s.to_string())
            .unwrap_or_default();
        writeln!(out, "  n{id} -> n{cid} [label=\"{edge}\"];").unwrap();
    }
    id
}

fn node_value(n: &Node) -> Value {
    let (step, rule, degree) = match &n.step {
        None => (Value::Null, Value::Null, Value::Null),
        Some(StepLabel::Ss { rule, degree }) => {
            ("SS".into(), json!(rule), degree.to_string().into())
        }
        Some(StepLabel::Fs) => ("FS".into(), json!(0), Value::Null),
        Some(StepLabel::Is(_)) => ("IS".into(), Value::Null, Value::Null),
    };
    let mut v = json!({
        "goal": n.state.goal.to_string(),
        "sigma": n.state.sigma.to_string(),
        "step": step,
        "rule": rule,
        "degree": degree,
        "children": n.children.iter().map(node_value).collect::<Vec<_>>(),
    });
    if let Some(e) = &n.error {
        v["error"] = e.as_str().into();
    }
    v
}

/// The tree as a JSON document with fields
/// `{goal, sigma, step, rule, degree, children}` per node.
pub fn render_structured(tree: &DerivationTree) -> String {
    serde_json::to_string_pretty(&node_value(&tree.root)).unwrap()
}

/// The parsed rule list as a JSON array of `{id, head, body}`.
pub fn rules_document(rules: &[Rule]) -> String {
    let v: Vec<Value> = rules
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "head": r.head.to_string(),
                "body": r.body.to_string(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&v).unwrap()
}
