use std::fmt::Write;

use super::lexer::{is_local_char, is_local_start, is_prefix_char};
use super::{Document, PrefixMap, Rule};
use crate::term::{Graph, Literal, Term, Triple};
use crate::vocab;

fn valid_local(local: &str) -> bool {
    match local.chars().next() {
        None => true,
        Some(first) => is_local_start(first) && local.chars().all(is_local_char) && !local.ends_with('.'),
    }
}

fn compact(iri: &str, prefixes: &PrefixMap) -> Option<String> {
    prefixes
        .iter()
        .filter(|(label, _)| label.chars().all(is_prefix_char))
        .filter_map(|(label, base)| {
            let local = iri.strip_prefix(base.as_str())?;
            valid_local(local).then_some((base.len(), label, local))
        })
        // longest namespace wins; ties go to the smallest label
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(a.1)))
        .map(|(_, label, local)| format!("{label}:{local}"))
}

fn escape(text: &str, out: &mut String) {
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Writes `term` in N3 syntax, using a prefixed name wherever a declared
/// prefix matches.
pub fn render_term(term: &Term, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    write_term(term, prefixes, &mut out);
    out
}

fn write_term(term: &Term, prefixes: &PrefixMap, out: &mut String) {
    match term {
        Term::Iri(iri) => match compact(iri, prefixes) {
            Some(name) => out.push_str(&name),
            None => {
                let _ = write!(out, "<{iri}>");
            }
        },
        Term::Literal(Literal::Number(n)) => {
            let _ = write!(out, "{n}");
        }
        Term::Literal(Literal::Text(text)) => escape(text, out),
        Term::Literal(Literal::Boolean(b)) => {
            let _ = write!(out, "{b}");
        }
        Term::Variable(name) => {
            let _ = write!(out, "?{name}");
        }
        Term::List(items) => {
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_term(item, prefixes, out);
            }
            out.push(')');
        }
        Term::Graph(graph) => write_graph(graph, prefixes, out),
    }
}

fn write_predicate(term: &Term, prefixes: &PrefixMap, out: &mut String) {
    if term.as_iri() == Some(vocab::RDF_TYPE) {
        out.push('a');
    } else {
        write_term(term, prefixes, out);
    }
}

fn write_triple(t: &Triple, prefixes: &PrefixMap, out: &mut String) {
    write_term(&t.subject, prefixes, out);
    out.push(' ');
    write_predicate(&t.predicate, prefixes, out);
    out.push(' ');
    write_term(&t.object, prefixes, out);
}

fn write_graph(graph: &Graph, prefixes: &PrefixMap, out: &mut String) {
    if graph.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{ ");
    for (i, t) in graph.iter().enumerate() {
        if i > 0 {
            out.push_str(". ");
        }
        write_triple(t, prefixes, out);
    }
    out.push_str(" }");
}

/// One statement for a group of triples sharing a subject.
fn write_statement(group: &Graph, prefixes: &PrefixMap, out: &mut String) {
    let mut iter = group.iter().peekable();
    let Some(first) = iter.peek() else { return };
    write_term(&first.subject, prefixes, out);
    let mut current: Option<&Term> = None;
    for t in group.iter() {
        match current {
            Some(p) if *p == t.predicate => out.push_str(", "),
            Some(_) => {
                out.push_str(";\n    ");
                write_predicate(&t.predicate, prefixes, out);
                out.push(' ');
            }
            None => {
                out.push(' ');
                write_predicate(&t.predicate, prefixes, out);
                out.push(' ');
            }
        }
        write_term(&t.object, prefixes, out);
        current = Some(&t.predicate);
    }
    out.push_str(" .\n");
}

fn write_rule(rule: &Rule, prefixes: &PrefixMap, out: &mut String) {
    write_graph(&rule.premise, prefixes, out);
    out.push_str(" => ");
    write_graph(&rule.conclusion, prefixes, out);
    out.push_str(" .\n");
}

/// Prefix block sorted by label, then fact statements in canonical order,
/// then rules in input order.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    for (label, base) in &doc.prefixes {
        let _ = writeln!(out, "@prefix {label}: <{base}> .");
    }
    let groups = doc.fact_groups();
    if !groups.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        for group in &groups {
            write_statement(group, &doc.prefixes, &mut out);
        }
    }
    if !doc.rules.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        for rule in &doc.rules {
            write_rule(rule, &doc.prefixes, &mut out);
        }
    }
    out
}
