use std::fmt::Write;

use mmsim_core::{Membrane, Model, Multiset, Rule, RuleForm};

/// Canonical text for a model.
///
/// Membranes appear in stored order, one per line and indented by depth;
/// multiset entries are in lexicographic symbol order; rules follow in
/// stored order, one per line. Parsing the output yields the same
/// structure with the same (pre-order) ids.
pub fn serialize_model(model: &Model) -> String {
    let mut out = String::new();
    if let Some(name) = model.name() {
        for line in name.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    write_membrane(&mut out, model.config().skin(), 0);
    for rule in model.rules() {
        out.push_str(&rule_line(rule));
        out.push('\n');
    }
    out
}

fn write_membrane(out: &mut String, m: &Membrane, depth: usize) {
    let indent = "  ".repeat(depth);
    if m.children.is_empty() {
        let _ = writeln!(out, "{indent}[{}: {}]", m.label, m.contents);
        return;
    }
    let _ = write!(out, "{indent}[{}:", m.label);
    if !m.contents.is_empty() {
        let _ = write!(out, " {}", m.contents);
    }
    out.push('\n');
    for child in &m.children {
        write_membrane(out, child, depth + 1);
    }
    let _ = writeln!(out, "{indent}]");
}

fn rhs(ms: &Multiset) -> String {
    if ms.is_empty() {
        "()".to_string()
    } else {
        ms.to_string()
    }
}

/// One rule in surface syntax, without a trailing newline.
pub fn rule_line(rule: &Rule) -> String {
    let head = match (rule.form(), rule.host()) {
        (RuleForm::Endo, Some(h)) => format!("endo {} into {h}", rule.subject()),
        (RuleForm::Exo, Some(h)) => format!("exo {} from {h}", rule.subject()),
        (form, _) => format!("{} {}", form.keyword(), rule.subject()),
    };
    let mut s = format!(
        "rule {}: {head}: {} -> {}",
        rule.id(),
        rule.consumed(),
        rhs(rule.produced())
    );
    if let Some(p) = rule.promoter() {
        let _ = write!(s, " if {p}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_model;

    #[test]
    fn empty_skin() {
        let m = parse_model("[skin]").unwrap();
        assert_eq!(serialize_model(&m), "[skin: ]\n");
    }

    #[test]
    fn contents_sorted() {
        let m = parse_model("[skin: b, a*2]").unwrap();
        assert_eq!(serialize_model(&m), "[skin: a*2, b]\n");
    }

    #[test]
    fn nested_and_rules() {
        let src = "[skin: [T: c*10] [CU: [BMU: ] [V: p0]]] \
                   rule r1: endo V into T: p1 -> p2 \
                   rule r2: send-out V: x -> () if p6";
        let text = serialize_model(&parse_model(src).unwrap());
        assert_eq!(
            text,
            "[skin:\n  [T: c*10]\n  [CU:\n    [BMU: ]\n    [V: p0]\n  ]\n]\n\
             rule r1: endo V into T: p1 -> p2\n\
             rule r2: send-out V: x -> () if p6\n"
        );
        assert_eq!(parse_model(&text).unwrap(), parse_model(src).unwrap());
    }

    #[test]
    fn name_is_a_comment() {
        let m = parse_model("[skin]").unwrap().with_name("demo");
        let text = serialize_model(&m);
        assert!(text.starts_with("# demo\n"));
        assert!(parse_model(&text).unwrap().structurally_eq(&m));
    }
}
