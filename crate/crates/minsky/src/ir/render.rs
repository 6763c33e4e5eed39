//! Canonical renderer for the textual program format.
//!
//! Sequences are flattened into statement lists, so re-parsing the output
//! right-associates them; programs built through [`Program::seq_of`] (and the
//! parser itself) round-trip exactly.

use super::Program;
use std::fmt::Write;

pub(super) fn render(p: &Program) -> String {
    let mut out = String::new();
    render_program(p, 0, &mut out);
    out
}

fn render_program(p: &Program, indent: usize, out: &mut String) {
    let mut stmts = Vec::new();
    flatten(p, &mut stmts);
    if stmts.is_empty() {
        // The empty program prints as an explicit skip.
        stmts.push(&Program::Skip);
    }
    for (i, stmt) in stmts.iter().enumerate() {
        pad(indent, out);
        render_stmt(stmt, indent, out);
        if i + 1 < stmts.len() {
            out.push(';');
        }
        out.push('\n');
    }
}

/// Flattens the sequence spine into statements. A lone `Skip` is kept (it
/// renders as `skip`); `Skip`s that are sequence glue vanish.
fn flatten<'a>(p: &'a Program, out: &mut Vec<&'a Program>) {
    match p {
        Program::Seq(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        Program::Skip => out.push(p),
        other => out.push(other),
    }
}

fn render_stmt(p: &Program, indent: usize, out: &mut String) {
    match p {
        Program::Skip => out.push_str("skip"),
        Program::Inc(c) => {
            let _ = write!(out, "inc {c}");
        }
        Program::Dec(c) => {
            let _ = write!(out, "dec {c}");
        }
        Program::Test(c) => {
            let _ = write!(out, "test {c}");
        }
        Program::Loop(body) => {
            out.push_str("loop {\n");
            render_program(body, indent + 1, out);
            pad(indent, out);
            out.push('}');
        }
        Program::Repeat(body, k) => {
            let _ = writeln!(out, "repeat {k} {{");
            render_program(body, indent + 1, out);
            pad(indent, out);
            out.push('}');
        }
        Program::Choice(_, _) => {
            let mut branches = Vec::new();
            collect_branches(p, &mut branches);
            for (i, branch) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" or ");
                }
                out.push_str(if i == 0 { "choice {\n" } else { "{\n" });
                render_program(branch, indent + 1, out);
                pad(indent, out);
                out.push('}');
            }
        }
        Program::Seq(_, _) => unreachable!("sequences are flattened"),
    }
}

/// Collects the right spine of nested choices; a left-nested choice stays a
/// single branch and renders as a nested `choice` statement.
fn collect_branches<'a>(p: &'a Program, out: &mut Vec<&'a Program>) {
    match p {
        Program::Choice(a, b) => {
            out.push(a);
            collect_branches(b, out);
        }
        other => out.push(other),
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use crate::ir::{parse, CounterId, Program};

    fn c(name: &str) -> CounterId {
        CounterId::new(name)
    }

    #[test]
    fn renders_canonical_text() {
        let p = Program::seq_of([
            Program::inc(&c("x")),
            Program::loop_(Program::seq_of([
                Program::dec(&c("x")),
                Program::inc(&c("y")),
            ])),
        ]);
        assert_eq!(p.render(), "inc x;\nloop {\n  dec x;\n  inc y\n}\n");
    }

    #[test]
    fn round_trips_blocks() {
        let p = Program::seq_of([
            Program::repeat(Program::inc(&c("y")), 3),
            Program::choice_of([
                Program::inc(&c("a")),
                Program::loop_(Program::Skip),
                Program::dec(&c("b")),
            ]),
        ]);
        assert_eq!(parse(&p.render()).unwrap(), p);
    }

    #[test]
    fn round_trips_skip_forms() {
        assert_eq!(Program::Skip.render(), "skip\n");
        assert_eq!(parse(&Program::Skip.render()).unwrap(), Program::Skip);
        let p = Program::loop_(Program::Skip);
        assert_eq!(parse(&p.render()).unwrap(), p);
    }

    #[test]
    fn left_nested_choice_round_trips_via_nesting() {
        let p = Program::Choice(
            Box::new(Program::Choice(
                Box::new(Program::inc(&c("a"))),
                Box::new(Program::dec(&c("a"))),
            )),
            Box::new(Program::inc(&c("b"))),
        );
        assert_eq!(parse(&p.render()).unwrap(), p);
    }
}
