//! Structural checks of the VASS lowering.

use minsky::gadgets::build_ack;
use minsky::ir::{parse, Classification, Program};
use minsky_cli::vass::{export_vass, VassError};

fn command_count(p: &Program) -> usize {
    match p {
        Program::Skip => 0,
        Program::Inc(_) | Program::Dec(_) | Program::Test(_) => 1,
        Program::Loop(b) => command_count(b),
        Program::Seq(a, b) | Program::Choice(a, b) => command_count(a) + command_count(b),
        Program::Repeat(b, k) => command_count(b) * *k as usize,
    }
}

#[test]
fn command_edges_match_the_expanded_listing() {
    let (ack, _) = build_ack(1, 0).unwrap();
    let core = match ack.classify() {
        Classification::Checking { core, .. } => core,
        other => panic!("expected checking, got {other:?}"),
    };
    let vass = export_vass(&ack).unwrap();
    let command_transitions = vass.transitions.iter().filter(|t| t.effect.is_some()).count();
    assert_eq!(command_transitions, command_count(&core.expand_repeats()));
}

#[test]
fn zero_finals_come_from_the_trailing_tests() {
    let p = parse("inc x; inc y; test y; test x").unwrap();
    let vass = export_vass(&p).unwrap();
    let names: Vec<&str> = vass.zero_finals.iter().map(|c| c.as_str()).collect();
    assert_eq!(names, ["x", "y"]);

    let p = parse("loop { inc x }").unwrap();
    let vass = export_vass(&p).unwrap();
    assert!(vass.zero_finals.is_empty());
}

#[test]
fn interior_tests_are_rejected() {
    let p = parse("test x; inc x").unwrap();
    assert!(matches!(export_vass(&p), Err(VassError::HasInteriorTests)));
}

#[test]
fn single_command_shape() {
    let p = parse("inc x").unwrap();
    let vass = export_vass(&p).unwrap();
    assert_eq!(vass.states.len(), 2);
    assert_eq!(vass.transitions.len(), 1);
    let rendered = vass.render();
    assert_eq!(
        rendered,
        "state l0\nstate l1\ninit l0\nfinal l1\ntrans l0 l1 x:+1\n"
    );
}
