use probaccept::format::{parse_base, write_base};
use probaccept::CliError;
use probaccept_core::rational::ratio;
use probaccept_core::world::{biased_lottery, fair_lottery, independent_lottery};
use probaccept_core::BeliefBase;

fn same(a: &BeliefBase, b: &BeliefBase) {
    assert_eq!(a.model(), b.model());
    assert_eq!(a.labels(), b.labels());
    assert_eq!(a.candidates().as_slice(), b.candidates().as_slice());
    assert_eq!(a.background().as_slice(), b.background().as_slice());
}

#[test]
fn generated_lotteries_round_trip() {
    let bases = [
        fair_lottery(1).unwrap(),
        fair_lottery(7).unwrap(),
        biased_lottery(&[ratio(1, 100), ratio(9, 100), ratio(90, 100)]).unwrap(),
        independent_lottery(3, &ratio(1, 3)).unwrap(),
    ];
    for base in &bases {
        let text = write_base(base, Some("generated\nfor a test"));
        let back = parse_base(&text).unwrap();
        same(base, &back);
        assert_eq!(write_base(&back, Some("generated\nfor a test")), text);
    }
}

#[test]
fn hundred_world_lottery() {
    let text = write_base(&fair_lottery(100).unwrap(), None);
    let base = parse_base(&text).unwrap();
    assert_eq!(base.model().worlds().len(), 100);
    assert!(base.model().worlds().iter().all(|w| w.weight == ratio(1, 100)));
}

#[test]
fn independent_lottery_has_product_worlds() {
    let text = write_base(&independent_lottery(2, &ratio(1, 2)).unwrap(), None);
    let base = parse_base(&text).unwrap();
    assert_eq!(base.model().worlds().len(), 4);
    assert_eq!(base.labels(), ["L1", "L2", "some_wins"]);
}

const HAND_WRITTEN: &str = "
# two coins, the second biased
ATOMS:
  heads_1, heads_2   # trailing comment
WORLDS:
w1: heads_1=1 heads_2=1 weight 3/8
w2: heads_1=1 heads_2=0 weight 1/8
w3: heads_1=0 heads_2=1 weight 3/8
w4: heads_2=0 heads_1=0 weight 1/8

CANDIDATES:
  second: heads_2
  either: heads_1 | heads_2
";

#[test]
fn hand_written_file() {
    let base = parse_base(HAND_WRITTEN).unwrap();
    assert_eq!(base.model().atoms(), ["heads_1", "heads_2"]);
    assert!(base.background().is_empty());
    assert_eq!(base.labels(), ["second", "either"]);
    assert_eq!(base.model().probability(base.candidate(1)).unwrap(), ratio(7, 8));
}

fn error_of(text: &str) -> (usize, String) {
    match parse_base(text) {
        Err(CliError::Format { line, message }) => (line, message),
        other => panic!("expected a format error, got {other:?}"),
    }
}

#[test]
fn errors_name_the_line() {
    let base = "ATOMS:\na b\nWORLDS:\nw1: a=1 b=0 weight 1\n";
    let (line, msg) = error_of(&format!("{base}CANDIDATES:\nx: a & (b\n"));
    assert_eq!(line, 6);
    assert!(msg.starts_with("column 10:"), "{msg}");

    let (line, msg) = error_of("ATOMS:\na\nWORLDS:\nw1: a=2 weight 1\n");
    assert_eq!((line, msg.as_str()), (4, "`a` must be 0 or 1, found `2`"));

    let (line, _) = error_of("ATOMS:\na b\nWORLDS:\nw1: a=1 weight 1\n");
    assert_eq!(line, 4);
    let (line, _) = error_of("ATOMS:\na\nWORLDS:\nw1: a=1 weight 0.5\n");
    assert_eq!(line, 4);
    let (line, _) = error_of("a b\nATOMS:\n");
    assert_eq!(line, 1);
    let (line, _) = error_of("ATOMS:\na\nATOMS:\n");
    assert_eq!(line, 3);
}

#[test]
fn whole_file_errors() {
    let (line, msg) = error_of("ATOMS:\na\n");
    assert_eq!((line, msg.as_str()), (0, "missing section `WORLDS:`"));
    let (_, msg) = error_of("ATOMS:\na\nWORLDS:\nw1: a=1 weight 1/2\n");
    assert!(msg.contains("sum"), "{msg}");
    let (_, msg) = error_of("ATOMS:\na\nWORLDS:\nw1: a=1 weight 1/2\nw2: a=0 weight 1/2\nBACKGROUND:\na\n");
    assert!(msg.contains("not 1"), "{msg}");
    let (_, msg) = error_of("ATOMS:\na\nWORLDS:\nw1: a=1 weight 1\nCANDIDATES:\nx: zzz\n");
    assert!(msg.contains("zzz"), "{msg}");
}
