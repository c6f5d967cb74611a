use std::path::PathBuf;
use std::process::{Command, Output};

fn tantrix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tantrix"))
        .args(args)
        .output()
        .expect("run tantrix")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("tantrix-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn count_small_instances() {
    let s = Scratch::new("count");
    let o = tantrix(&["count", &s.file("empty.trp", "")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");

    let o = tantrix(&["count", &s.file("one.trp", "0 0 ggrryy\n")]);
    assert_eq!(stdout(&o).trim(), "6");

    let o = tantrix(&["count", &s.file("clamped.trp", "0 0 ggrryy\n! 0 0 0 g\n")]);
    assert_eq!(stdout(&o).trim(), "2");

    let o = tantrix(&["count", "--cap", "3", &s.file("capped.trp", "0 0 ggrryy\n")]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn malformed_instance_exits_2() {
    let s = Scratch::new("bad");
    let o = tantrix(&["count", &s.file("bad.trp", "0 0 ggrryz\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = tantrix(&["count", &s.path("missing.trp")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unique_exit_codes() {
    let s = Scratch::new("unique");
    let o = tantrix(&["unique", &s.file("one.trp", "0 0 ggrryy\n")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not-unique 2");

    let o = tantrix(&["unique", &s.file("empty.trp", "")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "unique 1");
}

#[test]
fn solve_prints_first_solution() {
    let s = Scratch::new("solve");
    let out = s.path("sol.txt");
    let o = tantrix(&["solve", "--cap", "2", "--out", &out, &s.file("one.trp", "0 0 ggrryy\n")]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.is_empty());
}

#[test]
fn reduce_then_count() {
    let s = Scratch::new("reduce");
    // (x1 or x2) and (not x1 or not x2): two models.
    let cnf = s.file("f.cnf", "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    let (out, pm) = (s.path("f.trp"), s.path("f.portmap"));
    let o = tantrix(&["reduce", &cnf, "--out", &out, "--portmap", &pm]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("tiles "));
    assert_eq!(std::fs::read_to_string(&pm).unwrap().lines().count(), 2);
    let o = tantrix(&["count", &out]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = tantrix(&["unique", &out]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_respects_the_variable_limit() {
    let s = Scratch::new("limit");
    let cnf = s.file("f.cnf", "p cnf 3 1\n1 2 3 0\n");
    let o = tantrix(&[
        "reduce",
        &cnf,
        "--out",
        &s.path("o"),
        "--portmap",
        &s.path("p"),
        "--limit",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = tantrix(&[
        "reduce",
        &s.file("bad.cnf", "p cnf 1 1\n2 0\n"),
        "--out",
        &s.path("o"),
        "--portmap",
        &s.path("p"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_gadgets_stock_and_broken() {
    let o = tantrix(&["verify-gadgets"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.ends_with("PASS")));

    let s = Scratch::new("gadgets");
    let stock = String::from_utf8(tantrix(&["verify-gadgets"]).stdout).unwrap();
    assert!(stock.contains("CROSS"));

    // WIRE without its fixing tile admits two solutions per input.
    let text = tantrix::gadgets::stock_library_text();
    let (start, end) = (text.find("gadget WIRE").unwrap(), text.find("gadget MOVE_R").unwrap());
    let lib = format!(
        "{}{}{}",
        &text[..start],
        text[start..end]
            .replace("cell 1 0 bbrrgg\n", "")
            .replace("fix x 1 0\n", ""),
        &text[end..]
    );
    assert!(lib.len() < text.len());
    let o = tantrix(&["verify-gadgets", &s.file("nofix.gadget", &lib)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("WIRE") && l.contains("count 2") && l.ends_with("FAIL")));

    let text = tantrix::gadgets::stock_library_text();
    let cut = text.find("gadget TEST").unwrap();
    let o = tantrix(&["verify-gadgets", &s.file("short.gadget", &text[..cut])]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_plain_and_solved() {
    let s = Scratch::new("render");
    let inst = s.file("two.trp", "0 0 ggrryy\n1 0 bbrryy\n");
    let o = tantrix(&["render", &inst]);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

    let sol = s.path("sol.txt");
    assert_eq!(tantrix(&["solve", "--out", &sol, &inst]).status.code(), Some(0));
    let out = s.path("two.svg");
    let o = tantrix(&["render", &inst, &sol, "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().contains("<path"));
}

#[test]
fn roundtrip_tautology_and_contradiction() {
    let s = Scratch::new("roundtrip");
    let o = tantrix(&["roundtrip", &s.file("taut.cnf", "p cnf 2 1\n1 -1 0\n")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("models 4 puzzle 4"));

    let o = tantrix(&["roundtrip", &s.file("contra.cnf", "p cnf 1 2\n1 0\n-1 0\n")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("models 0 puzzle 0"));
}
