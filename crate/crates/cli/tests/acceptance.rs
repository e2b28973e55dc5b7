//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Set `STPA_BLESS=1` to rewrite the golden files.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRng, TestRunner};

use stpa_core::analysis::{build_context_table, detect_conflicts, enumerate_contexts, expand, TableOptions};
use stpa_core::causal::{walk_paths, Direction};
use stpa_core::corpus::{corpus_dir, load_corpus, MANIFEST};
use stpa_core::dsl::serialize_unchecked;
use stpa_core::{parse_str, serialize, GuideCategory, Severity, StpaModel};

use common::{brute_enumerate, brute_matches, partial_with_vars, to_context, valid_model, variable_set};

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("corpus fidelity", corpus_fidelity),
        ("context cardinality", context_cardinality),
        ("expansion oracle", expansion_oracle),
        ("conflict reproduction", conflict_reproduction),
        ("walk reproduction", walk_reproduction),
        ("round-trip", round_trip),
        ("determinism and goldens", determinism),
        ("diagnostic severity contract", severity_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Result<StpaModel, String> {
    load_corpus().map_err(|e| format!("{e:?}"))
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn corpus_fidelity() -> Result<String, String> {
    let start = Instant::now();
    let m = corpus()?;
    let counts = (
        m.losses.len(),
        m.hazards.len(),
        m.constraints.len(),
        m.ucas.len(),
        m.causal_factors.len(),
    );
    ensure(counts == (2, 4, 2, 17, 30), || format!("counts {counts:?}"))?;
    let sizes: Vec<usize> = m.variables.iter().map(|v| v.values.len()).collect();
    ensure(sizes == [2, 4, 2, 2, 2], || format!("domain sizes {sizes:?}"))?;
    let split: Vec<usize> = GuideCategory::ALL
        .iter()
        .map(|c| m.ucas.iter().filter(|u| u.guide.category == *c).count())
        .collect();
    ensure(split == [4, 6, 4, 3], || format!("guide split {split:?}"))?;
    let printed = [
        "H-1", "H-3", "H-4 H-2", "H-1", "H-1", "H-3", "H-4 H-2", "H-1 H-2", "H-1", "H-3", "H-1", "H-1", "H-3",
        "H-2 H-4", "H-1", "H-3", "H-2 H-4",
    ];
    for (u, want) in m.ucas.iter().zip(printed) {
        let got: Vec<&str> = u.hazards.iter().map(|h| h.as_str()).collect();
        ensure(got.join(" ") == want, || {
            format!("{} links {got:?}, printed {want}", u.id)
        })?;
    }
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!(
        "2/4/2 purpose, domains 2/4/2/2/2, 17 UCAs split 4/6/4/3, 30 CFs in {took:?}"
    ))
}

fn context_cardinality() -> Result<String, String> {
    let start = Instant::now();
    let m = corpus()?;
    let table = build_context_table(&m, "Operator", "BrakeCmd", TableOptions::default()).map_err(|e| e.to_string())?;
    ensure(table.len() == 64, || format!("brake table has {} rows", table.len()))?;
    runner(200)
        .run(&variable_set(6, 5), |vars| {
            let rows = enumerate_contexts(&vars).unwrap();
            let product: usize = vars.iter().map(|v| v.values.len()).product();
            assert_eq!(rows.len(), product);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!("64 brake rows, 200 random sets in {took:?}"))
}

fn expansion_oracle() -> Result<String, String> {
    runner(500)
        .run(&partial_with_vars(6, 5), |(partial, vars)| {
            let got = expand(&partial, &vars).unwrap();
            let want: Vec<_> = brute_enumerate(&vars)
                .iter()
                .filter(|r| brute_matches(&partial, r))
                .map(|r| to_context(r))
                .collect();
            assert_eq!(got, want);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("500 pairs equal brute-force filtering".into())
}

fn conflict_reproduction() -> Result<String, String> {
    let m = corpus()?;
    let table = build_context_table(&m, "Operator", "BrakeCmd", TableOptions::default()).map_err(|e| e.to_string())?;
    let (a, b) = (m.uca("UCA-3").unwrap(), m.uca("UCA-7").unwrap());
    let oracle = brute_enumerate(&table.variables)
        .iter()
        .filter(|r| brute_matches(&a.context, r) && brute_matches(&b.context, r))
        .count();
    let conflicts = detect_conflicts(&m, "BrakeCmd").map_err(|e| e.to_string())?;
    let pair = conflicts
        .iter()
        .find(|c| c.uca_a == "UCA-3" && c.uca_b == "UCA-7")
        .ok_or("UCA-3/UCA-7 not reported")?;
    ensure(pair.shared.len() == oracle, || {
        format!("{} shared contexts, oracle {oracle}", pair.shared.len())
    })?;
    Ok(format!(
        "UCA-3/UCA-7 share {oracle} contexts ({} pairs total)",
        conflicts.len()
    ))
}

fn is_subsequence(needle: &[&str], hay: &[&str]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

fn walk_reproduction() -> Result<String, String> {
    let m = corpus()?;
    let walks = walk_paths(&m, "UCA-1").map_err(|e| e.to_string())?;
    let labelled = |dir| -> Vec<Vec<&str>> {
        walks
            .walks
            .iter()
            .filter(|w| w.direction == dir)
            .map(|w| w.elements.iter().map(|e| m.entity_label(e.as_str())).collect())
            .collect()
    };
    let feedback = ["Camera", "Encoder", "Network-UL", "Interface", "Display", "Operator"];
    let control = ["Brakep.", "Network-DL", "Actuators", "Vehicle Dynamics"];
    let fb = labelled(Direction::FeedbackPath);
    ensure(fb.iter().any(|w| is_subsequence(&feedback, w)), || {
        format!("feedback walks {fb:?}")
    })?;
    let ctl = labelled(Direction::ControlPath);
    ensure(ctl.iter().any(|w| is_subsequence(&control, w)), || {
        format!("control walks {ctl:?}")
    })?;
    Ok(format!(
        "both chains found among {} feedback and {} control walks",
        fb.len(),
        ctl.len()
    ))
}

fn reparse(m: &StpaModel) -> Result<StpaModel, String> {
    let text = serialize(m).map_err(|d| format!("{d:?}"))?;
    let (back, diags) = parse_str("round-trip.stpa", &text);
    if let Some(d) = diags.iter().find(|d| d.severity == Severity::Error) {
        return Err(format!("{d:?}"));
    }
    ensure(serialize_unchecked(&back) == text, || {
        "second serialization differs".into()
    })?;
    Ok(back)
}

fn round_trip() -> Result<String, String> {
    let m = corpus()?;
    ensure(reparse(&m)? == m, || "corpus changes after a round trip".into())?;
    runner(300)
        .run(&valid_model(), |m| {
            assert_eq!(reparse(&m).unwrap(), m);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("corpus and 300 random models".into())
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus_args() -> Vec<String> {
    MANIFEST.files.iter().map(|f| format!("corpus/{f}")).collect()
}

fn stpa(dir: &Path, args: &[&str], files: &[String]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stpa"))
        .current_dir(dir)
        .env_remove("STPA_MAX_ROWS")
        .args(args)
        .args(files)
        .output()
        .expect("stpa binary runs")
}

const GOLDENS: [(&str, &[&str]); 5] = [
    ("worksheet.md", &["worksheet", "--action", "BrakeCmd"]),
    ("contexts.csv", &["contexts", "--action", "BrakeCmd"]),
    ("trace.md", &["trace"]),
    ("graph.dot", &["graph"]),
    ("check.txt", &["check"]),
];

fn determinism() -> Result<String, String> {
    let root = workspace_root();
    let files = corpus_args();
    let commands: &[&[&str]] = &[
        &["check"],
        &["contexts", "--action", "BrakeCmd"],
        &["worksheet"],
        &["worksheet", "--format", "json"],
        &["trace"],
        &["trace", "--format", "json"],
        &["checklist", "--uca", "UCA-1"],
        &["checklist", "--format", "json"],
        &["graph"],
        &["stats"],
        &["stats", "--format", "json"],
    ];
    for args in commands {
        let (a, b) = (stpa(&root, args, &files), stpa(&root, args, &files));
        ensure(a.status.code() == b.status.code(), || {
            format!("{args:?} exit codes differ")
        })?;
        ensure(a.stdout == b.stdout && a.stderr == b.stderr, || {
            format!("{args:?} output differs")
        })?;
        ensure(a.status.code().is_some_and(|c| c <= 1), || {
            format!(
                "{args:?} exited {:?}: {}",
                a.status.code(),
                String::from_utf8_lossy(&a.stderr)
            )
        })?;
    }

    let mut formatted = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        copy_corpus(dir.path())?;
        let out = stpa(dir.path(), &["fmt"], &files);
        ensure(out.status.success(), || {
            String::from_utf8_lossy(&out.stderr).into_owned()
        })?;
        formatted.push(read_corpus_copy(dir.path())?);
    }
    ensure(formatted[0] == formatted[1], || {
        "fmt output differs between runs".into()
    })?;

    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var("STPA_BLESS").is_ok_and(|v| v == "1");
    for (name, args) in GOLDENS {
        let out = stpa(&root, args, &files);
        let actual = if name == "check.txt" { out.stderr } else { out.stdout };
        let path = golden_dir.join(name);
        if bless {
            std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
            continue;
        }
        let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(actual == expected, || format!("{name} does not match its golden file"))?;
    }
    Ok(format!(
        "{} commands and fmt stable across runs, {} goldens match",
        commands.len(),
        GOLDENS.len()
    ))
}

fn copy_corpus(dir: &Path) -> Result<(), String> {
    std::fs::create_dir(dir.join("corpus")).map_err(|e| e.to_string())?;
    for f in MANIFEST.files {
        std::fs::copy(corpus_dir().join(f), dir.join("corpus").join(f)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn read_corpus_copy(dir: &Path) -> Result<Vec<String>, String> {
    MANIFEST
        .files
        .iter()
        .map(|f| std::fs::read_to_string(dir.join("corpus").join(f)).map_err(|e| e.to_string()))
        .collect()
}

/// Corpus file texts with one file replaced.
struct Mutant {
    what: String,
    file: usize,
    text: String,
}

fn declaration_id(line: &str) -> Option<&str> {
    let mut words = line.split_whitespace();
    let keyword = words.next()?;
    if keyword.starts_with('#') {
        return None;
    }
    words.next()
}

fn mutants(m: &StpaModel, texts: &[String]) -> Vec<Mutant> {
    let mut out = Vec::new();
    let decl_line = |id: &str| -> Option<(usize, usize)> {
        texts
            .iter()
            .enumerate()
            .find_map(|(f, t)| t.lines().position(|l| declaration_id(l) == Some(id)).map(|n| (f, n)))
    };
    let edit = |file: usize, change: &dyn Fn(&mut Vec<String>)| -> String {
        let mut lines: Vec<String> = texts[file].lines().map(str::to_owned).collect();
        change(&mut lines);
        lines.join("\n") + "\n"
    };

    for h in &m.hazards {
        for target in &h.leads_to {
            if let Some((file, n)) = decl_line(target.as_str()) {
                out.push(Mutant {
                    what: format!("delete {target}, a leads_to target of {}", h.id),
                    file,
                    text: edit(file, &|lines| {
                        lines.remove(n);
                    }),
                });
            }
        }
    }

    for (file, text) in texts.iter().enumerate() {
        for (n, line) in text.lines().enumerate() {
            if let Some(id) = declaration_id(line) {
                out.push(Mutant {
                    what: format!("duplicate {id}"),
                    file,
                    text: edit(file, &|lines| lines.insert(n + 1, lines[n].clone())),
                });
            }
        }
    }

    for cf in &m.causal_factors {
        let mut on_path = HashSet::new();
        for u in &cf.ucas {
            on_path.insert(m.uca(u.as_str()).unwrap().source_controller.clone());
            for w in walk_paths(m, u.as_str()).unwrap().walks {
                on_path.extend(w.elements);
            }
        }
        let Some(off) = m.entities.iter().find(|e| !on_path.contains(&e.id)) else {
            continue;
        };
        let (file, n) = decl_line(cf.id.as_str()).unwrap();
        let from = format!(" at {} for ", cf.located_at);
        let to = format!(" at {} for ", off.id);
        out.push(Mutant {
            what: format!("relocate {} to {}", cf.id, off.id),
            file,
            text: edit(file, &|lines| lines[n] = lines[n].replacen(&from, &to, 1)),
        });
    }
    out
}

fn severity_contract() -> Result<String, String> {
    let m = corpus()?;
    let texts: Vec<String> = MANIFEST
        .files
        .iter()
        .map(|f| std::fs::read_to_string(corpus_dir().join(f)).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let all = mutants(&m, &texts);
    let relocations = all.iter().filter(|x| x.what.starts_with("relocate")).count();
    ensure(relocations == m.causal_factors.len(), || {
        format!(
            "only {relocations} of {} CFs have an off-path entity",
            m.causal_factors.len()
        )
    })?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    copy_corpus(dir.path())?;
    let files = corpus_args();
    let baseline = stpa(dir.path(), &["check"], &files);
    ensure(baseline.status.code() == Some(0), || {
        "unmutated corpus does not pass check".into()
    })?;

    let mut missed = Vec::new();
    for mutant in &all {
        let path = dir.path().join(&files[mutant.file]);
        std::fs::write(&path, &mutant.text).map_err(|e| e.to_string())?;
        let out = stpa(dir.path(), &["check"], &files);
        let stderr = String::from_utf8_lossy(&out.stderr);
        if out.status.code() != Some(2) || !stderr.contains(": error[") {
            missed.push(format!("{} (exit {:?})", mutant.what, out.status.code()));
        }
        std::fs::write(&path, &texts[mutant.file]).map_err(|e| e.to_string())?;
    }
    ensure(missed.is_empty(), || {
        format!("{} mutants survived: {}", missed.len(), missed.join("; "))
    })?;
    Ok(format!("{} mutants each give an error and exit 2", all.len()))
}
