//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_FAILURES` is reported as FAIL with its reason but does not
//! fail the run; any other failure does.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use pcfgroups::contraction::{NucleusCaps, WordProblem};
use pcfgroups::limitspace::{boundary_certificates, emit_graph, schreier_graph, tile_graph, GraphFormat};
use pcfgroups::structure::{is_bounded, is_pcf, nucleus_partition, post_critical_set};
use pcfgroups::zoo;
use pcfgroups::{compute_nucleus, open_set_condition, GroupWord, StateWord};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Verdict);

const KNOWN_FAILURES: &[(u32, &str)] = &[(
    4,
    "grigorchuk target 3 paths / 1 sequence counts only the paths ending at b, c, d; \
     the paths …1110 ending at a (entered from b and from c) also end at a non-trivial state",
)];

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut names = Vec::new();
    for e in zoo::zoo() {
        let m = e.machine();
        if !is_bounded(&m).0 {
            continue;
        }
        let report = compute_nucleus(&m, &e.generators(), NucleusCaps::default()).map_err(|x| x.to_string())?;
        let n = report
            .nucleus()
            .ok_or_else(|| format!("{}: inconclusive at default caps", e.name))?;
        ensure(is_pcf(n).is_pcf, format!("{}: nucleus not p.c.f.", e.name))?;
        names.push(e.name);
    }
    let secs = start.elapsed().as_secs_f64();
    let expected = ["identity", "adder", "grigorchuk", "gupta_sidki_3", "basilica", "swap_finitary"];
    for name in expected {
        ensure(names.contains(&name), format!("{name} not classified bounded"))?;
    }
    ensure(secs < 5.0, format!("took {secs:.2}s"))?;
    Ok(format!("{} bounded machines contracting and p.c.f. in {secs:.2}s", names.len()))
}

fn criterion_2() -> Verdict {
    let mut checked = 0;
    for name in pcf_entries() {
        let n = nucleus(name);
        if is_pcf(&n).is_pcf {
            ensure(is_bounded(n.machine()).0, format!("{name}: p.c.f. nucleus not bounded"))?;
            checked += 1;
        }
    }
    let m = machine("lamplighter");
    ensure(!is_bounded(&m).0, "lamplighter classified bounded")?;
    let report = compute_nucleus(&m, &zoo::generators_of(&m), NucleusCaps::default()).map_err(|e| e.to_string())?;
    ensure(!report.is_contracting(), "lamplighter contracting")?;
    let h = &report.candidate_history;
    ensure(h.windows(2).all(|w| w[0] < w[1]), format!("history not increasing: {h:?}"))?;
    // the first entry is the starting set; every later entry is one closure round
    ensure(h.len() >= 5, format!("only {} rounds: {h:?}", h.len() - 1))?;
    Ok(format!("{checked} p.c.f. nuclei bounded; lamplighter unbounded, candidates {h:?}"))
}

fn criterion_3() -> Verdict {
    for name in pcf_entries() {
        ensure(nucleus_partition(&nucleus(name)).disjoint_simple_cycles, format!("{name}: flag false"))?;
    }
    let g = nucleus_partition(&nucleus("grigorchuk"));
    ensure(g.cyclic == ["b", "c", "d"], format!("grigorchuk rest {:?}", g.cyclic))?;
    ensure(g.cycles == vec![vec!["b", "c", "d"]], format!("grigorchuk cycles {:?}", g.cycles))?;
    let a = nucleus_partition(&nucleus("adder"));
    ensure(a.cycles == vec![vec!["a"], vec!["a^-1"]], format!("adder cycles {:?}", a.cycles))?;
    // self-loops: each state's only arrow inside the rest returns to itself
    let n = nucleus("adder");
    for q in n.nontrivial_states() {
        let loops = (0..2).filter(|&x| n.machine().next(q, x) == q).count();
        ensure(loops == 1, "adder cycle is not a self-loop")?;
    }
    Ok(format!("{} p.c.f. nuclei split into disjoint simple cycles", pcf_entries().len()))
}

fn criterion_4() -> Verdict {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (name, paths, sequences) in [("adder", 2, 2), ("grigorchuk", 3, 1)] {
        let n = nucleus(name);
        let got_paths = is_pcf(&n).path_count.unwrap_or(usize::MAX);
        let got_seqs = post_critical_set(&n).map(|s| s.len()).unwrap_or(usize::MAX);
        let oracle = walk_counts(&n);
        let line = format!(
            "{name}: paths {got_paths} (oracle {}, target {paths}), sequences {got_seqs} (oracle {}, target {sequences})",
            oracle.paths, oracle.sequences
        );
        if got_paths != oracle.paths || got_seqs != oracle.sequences {
            return Err(format!("disagrees with oracle: {line}"));
        }
        if got_paths != paths || got_seqs != sequences {
            failures.push(line);
        } else {
            notes.push(line);
        }
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Verdict {
    let m = machine("grigorchuk");
    let n = nucleus("grigorchuk");
    let start = Instant::now();
    let mut solver = WordProblem::new(&m, &n);
    let cases = [
        ("a*a", true),
        ("b*b", true),
        ("c*c", true),
        ("d*d", true),
        ("b*c*d", true),
        ("a*d*a*d*a*d*a*d", true),
        ("a*b", false),
        ("a*d*a*d", false),
    ];
    for (w, expected) in cases {
        let word: GroupWord = w.parse().unwrap();
        let fast = solver.is_identity(&word).map_err(|e| e.to_string())?;
        let oracle = fixes_level(&m, &word, 10);
        ensure(fast == expected && oracle == expected, format!("{w}: solver {fast}, oracle {oracle}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gens = zoo::generators_of(&m);
    let mut trivial = 0;
    let mut mismatches = Vec::new();
    for _ in 0..500 {
        let word = random_word(&mut rng, &gens, 12, false);
        let fast = solver.is_identity(&word).map_err(|e| e.to_string())?;
        if fast != fixes_level(&m, &word, 10) {
            mismatches.push(word.to_string());
        }
        trivial += fast as usize;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(mismatches.is_empty(), format!("mismatches: {mismatches:?}"))?;
    ensure(secs < 10.0, format!("took {secs:.2}s"))?;
    Ok(format!("8 relations and 500 random words ({trivial} trivial) agree with level-10 action, {secs:.2}s"))
}

fn criterion_6() -> Verdict {
    let n = nucleus("adder");
    for level in 1..=6usize {
        let g = tile_graph(&n, level).map_err(|e| e.to_string())?;
        let size = 1usize << level;
        ensure(g.vertex_count() == size, "vertex count")?;
        // neighbours of value k are k ± 1 mod 2^n
        for (u, adj) in g.adjacency().iter().enumerate() {
            let k = odometer_value(g.word(u).letters());
            let expected: BTreeSet<usize> = [(k + 1) % size, (k + size - 1) % size].into();
            let got: BTreeSet<usize> = adj.iter().map(|&v| odometer_value(g.word(v).letters())).collect();
            ensure(got == expected, format!("adder level {level}: vertex {k} has {got:?}"))?;
        }
        // counted with witnesses the two level-1 tiles are joined twice, by a and a^-1
        let mut degree = vec![0; size];
        for e in &g.edges {
            degree[e.u] += e.witnesses.len();
            degree[e.v] += e.witnesses.len();
        }
        ensure(degree.iter().all(|&k| k == 2), format!("adder level {level}: degrees {degree:?}"))?;
        let reach = pcfgroups::digraph::forward_closure(&g.adjacency(), [0]);
        ensure(reach.iter().all(|&b| b), format!("adder level {level} disconnected"))?;
    }
    let id = nucleus("identity");
    for level in 1..=6 {
        ensure(tile_graph(&id, level).unwrap().edges.is_empty(), "identity has edges")?;
    }
    let mut edges = 0;
    for name in pcf_entries() {
        let n = nucleus(name);
        let d = n.machine().degree();
        for level in 1..=4 {
            let fine = tile_graph(&n, level + 1).unwrap();
            let coarse = tile_graph(&n, level).unwrap();
            for e in &fine.edges {
                let (u, v) = (e.u / d, e.v / d);
                ensure(u == v || coarse.has_edge(u, v), format!("{name}: level {} edge not shift compatible", level + 1))?;
                edges += 1;
            }
        }
    }
    Ok(format!(
        "adder levels 1-6 are cycles, every vertex of degree 2 counting witnesses; identity edgeless; {edges} edges shift compatible"
    ))
}

fn criterion_7() -> Verdict {
    let mut count = 0;
    for e in zoo::zoo() {
        if !e.expected().contracting {
            continue;
        }
        let n = nucleus(e.name);
        let osc = open_set_condition(&n);
        ensure(osc == open_set_by_scan(&n), format!("{}: disagrees with scan", e.name))?;
        ensure(osc, format!("{}: open set condition fails", e.name))?;
        count += 1;
    }
    let c = boundary_certificates(&nucleus("adder"), &StateWord(vec![0, 0])).map_err(|e| e.to_string())?;
    ensure(c.certificates.len() == 2, format!("adder 00 has {} certificates", c.certificates.len()))?;
    Ok(format!("open set condition holds for {count} corpus nuclei; adder tile 00 has 2 certificates"))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_pcfg")).args(args).output().unwrap();
    (o.status.code(), o.stdout, o.stderr)
}

fn criterion_8() -> Verdict {
    let commands: Vec<Vec<&str>> = vec![
        vec!["info", "zoo:grigorchuk"],
        vec!["classify", "zoo:basilica"],
        vec!["classify", "zoo:lamplighter"],
        vec!["nucleus", "zoo:gupta_sidki_3"],
        vec!["nucleus", "zoo:lamplighter", "--max-iter", "8", "--max-states", "512"],
        vec!["pcf", "zoo:basilica"],
        vec!["wp", "zoo:grigorchuk", "a*d*a*d*a*d*a*d"],
        vec!["tiles", "zoo:basilica", "--level", "6"],
        vec!["tiles", "zoo:gupta_sidki_3", "--level", "4", "--dot"],
        vec!["boundary", "zoo:grigorchuk", "10"],
        vec!["schreier", "zoo:grigorchuk", "--level", "5"],
        vec!["schreier", "zoo:adder", "--level", "4", "--dot"],
        vec!["zoo", "list"],
        vec!["zoo", "cat", "basilica"],
    ];
    for args in &commands {
        let first = run_cli(args);
        let second = run_cli(args);
        ensure(first == second, format!("{args:?} differs between runs"))?;
    }
    let n = nucleus("basilica");
    let m = machine("grigorchuk");
    let render = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let t = tile_graph(&n, 8).unwrap();
            let s = schreier_graph(&m, &["a", "b", "c", "d"], 8).unwrap();
            (
                emit_graph(&t, GraphFormat::Structured),
                emit_graph(&t, GraphFormat::Dot),
                emit_graph(&s, GraphFormat::Dot),
            )
        })
    };
    let single = render(1);
    for threads in [2, 4, 8] {
        ensure(render(threads) == single, format!("emission differs with {threads} threads"))?;
    }
    Ok(format!("{} commands byte-identical across runs; emission stable for 1-8 threads", commands.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "bounded implies contracting and p.c.f.", criterion_1),
        (2, "p.c.f. nuclei are bounded; lamplighter grows", criterion_2),
        (3, "nucleus cycle partition", criterion_3),
        (4, "post-critical counts", criterion_4),
        (5, "word problem", criterion_5),
        (6, "tile graphs", criterion_6),
        (7, "open set condition and boundaries", criterion_7),
        (8, "determinism", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut unexpected = 0;
    for (id, title, check) in criteria {
        let verdict = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match verdict {
            Ok(detail) => println!("criterion {id} PASS {title}: {detail}"),
            Err(detail) => match KNOWN_FAILURES.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => println!("criterion {id} FAIL {title}: {detail} [known: {why}]"),
                None => {
                    println!("criterion {id} FAIL {title}: {detail}");
                    unexpected += 1;
                }
            },
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
