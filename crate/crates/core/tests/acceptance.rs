//! One PASS/FAIL line per acceptance criterion, each under a fixed time bound.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use b2crystal::cli::{verify_document, EXIT_VIOLATION};
use b2crystal::coords::{self, check_coords, coords_by_case};
use b2crystal::crystal::{
    embed_product, enumerate_interval, fat_vertices, generate, generate_decorated,
    reversal_isomorphism, to_colored, weyl_dimension, DecoratedCrystal, Op,
};
use b2crystal::io::GraphDocument;
use b2crystal::model::{
    apply_e1, apply_e2, apply_f1, apply_f2, star, star_in_interval, Bounds, Configuration,
    EqualityPattern, ModelError,
};
use b2crystal::sky::{self, check_lemma1, contract, sail_model};
use b2crystal::{verify_all, Color, VerifyOptions};

type Outcome = Result<Vec<String>, String>;
type Step = fn(&Configuration, &Bounds) -> Result<Option<Configuration>, ModelError>;

fn range() -> impl Iterator<Item = (i64, i64)> {
    (0..=5).flat_map(|h| (0..=10).step_by(2).map(move |a| (h, a)))
}

fn bounds(h: i64, a: i64) -> Bounds {
    Bounds::interval(h, a).unwrap()
}

/// Dimension of the sp(4) module with highest weight `h ω1 + b ω2` by
/// Freudenthal's multiplicity formula, in orthogonal coordinates.
fn freudenthal_dimension(h: i64, b: i64) -> i64 {
    let lambda = (h + b, b);
    let rho = (2, 1);
    let positive = [(1, -1), (1, 1), (2, 0), (0, 2)];
    let dot = |u: (i64, i64), v: (i64, i64)| u.0 * v.0 + u.1 * v.1;
    let add = |u: (i64, i64), v: (i64, i64)| (u.0 + v.0, u.1 + v.1);
    // λ - μ in the nonnegative span of e1 - e2 and 2 e2
    let below = |mu: (i64, i64)| {
        let (d1, d2) = (lambda.0 - mu.0, lambda.1 - mu.1);
        d1 >= 0 && (d1 + d2) >= 0 && (d1 + d2) % 2 == 0
    };
    let is_weight = |mu: (i64, i64)| {
        let (x, y) = (mu.0.abs(), mu.1.abs());
        below((x.max(y), x.min(y)))
    };
    let height = |mu: (i64, i64)| {
        let (d1, d2) = (lambda.0 - mu.0, lambda.1 - mu.1);
        d1 + (d1 + d2) / 2
    };
    let r = lambda.0;
    let mut weights: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&mu| is_weight(mu))
        .collect();
    weights.sort_by_key(|&mu| height(mu));
    let norm = dot(add(lambda, rho), add(lambda, rho));
    let mut mult: HashMap<(i64, i64), i64> = HashMap::new();
    for mu in weights {
        if mu == lambda {
            mult.insert(mu, 1);
            continue;
        }
        let mut num = 0;
        for &alpha in &positive {
            let mut k = 1;
            loop {
                let nu = (mu.0 + k * alpha.0, mu.1 + k * alpha.1);
                match mult.get(&nu) {
                    Some(&m) => num += m * dot(nu, alpha),
                    None if nu.0.abs() > r || nu.1.abs() > r => break,
                    None => {}
                }
                k += 1;
            }
        }
        let den = norm - dot(add(mu, rho), add(mu, rho));
        assert!(
            den > 0 && (2 * num) % den == 0,
            "Freudenthal step at {mu:?}"
        );
        mult.insert(mu, 2 * num / den);
    }
    mult.values().sum()
}

fn path_labels(g: &DecoratedCrystal) -> Result<Vec<(Color, u8)>, String> {
    let mut out = Vec::new();
    let mut u = g.graph.source();
    loop {
        let steps: Vec<Op> = [Op::F1, Op::F2]
            .into_iter()
            .filter(|&op| g.graph.succ(u, op).is_some())
            .collect();
        match steps.as_slice() {
            [] => return Ok(out),
            [op] => {
                out.push((op.color(), g.label_out(u, *op).unwrap().halves()));
                u = g.graph.succ(u, *op).unwrap();
            }
            _ => return Err(format!("vertex {u} has two outgoing colors")),
        }
    }
}

fn criterion_1() -> Outcome {
    let b10 = generate_decorated(&bounds(1, 0)).map_err(|e| e.to_string())?;
    let b02 = generate_decorated(&bounds(0, 2)).map_err(|e| e.to_string())?;
    let mut fails = Vec::new();
    let want10 = vec![(Color::Red, 2), (Color::Green, 1), (Color::Red, 0)];
    let got10 = path_labels(&b10)?;
    if b10.graph.len() != 4 || got10 != want10 {
        fails.push(format!(
            "B(1,0): {} vertices, path {got10:?}",
            b10.graph.len()
        ));
    }
    // green 1, red 1, red 0, green 0
    let want02 = vec![
        (Color::Green, 2),
        (Color::Red, 2),
        (Color::Red, 0),
        (Color::Green, 0),
    ];
    let got02 = path_labels(&b02)?;
    if b02.graph.len() != 5 || got02 != want02 {
        fails.push(format!(
            "B(0,2): {} vertices, path {got02:?}, expected {want02:?}",
            b02.graph.len()
        ));
    }
    if fails.is_empty() {
        Ok(vec![])
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_2() -> Outcome {
    for (h, b) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
        let f = freudenthal_dimension(h, b);
        let w = weyl_dimension(h, 2 * b);
        if f != w {
            return Err(format!(
                "oracle mismatch at ({h},{b}): Freudenthal {f}, Weyl {w}"
            ));
        }
    }
    for (h, a) in range() {
        let n = generate(&bounds(h, a)).map_err(|e| e.to_string())?.len() as i64;
        let w = weyl_dimension(h, a);
        let f = freudenthal_dimension(h, a / 2);
        if n != w || n != f {
            return Err(format!(
                "B({h},{a}): {n} vertices, Weyl {w}, Freudenthal {f}"
            ));
        }
    }
    Ok(vec![])
}

fn criterion_3() -> Outcome {
    for (h, a) in range() {
        let b = bounds(h, a);
        let reach: BTreeSet<_> = generate(&b)
            .map_err(|e| e.to_string())?
            .vertices
            .into_iter()
            .collect();
        let listed = enumerate_interval(&b).map_err(|e| e.to_string())?;
        if reach != listed {
            return Err(format!(
                "B({h},{a}): {} reachable, {} enumerated",
                reach.len(),
                listed.len()
            ));
        }
    }
    Ok(vec![])
}

fn mutants(doc: &GraphDocument) -> Vec<(String, GraphDocument)> {
    let mut out = Vec::new();
    for k in 0..doc.edges.len() {
        let label = doc.edges[k].label_halves;
        for l in (0..=2).filter(|&l| Some(l) != label) {
            let mut m = doc.clone();
            m.edges[k].label_halves = Some(l);
            out.push((format!("edge {k} label -> {l}"), m));
        }
        let mut m = doc.clone();
        m.edges.remove(k);
        out.push((format!("edge {k} deleted"), m));
        for v in doc
            .vertices
            .iter()
            .map(|v| v.id)
            .filter(|&v| v != doc.edges[k].dst)
        {
            let mut m = doc.clone();
            m.edges[k].dst = v;
            out.push((format!("edge {k} redirected to {v}"), m));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    for (h, a) in range() {
        let g = generate_decorated(&bounds(h, a)).map_err(|e| e.to_string())?;
        let rep =
            verify_all(&to_colored(&g), VerifyOptions::default()).map_err(|e| e.to_string())?;
        if let Some(v) = rep.violations.first() {
            return Err(format!("B({h},{a}) fails {}: {}", v.axiom, v.message));
        }
    }
    let mut total = 0;
    for (h, a) in [(1, 2), (2, 2), (2, 4)] {
        let doc = GraphDocument::from_crystal(&generate_decorated(&bounds(h, a)).unwrap());
        for (what, m) in mutants(&doc) {
            let (report, code) = verify_document(&m, "ALL", false)
                .map_err(|e| format!("B({h},{a}) {what}: {}", e.0))?;
            if code != EXIT_VIOLATION || report.violations.is_empty() {
                return Err(format!("B({h},{a}) {what}: exit {code}"));
            }
            total += 1;
        }
    }
    Ok(vec![format!("{total} mutants rejected")])
}

fn criterion_5() -> Outcome {
    for (h, a) in range() {
        let g = generate_decorated(&bounds(h, a)).map_err(|e| e.to_string())?;
        let s = contract(&to_colored(&g))
            .map_err(|e| format!("B({h},{a}): {e}"))?
            .sky;
        let model = sail_model(h as u32, a as u32).map_err(|e| e.to_string())?;
        let iso = sky::iso(&s, &model).map_err(|e| e.to_string())?;
        if !iso.isomorphic {
            return Err(format!("B({h},{a}): {}", iso.reason.unwrap_or_default()));
        }
        let rep = check_lemma1(&s);
        if let Some(v) = rep.violations.first() {
            return Err(format!("B({h},{a}) sky fails {}: {}", v.axiom, v.message));
        }
        if s.expansion_count() != g.graph.len() as u64 {
            return Err(format!(
                "B({h},{a}): expansion count {} vs {}",
                s.expansion_count(),
                g.graph.len()
            ));
        }
    }
    Ok(vec![])
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let mut odd_c1 = 0;
    for (h, a) in range() {
        let b = bounds(h, a);
        let g = generate(&b).map_err(|e| e.to_string())?;
        let mut first_max = [i64::MIN; 4];
        let mut second_max = [i64::MIN; 4];
        for f in &g.vertices {
            let c = coords::coords(f, &b).map_err(|e| e.to_string())?;
            let r = check_coords(f, &c, &b).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("B({h},{a}) at {f}: {:?}", r.failures()));
            }
            let cases = coords_by_case(f, &b).map_err(|e| e.to_string())?;
            if cases.iter().any(|(p, _)| *p == EqualityPattern::C1) && (f.a - f.b) % 2 != 0 {
                odd_c1 += 1;
            }
            for (acc, quad) in [(&mut first_max, c.first), (&mut second_max, c.second)] {
                for (slot, v) in acc.iter_mut().zip(quad) {
                    *slot = (*slot).max(v);
                }
            }
        }
        // (n, m, p, q) bounded by (H, H + A/2, A + H, A/2), and the same for the primed tuple
        let want = [h, h + a / 2, a + h, a / 2];
        if first_max != want || second_max != want {
            fails.push(format!(
                "B({h},{a}) maxima (n,m,p,q) {first_max:?}, (n',m',p',q') {second_max:?}, expected {want:?}"
            ));
        }
    }
    let note = format!("case c1 with odd a-b: {odd_c1} vertices");
    if fails.is_empty() {
        Ok(vec![note])
    } else {
        Err(format!(
            "{} of {} intervals differ, first: {}; {note}",
            fails.len(),
            range().count(),
            fails[0]
        ))
    }
}

fn criterion_7() -> Outcome {
    for (h, a) in range() {
        let b = bounds(h, a);
        let g = generate(&b).map_err(|e| e.to_string())?;
        for f in &g.vertices {
            let pairs: [(Step, Step); 2] = [(apply_f1, apply_e1), (apply_f2, apply_e2)];
            for (fwd, back) in pairs {
                if let Some(next) = fwd(f, &b).map_err(|e| e.to_string())? {
                    let prev = back(&next, &b).map_err(|e| e.to_string())?;
                    if prev != Some(*f) {
                        return Err(format!("B({h},{a}): e(f({f})) = {prev:?}"));
                    }
                }
                if let Some(prev) = back(f, &b).map_err(|e| e.to_string())? {
                    if fwd(&prev, &b).map_err(|e| e.to_string())? != Some(*f) {
                        return Err(format!("B({h},{a}): f(e({f})) differs"));
                    }
                }
            }
            if star(&star(f)) != *f || star_in_interval(&star_in_interval(f, &b), &b) != *f {
                return Err(format!("star is not an involution at {f}"));
            }
        }
        reversal_isomorphism(&g).map_err(|e| format!("B({h},{a}): {e}"))?;
        let fat = fat_vertices(&g).len() as i64;
        if fat != (h + 1) * (a / 2 + 1) {
            return Err(format!("B({h},{a}): {fat} fat vertices"));
        }
    }
    Ok(vec![])
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    for h in 0..=3 {
        for a in (0..=6).step_by(2) {
            let size = |hh, aa| generate(&bounds(hh, aa)).unwrap();
            let (left, right) = (size(h, 0), size(0, a));
            let (lf, rf) = (fat_vertices(&left).len(), fat_vertices(&right).len());
            let expected = left.len() * rf + right.len() * lf - lf * rf;
            let e = embed_product(h, a).map_err(|e| format!("({h},{a}): {e}"))?;
            if e.glued_vertices != expected || e.image.len() != expected {
                return Err(format!(
                    "({h},{a}): glued {} image {} expected {expected}",
                    e.glued_vertices,
                    e.image.len()
                ));
            }
            if (h, a) == (1, 2) {
                notes.push(format!(
                    "{} into {} at (1,2)",
                    e.glued_vertices, e.target_vertices
                ));
                if (e.glued_vertices, e.target_vertices) != (14, 16) {
                    return Err("(1,2) is not 14 into 16".into());
                }
            }
        }
    }
    Ok(notes)
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "fundamental crystals", 1, criterion_1),
        (2, "dimension counts", 10, criterion_2),
        (3, "enumeration equals reachability", 30, criterion_3),
        (4, "axiom suite and mutations", 60, criterion_4),
        (5, "sky equivalence", 60, criterion_5),
        (6, "canonical coordinates", 30, criterion_6),
        (7, "inverses and involution", 60, criterion_7),
        (8, "inclusion", 30, criterion_8),
    ];
    let mut failed = 0;
    for (n, name, bound, run) in criteria {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if result.is_ok() && took > Duration::from_secs(bound) {
            result = Err(format!("took {:.2} s, bound {bound} s", took.as_secs_f64()));
        }
        match result {
            Ok(notes) => {
                let extra = if notes.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", notes.join("; "))
                };
                println!(
                    "criterion {n} ({name}): PASS in {:.2} s{extra}",
                    took.as_secs_f64()
                );
            }
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {n} ({name}): FAIL in {:.2} s: {msg}",
                    took.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}
