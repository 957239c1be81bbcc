//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torus_morse::algebra::{
    enumerate_truncated, identity, invert, multiply, random_element, GroupElement, GroupExpr, LeafTriple,
};
use torus_morse::deformation::{
    build_diagram_f0, build_diagram_f1, instantiate_and_verify, theta_splitting_check, BlockShape, LeafAssignments,
};
use torus_morse::field::{detect_translation_symmetries, find_critical_points, TrigFieldSpec, TrigTerm};
use torus_morse::reeb::{build_reeb_graph, classify, ClassOverrides, MorseClassification};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{detail}; took {took:.2?}, limit {limit:?}"));
    }
    Ok(format!("{detail} in {took:.2?}"))
}

/// `(g, a)` acts on `Z_n x Z_p` by `(i, x) -> (i + a, x + g_i)`.
fn perm_of(g: &[u64], a: u64, n: u64, p: u64) -> Vec<usize> {
    (0..n * p)
        .map(|pt| {
            let (i, x) = (pt / p, pt % p);
            let (j, y) = ((i + a) % n, (x + g[i as usize]) % p);
            (j * p + y) as usize
        })
        .collect()
}

fn wreath_oracle() -> Outcome {
    let mut products = 0;
    for p in [2u64, 3] {
        for n in [2u64, 3] {
            let expr = GroupExpr::wr_cyc(GroupExpr::Cyclic(p), n as usize);
            let mut elements = Vec::new();
            let coords = p.pow(n as u32);
            for code in 0..coords {
                let g: Vec<u64> = (0..n).map(|i| code / p.pow(i as u32) % p).collect();
                for a in 0..n {
                    elements.push((g.clone(), a));
                }
            }
            let el = |(g, a): &(Vec<u64>, u64)| GroupElement::Wreath {
                base: g.iter().map(|&v| GroupElement::Residue(v)).collect(),
                outer: vec![*a as i64],
            };
            let perms: Vec<Vec<usize>> = elements.iter().map(|(g, a)| perm_of(g, *a, n, p)).collect();
            let by_perm: HashMap<&Vec<usize>, usize> = perms.iter().enumerate().map(|(i, q)| (q, i)).collect();
            if by_perm.len() != elements.len() {
                return Err(format!("oracle action is not faithful for Z_{p}, n={n}"));
            }
            for (i, x) in elements.iter().enumerate() {
                for (j, y) in elements.iter().enumerate() {
                    // x * y acts as "apply y, then x"
                    let composed: Vec<usize> = (0..perms[j].len()).map(|pt| perms[i][perms[j][pt]]).collect();
                    let expected = el(&elements[by_perm[&composed]]);
                    let got = multiply(&expr, &el(x), &el(y)).map_err(|e| e.to_string())?;
                    if got != expected {
                        return Err(format!("{} * {} = {got}, oracle says {expected}", el(x), el(y)));
                    }
                    products += 1;
                }
                let mut inverse = vec![0; perms[i].len()];
                for (pt, &img) in perms[i].iter().enumerate() {
                    inverse[img] = pt;
                }
                let expected = el(&elements[by_perm[&inverse]]);
                let got = invert(&expr, &el(x)).map_err(|e| e.to_string())?;
                if got != expected {
                    return Err(format!("inverse of {} = {got}, oracle says {expected}", el(x)));
                }
            }
        }
    }
    Ok(format!("{products} products and all inverses match"))
}

fn orders() -> Outcome {
    let a = enumerate_truncated(&GroupExpr::wr_cyc(GroupExpr::Cyclic(2), 3), 1).map_err(|e| e.to_string())?;
    let b = enumerate_truncated(&GroupExpr::wr_cyc_pair(GroupExpr::Cyclic(2), 2, 1), 1).map_err(|e| e.to_string())?;
    if (a.len(), b.len()) != (24, 8) {
        return Err(format!("|wrC(Z_2;3)| = {}, |wrCP(Z_2;2,1)| = {}", a.len(), b.len()));
    }
    Ok("|wrC(Z_2;3)| = 24, |wrCP(Z_2;2,1)| = 8".into())
}

fn verify_all(diagrams: Vec<(String, torus_morse::deformation::Diagram)>) -> Outcome {
    let leaves = LeafAssignments::default();
    let mut checks = 0;
    for (name, d) in diagrams {
        let v = instantiate_and_verify(&d, &leaves, 4).map_err(|e| format!("{name}: {e}"))?;
        if !v.all_pass() {
            return Err(format!("{name}: failed {:?}", v.failures()));
        }
        checks += v.checks.len();
    }
    Ok(format!("{checks} checks pass"))
}

fn f0_diagrams() -> Outcome {
    let shapes = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 2, 2)];
    let diagrams = shapes
        .iter()
        .map(|&(n, m, r)| Ok((format!("F0{:?}", (n, m, r)), build_diagram_f0(n, m, r, None)?)))
        .collect::<Result<Vec<_>, torus_morse::deformation::DeformationError>>()
        .map_err(|e| e.to_string())?;
    verify_all(diagrams)
}

fn f1_diagrams() -> Outcome {
    let mut diagrams = Vec::new();
    for n in [1, 2] {
        for m in [1, 2] {
            let d = build_diagram_f1(n, &[BlockShape { c: 1, m }], None).map_err(|e| e.to_string())?;
            diagrams.push((format!("F1(n={n}, m={m})"), d));
        }
    }
    verify_all(diagrams)
}

fn theta_splitting() -> Outcome {
    let mut cases = 0;
    for n in [1, 2] {
        for m in [1, 2] {
            for rank in [0, 1] {
                let r = theta_splitting_check(n, &[BlockShape { c: 1, m }], rank, 4).map_err(|e| e.to_string())?;
                if !r.passes() {
                    return Err(format!("n={n}, m={m}, rank {rank}: {r:?}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} cases: generator primitive, rank drops by one, quotient torsion-free"
    ))
}

fn cos(a: f64, p: i64, q: i64) -> TrigTerm {
    TrigTerm::new(a, p, q, 0.0)
}

struct PipelineRun {
    values: Vec<f64>,
    shape: (usize, usize, usize),
    class: MorseClassification,
}

fn pipeline(terms: Vec<TrigTerm>, grid: usize) -> Result<PipelineRun, String> {
    let spec = TrigFieldSpec::new(terms).map_err(|e| e.to_string())?;
    let cps = find_critical_points(&spec, grid, 1e-9).map_err(|e| e.to_string())?;
    let graph = build_reeb_graph(&spec, &cps, grid).map_err(|e| e.to_string())?;
    let sym = detect_translation_symmetries(&spec, 8, 1e-9).map_err(|e| e.to_string())?;
    let class = classify(&graph, &sym, &ClassOverrides::default()).map_err(|e| e.to_string())?;
    Ok(PipelineRun {
        values: cps.iter().map(|c| c.value).collect(),
        shape: (graph.vertices.len(), graph.edges.len(), graph.betti1),
        class,
    })
}

fn same_run(a: &PipelineRun, b: &PipelineRun) -> bool {
    a.shape == b.shape
        && a.values.len() == b.values.len()
        && a.values.iter().zip(&b.values).all(|(x, y)| (x - y).abs() < 1e-6)
        && a.class.name() == b.class.name()
}

fn pipeline_tilted() -> Outcome {
    let terms = vec![cos(1.0, 1, 0), cos(0.5, 0, 1)];
    let run = pipeline(terms.clone(), 128)?;
    let mut values = run.values.clone();
    values.sort_by(f64::total_cmp);
    let expected = [-1.5, -0.5, 0.5, 1.5];
    if values.len() != 4 || values.iter().zip(expected).any(|(v, e)| (v - e).abs() > 1e-3) {
        return Err(format!("critical values {values:?}"));
    }
    if run.shape != (4, 4, 1) || run.class.name() != "F1" {
        return Err(format!("graph {:?}, class {}", run.shape, run.class.name()));
    }
    if !same_run(&run, &pipeline(terms, 256)?) {
        return Err("result changes when the grid is doubled".into());
    }
    Ok("4 critical values, 4V/4E, betti1=1, F1, stable at grid 256".into())
}

fn pipeline_egg_carton() -> Outcome {
    // sin(2 pi x) sin(2 pi y)
    let terms = vec![cos(0.5, 1, -1), cos(-0.5, 1, 1)];
    let run = pipeline(terms.clone(), 128)?;
    let nmr = match &run.class {
        MorseClassification::F0 { n, m, r, .. } => (*n, *m, *r),
        other => return Err(format!("class {}", other.name())),
    };
    if run.values.len() != 8 || run.shape.2 != 0 || nmr != (1, 2, 2) {
        return Err(format!(
            "{} critical points, graph {:?}, (n,m,r) = {nmr:?}",
            run.values.len(),
            run.shape
        ));
    }
    if !same_run(&run, &pipeline(terms, 256)?) {
        return Err("result changes when the grid is doubled".into());
    }
    Ok("8 critical points, betti1=0, F0 (1,2,2), stable at grid 256".into())
}

fn centrality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let z4 = GroupExpr::Cyclic(4);
    let mut trials = 0;
    for (n, m) in [(2usize, 1usize), (2, 2)] {
        let nm = n * m;
        let expr = GroupExpr::wr_z2(z4.clone(), n, nm);
        let e = vec![GroupElement::Residue(0); n * nm];
        let z = [
            GroupElement::Wreath {
                base: e.clone(),
                outer: vec![n as i64, 0],
            },
            GroupElement::Wreath {
                base: e,
                outer: vec![0, nm as i64],
            },
        ];
        for _ in 0..500 {
            let x = random_element(&expr, &mut rng, 4).map_err(|e| e.to_string())?;
            for zi in &z {
                let (a, b) = (
                    multiply(&expr, zi, &x).map_err(|e| e.to_string())?,
                    multiply(&expr, &x, zi).map_err(|e| e.to_string())?,
                );
                if a != b {
                    return Err(format!("{zi} and {x} do not commute in {expr}"));
                }
            }
            trials += 1;
        }
    }
    let leaves = LeafAssignments::uniform(LeafTriple::default());
    for n in [1, 2] {
        for m in [1, 2] {
            let d = build_diagram_f1(n, &[BlockShape { c: 1, m }], Some(&leaves)).map_err(|e| e.to_string())?;
            let GroupExpr::CentralQuotient { base, generator } = d.node("S") else {
                return Err("S node is not a quotient".into());
            };
            if *generator == identity(base) {
                return Err("Garside image is trivial".into());
            }
            for _ in 0..500 {
                let x = random_element(base, &mut rng, 4).map_err(|e| e.to_string())?;
                let (a, b) = (
                    multiply(base, generator, &x).map_err(|e| e.to_string())?,
                    multiply(base, &x, generator).map_err(|e| e.to_string())?,
                );
                if a != b {
                    return Err(format!("Garside image {generator} and {x} do not commute"));
                }
                trials += 1;
            }
        }
    }
    Ok(format!("{trials} random commutators trivial"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "1 wreath arithmetic matches the permutation oracle",
            Duration::from_secs(1),
            wreath_oracle,
        ),
        ("2 wreath product orders", Duration::from_secs(1), orders),
        ("3 tree diagrams verify", Duration::from_secs(60), f0_diagrams),
        ("4 circuit diagrams verify", Duration::from_secs(60), f1_diagrams),
        (
            "5 Garside generator splits off",
            Duration::from_secs(1),
            theta_splitting,
        ),
        (
            "6a pipeline on cos(2pi x) + 0.5 cos(2pi y)",
            Duration::from_secs(10),
            pipeline_tilted,
        ),
        (
            "6b pipeline on sin(2pi x) sin(2pi y)",
            Duration::from_secs(10),
            pipeline_egg_carton,
        ),
        (
            "7 lattice shifts and Garside image are central",
            Duration::from_secs(5),
            centrality,
        ),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        match timed(limit, f) {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  criterion {name}: {reason}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
