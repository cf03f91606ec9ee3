use arrtower::complex::order_complex_with;
use arrtower::connectivity::{self, Connectivity, ConnectivityReport};
use arrtower::cube::{verify_totalcokernel_theorem, TotalCokernelReport};
use arrtower::{par, Engine, Error, GradedGroup, RLattice, Result};
use serde_json::{json, Value};

use crate::args::{CohomologyArgs, ConnectivityArgs, CubeArgs, LatticeArgs, Values};
use crate::output::{self, table, to_json, torsion_text, verdict, Output};

fn triples(k: &Values, r: &Values, n: &Values) -> Result<Vec<(usize, usize, u64)>> {
    let mut out = Vec::new();
    for &k in &k.0 {
        for &r in &r.0 {
            for &n in &n.0 {
                out.push((to_usize(k, "k")?, to_usize(r, "r")?, n));
            }
        }
    }
    Ok(out)
}

fn to_usize(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Usage(format!("{what} = {v} is out of range")))
}

/// One object for a single query, an array otherwise.
fn one_or_many(mut items: Vec<Value>) -> Value {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Value::Array(items)
    }
}

fn group_rows(g: &GradedGroup) -> Vec<Vec<String>> {
    g.iter().map(|(d, grp)| vec![d.to_string(), grp.to_string()]).collect()
}

pub fn cohomology(engine: &Engine, args: &CohomologyArgs) -> Result<Output> {
    let queries = triples(&args.k, &args.r, &args.n)?;
    let mut text = String::new();
    let mut items = Vec::new();
    let mut rows = Vec::new();
    for (i, &(k, r, n)) in queries.iter().enumerate() {
        let ledger = engine.contribution_ledger(k, r, n)?;
        let reduced = ledger.total();
        let shown = if args.unreduced { reduced.unreduced() } else { reduced.clone() };

        if i > 0 {
            text.push('\n');
        }
        let kind = if args.unreduced { "unreduced" } else { "reduced" };
        text.push_str(&format!("H^*(rConf(k, R^n)), k = {k}, r = {r}, n = {n} ({kind})\n"));
        if shown.is_zero() {
            text.push_str("all groups vanish\n");
        } else {
            text.push_str(&table(&["degree", "group"], &group_rows(&shown)));
        }
        if args.ledger {
            let entries: Vec<Vec<String>> = ledger
                .entries
                .iter()
                .map(|e| {
                    vec![
                        e.x.to_text(),
                        e.codim.to_string(),
                        e.interval_homology.to_string(),
                        e.contributions.to_string(),
                    ]
                })
                .collect();
            text.push('\n');
            text.push_str(&table(&["x", "codim", "H_*(0,x)", "contributes"], &entries));
        }

        for (d, g) in shown.iter() {
            rows.push(vec![
                k.to_string(),
                r.to_string(),
                n.to_string(),
                d.to_string(),
                g.rank.to_string(),
                torsion_text(&shown, d),
            ]);
        }
        let mut obj = json!({
            "k": k,
            "r": r,
            "n": n,
            "reduced": to_json(&reduced),
            "ledger": to_json(&ledger.entries),
        });
        if args.unreduced {
            obj["unreduced"] = to_json(&shown);
        }
        items.push(obj);
    }
    Ok(Output {
        table: text,
        json: one_or_many(items),
        csv_header: vec!["k", "r", "n", "degree", "rank", "torsion"],
        csv_rows: rows,
        ok: true,
    })
}

pub fn lattice(engine: &Engine, args: &LatticeArgs) -> Result<Output> {
    let (k, r) = (args.k, args.r);
    let lat = RLattice::with_limits(k, r, engine.limits())?;
    let bottom = lat.bottom().clone();
    let mut element_rows = Vec::new();
    let mut elements = Vec::new();
    let mut csv_rows = Vec::new();
    for (i, x) in lat.elements().iter().enumerate() {
        let h = if x == &bottom { None } else { Some(engine.interval_homology(x, r)?) };
        let h_text = h.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
        element_rows.push(vec![
            i.to_string(),
            x.to_text(),
            x.block_count().to_string(),
            h_text.clone(),
        ]);
        csv_rows.push(vec![
            i.to_string(),
            x.to_text(),
            x.block_count().to_string(),
            (!x.has_singleton()).to_string(),
            h_text,
        ]);
        elements.push(json!({
            "index": i,
            "partition": x.to_text(),
            "blocks": x.blocks(),
            "block_count": x.block_count(),
            "singleton_free": !x.has_singleton(),
            "interval_homology": h.as_ref().map(to_json),
        }));
    }
    let covers = lat.cover_relations();
    let cover_rows: Vec<Vec<String>> = covers
        .iter()
        .map(|&(i, j)| vec![lat.elements()[i].to_text(), lat.elements()[j].to_text()])
        .collect();

    let mut text = format!("Π_{{{k},{r}}}: {} elements, {} cover relations\n\n", lat.len(), covers.len());
    text.push_str(&table(&["#", "x", "blocks", "H_*(0,x)"], &element_rows));
    text.push('\n');
    text.push_str(&table(&["lower", "covered by"], &cover_rows));

    let mut proper = Value::Null;
    let mut complex_json = Value::Null;
    if let Some(top) = lat.top().filter(|t| **t != bottom) {
        let mid = lat.open_interval(&bottom, top)?;
        match order_complex_with(&mid, engine.limits()) {
            Ok(c) => {
                let h = engine.interval_homology(top, r)?;
                text.push_str(&format!(
                    "\norder complex of (0,1): f = {:?}, reduced Euler characteristic {}, H_* = {}\n",
                    c.face_vector(),
                    c.reduced_euler_characteristic(),
                    h
                ));
                proper = json!({
                    "face_vector": c.face_vector(),
                    "reduced_euler_characteristic": c.reduced_euler_characteristic(),
                    "homology": to_json(&h),
                });
                if args.complex {
                    complex_json = c.to_json();
                    text.push_str(&complex_text(&c));
                }
            }
            Err(e) if e.is_guard() && !args.complex => {
                text.push_str(&format!("\norder complex of (0,1) not built: {e}\n"));
            }
            Err(e) => return Err(e),
        }
    }

    let mut obj = json!({
        "k": k,
        "r": r,
        "elements": elements,
        "covers": covers.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        "proper_part": proper,
    });
    if args.complex {
        obj["complex"] = complex_json;
    }
    Ok(Output {
        table: text,
        json: obj,
        csv_header: vec!["index", "partition", "block_count", "singleton_free", "interval_homology"],
        csv_rows,
        ok: true,
    })
}

fn complex_text(c: &arrtower::complex::SimplicialComplex) -> String {
    let mut s = String::from("\nvertices:\n");
    for (i, v) in c.vertices().iter().enumerate() {
        s.push_str(&format!("  {i}: {v}\n"));
    }
    for d in 0..=c.dimension().max(-1) {
        let faces = c.faces(d as usize).expect("dimension bounds the face lists");
        s.push_str(&format!("faces of dimension {d}:\n"));
        for f in faces.iter() {
            let f: Vec<String> = f.iter().map(ToString::to_string).collect();
            s.push_str(&format!("  [{}]\n", f.join(",")));
        }
    }
    s
}

pub fn cube(engine: &Engine, args: &CubeArgs) -> Result<Output> {
    let queries = triples(&args.k, &args.r, &args.n)?;
    let reports: Vec<TotalCokernelReport> = queries
        .iter()
        .map(|&(k, r, n)| verify_totalcokernel_theorem(engine, k, r, n))
        .collect::<Result<_>>()?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, rep) in reports.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&format!(
            "restriction cube k = {}, r = {}, n = {}: {}\n",
            rep.k,
            rep.r,
            rep.n,
            verdict(rep.pass)
        ));
        let vrows: Vec<Vec<String>> = rep
            .cube
            .vertices
            .iter()
            .map(|v| vec![format!("{:?}", v.subset), v.ranks.to_string()])
            .collect();
        text.push_str(&table(&["removed", "H^*"], &vrows));
        text.push_str(&format!("total cokernel:        {}\n", rep.total_cokernel));
        text.push_str(&format!("singleton-free sum:    {}\n", rep.singleton_free_sum));
        text.push_str(&format!("edges split injective: {}\n", rep.split_injective));
        text.push_str(&format!("summands exact:        {}\n", rep.summand_exact));
        text.push_str(&format!("vertices match:        {}\n", rep.vertices_match));
        for d in &rep.differences {
            text.push_str(&format!("difference in degree {d}\n"));
        }
        let degrees: std::collections::BTreeSet<i64> =
            rep.total_cokernel.degrees().chain(rep.singleton_free_sum.degrees()).collect();
        for d in degrees {
            rows.push(vec![
                rep.k.to_string(),
                rep.r.to_string(),
                rep.n.to_string(),
                d.to_string(),
                rep.total_cokernel.get(d).to_string(),
                rep.singleton_free_sum.get(d).to_string(),
                verdict(rep.pass).to_string(),
            ]);
        }
    }
    let ok = reports.iter().all(|r| r.pass);
    Ok(Output {
        table: text,
        json: one_or_many(reports.iter().map(to_json).collect()),
        csv_header: vec!["k", "r", "n", "degree", "total_cokernel", "singleton_free_sum", "verdict"],
        csv_rows: rows,
        ok,
    })
}

const GRID_K: (u64, u64) = (1, 9);
const GRID_R: (u64, u64) = (2, 5);
const GRID_N: (u64, u64) = (1, 5);
const GRID_M: (u64, u64) = (0, 3);

fn pick(v: &Option<Values>, grid: bool, range: (u64, u64), what: &str) -> Result<Vec<u64>> {
    match (v, grid) {
        (Some(v), _) => Ok(v.0.clone()),
        (None, true) => Ok((range.0..=range.1).collect()),
        (None, false) if what == "m" => Ok(vec![0]),
        (None, false) => Err(Error::Usage(format!("--{what} is required unless --grid is given"))),
    }
}

pub fn connectivity(engine: &Engine, args: &ConnectivityArgs) -> Result<Output> {
    let ks = pick(&args.k, args.grid, GRID_K, "k")?;
    let rs = pick(&args.r, args.grid, GRID_R, "r")?;
    let ns = pick(&args.n, args.grid, GRID_N, "n")?;
    let ms = pick(&args.m, args.grid, GRID_M, "m")?;
    let mut queries = Vec::new();
    for &k in &ks {
        for &r in &rs {
            for &n in &ns {
                for &m in &ms {
                    queries.push((to_usize(k, "k")?, to_usize(r, "r")?, n, m));
                }
            }
        }
    }
    if args.homological {
        for &(k, _, _, _) in &queries {
            engine.limits().check_k(k)?;
        }
    }
    let reports = par::try_map(engine.execution(), &queries, |&(k, r, n, m)| {
        let mut rep = connectivity::connectivity_report(k, r, n, m, None)?;
        if args.homological {
            rep.homological_minimal_degree = Some(connectivity::homological_minimal_degree(engine, k, r, n)?);
        }
        Ok::<_, Error>(rep)
    })?;

    let mut header = vec!["k", "r", "n", "m", "regime", "cart", "cart(min)"];
    if args.homological {
        header.push("tfiber deg");
    }
    header.extend(["layer", "cart-mk", "converges", "comparison", "check"]);
    let rows: Vec<Vec<String>> = reports.iter().map(|rep| row(rep, args.homological)).collect();
    let ok = reports.iter().all(ConnectivityReport::consistent);
    let mut text = table(&header, &rows);
    let notices: std::collections::BTreeSet<&str> =
        reports.iter().filter_map(|r| r.comparison_notice.as_deref()).collect();
    for n in notices {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push_str(&format!("{} rows, consistency {}\n", reports.len(), verdict(ok)));
    Ok(Output {
        table: text,
        json: json!({ "rows": reports.iter().map(to_json).collect::<Vec<_>>(), "consistent": ok }),
        csv_header: header,
        csv_rows: rows,
        ok,
    })
}

fn row(rep: &ConnectivityReport, homological: bool) -> Vec<String> {
    let conv = rep
        .intrinsic_convergence
        .as_ref()
        .map_or_else(|| "-".to_string(), |c| if c.converges { "yes" } else { "no" }.to_string());
    let comparison = rep
        .comparison
        .as_ref()
        .map_or_else(|| "-".to_string(), |c| c.classification.to_string());
    let mut out = vec![
        rep.k.to_string(),
        rep.r.to_string(),
        rep.n.to_string(),
        rep.m.to_string(),
        rep.regime.label().to_string(),
        rep.cartesian_closed_form.to_string(),
        rep.cartesian_bruteforce.to_string(),
    ];
    if homological {
        out.push(rep.homological_minimal_degree.map_or("-".into(), |c: Connectivity| c.to_string()));
    }
    out.extend([
        rep.layer_connectivity.to_string(),
        rep.layer_connectivity_via_cartesian.to_string(),
        conv,
        comparison,
        verdict(rep.consistent()).to_string(),
    ]);
    out
}

/// Shared by `verify`: renders check results.
pub fn checks_output(results: &[crate::suite::CheckResult]) -> Output {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|c| vec![c.id.clone(), verdict(c.pass).to_string(), c.detail.clone()])
        .collect();
    let ok = results.iter().all(|c| c.pass);
    let mut text = table(&["check", "result", "detail"], &rows);
    text.push_str(&format!(
        "{} of {} checks passed\n",
        results.iter().filter(|c| c.pass).count(),
        results.len()
    ));
    Output {
        table: text,
        json: json!({ "checks": results.iter().map(output::to_json).collect::<Vec<_>>(), "pass": ok }),
        csv_header: vec!["check", "result", "detail"],
        csv_rows: rows,
        ok,
    }
}
