use std::fmt::Write as _;
use std::path::Path;

use hgs_core::hgs::{
    analyze_catalogue, analyze_parallel, build_catalogue_with, find_extension_prime,
    iterate_family, quotient_pair, summarize, Catalogue, CatalogueOptions, DegreeSummary,
    EntryAnalysis, ExtendedEntry, NoHgsWitness, ParallelReport,
};
use hgs_core::isomorphism::PairData;
use hgs_core::pqtheory::{verify_pq_with, PqParameters, PqReport};
use hgs_core::{Error, PermGroup};
use serde::Serialize;
use serde_json::json;

use crate::fixtures::check_or_seed;
use crate::pairfile::read_pair;
use crate::{Format, GlobalOpts};

/// Largest prime tried by `extend --auto-prime`.
const PRIME_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } | Error::Io(_) | Error::Cache(_) => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn options(g: &GlobalOpts) -> CatalogueOptions {
    CatalogueOptions {
        cache_dir: g.cache_dir.clone(),
        resume: g.resume,
        max_order: g.max_order,
    }
}

fn catalogue(g: &GlobalOpts, n: u64) -> Result<Catalogue, CliError> {
    Ok(build_catalogue_with(n, &options(g))?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::resource(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn cycles(g: &PermGroup) -> Vec<String> {
    g.generators()
        .iter()
        .map(|p| p.to_cycle_string(false))
        .collect()
}

fn report_fixtures(mismatches: &[String]) -> bool {
    for m in mismatches {
        eprintln!("fixture mismatch: {m}");
    }
    mismatches.is_empty()
}

pub fn catalog(g: &GlobalOpts, degrees: &[u64]) -> Result<bool, CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for &n in degrees {
        let cat = catalogue(g, n)?;
        if let Some(path) = &g.seed_fixtures {
            ok &= report_fixtures(&check_or_seed(path, n, cat.len(), None)?);
        }
        let per_type: Vec<(String, usize)> = cat
            .types
            .iter()
            .map(|t| (t.clone(), cat.entries_of_type(t).count()))
            .collect();
        rows.push((n, cat.len(), per_type));
    }
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            println!("Degree,TransClasses");
            for (n, total, _) in &rows {
                println!("{n},{total}");
            }
        }
        Format::Text => {
            for (n, total, per_type) in &rows {
                println!("degree {n}: {total} transitive classes");
                for (t, c) in per_type {
                    println!("  {t}: {c}");
                }
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, total, per_type)| {
                    json!({
                        "degree": n,
                        "trans_classes": total,
                        "per_type": per_type.iter().map(|(t, c)| json!({"type_label": t, "classes": c})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&v)?;
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct Witness {
    degree: usize,
    entry_id: usize,
    type_label: String,
    group: Vec<String>,
    stabilizer: Vec<String>,
    parallel: Vec<String>,
    parallel_class_size: usize,
    core_order: u64,
    candidates_scanned: usize,
}

fn witnesses(cat: &Catalogue, analyses: &[EntryAnalysis]) -> Vec<Witness> {
    analyses
        .iter()
        .flat_map(|a| a.reports.iter().filter(|r| r.no_hgs))
        .map(|r| {
            let e = &cat.entries[r.source_entry];
            Witness {
                degree: cat.degree,
                entry_id: e.entry_id,
                type_label: e.type_label.clone(),
                group: cycles(&e.group),
                stabilizer: cycles(&e.stabilizer),
                parallel: r
                    .h_class
                    .generators
                    .iter()
                    .map(|p| p.to_cycle_string(false))
                    .collect(),
                parallel_class_size: r.h_class.class_size,
                core_order: r.core_order,
                candidates_scanned: r.candidates_scanned,
            }
        })
        .collect()
}

pub fn no_hgs(g: &GlobalOpts, degrees: &[u64], emit_witnesses: bool) -> Result<bool, CliError> {
    let mut ok = true;
    let mut rows: Vec<(DegreeSummary, Vec<Witness>)> = Vec::new();
    for &n in degrees {
        let cat = catalogue(g, n)?;
        let analyses = analyze_catalogue(&cat, &options(g))?;
        let summary = summarize(&cat, &analyses);
        if !summary.is_consistent() {
            return Err(CliError::resource(format!(
                "degree {n}: summary totals disagree with the per-type rows"
            )));
        }
        if let Some(path) = &g.seed_fixtures {
            ok &= report_fixtures(&check_or_seed(
                path,
                n,
                summary.total_transitive_classes,
                Some(summary.no_hgs_entries),
            )?);
        }
        let w = if emit_witnesses {
            witnesses(&cat, &analyses)
        } else {
            Vec::new()
        };
        rows.push((summary, w));
    }
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            println!("{}", DegreeSummary::csv_header());
            for (s, _) in &rows {
                println!("{}", s.csv_row());
            }
            if emit_witnesses {
                println!();
                println!("Degree,Entry,Type,GroupOrder,ParallelGenerators,ClassSize,CoreOrder");
                for (s, ws) in &rows {
                    for w in ws {
                        let order = PermGroup::from_cycles(
                            s.degree,
                            &w.group.iter().map(String::as_str).collect::<Vec<_>>(),
                        )
                        .map(|x| x.order())
                        .unwrap_or(0);
                        println!(
                            "{},{},{},{},\"{}\",{},{}",
                            w.degree,
                            w.entry_id,
                            w.type_label,
                            order,
                            w.parallel.join(" "),
                            w.parallel_class_size,
                            w.core_order
                        );
                    }
                }
            }
        }
        Format::Text => {
            for (s, ws) in &rows {
                println!(
                    "degree {}: {} transitive classes, {} with the parallel no-HGS property ({} pairs, {} subgroups)",
                    s.degree, s.total_transitive_classes, s.no_hgs_entries, s.no_hgs_pairs, s.no_hgs_subgroups
                );
                for t in &s.per_type {
                    println!(
                        "  {}: {} classes, {} no-HGS ({} pairs, {} subgroups)",
                        t.type_label,
                        t.transitive_classes,
                        t.no_hgs_entries,
                        t.no_hgs_pairs,
                        t.no_hgs_subgroups
                    );
                }
                for w in ws {
                    println!(
                        "  witness: entry {} ({}), core order {}",
                        w.entry_id, w.type_label, w.core_order
                    );
                    println!("    G = <{}>", w.group.join(", "));
                    println!("    G' = <{}>", w.stabilizer.join(", "));
                    println!("    H = <{}>", w.parallel.join(", "));
                }
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(s, ws)| {
                    let mut o = json!({ "summary": s });
                    if emit_witnesses {
                        o["witnesses"] = json!(ws);
                    }
                    o
                })
                .collect();
            print_json(&v)?;
        }
    }
    Ok(ok)
}

fn pq_text(r: &PqReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}, q = {}, degree {}",
        r.params.p,
        r.params.q,
        r.params.degree()
    );
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let show =
        |x: Option<hgs_core::pqtheory::PredictedCounts>| x.map_or("none".into(), |p| p.to_string());
    for e in r.entries.iter().filter(|e| !e.pass || !e.derived_pass) {
        let _ = writeln!(
            s,
            "  entry {} ({}, order {}, {}): closed form {}, re-derived {}, computed {}",
            e.entry_id,
            e.type_label,
            e.order,
            if e.tags.is_empty() {
                format!(
                    "via entry {}",
                    e.via_entry.map_or("none".into(), |v| v.to_string())
                )
            } else {
                e.tags.join(" / ")
            },
            show(e.predicted),
            show(e.derived),
            e.computed
        );
    }
    for c in &r.collisions {
        let _ = writeln!(s, "  same class: {c}");
    }
    let _ = write!(
        s,
        "{}",
        if r.pass {
            "all checks pass"
        } else {
            "mismatches found"
        }
    );
    s
}

pub fn verify_pq(g: &GlobalOpts, p: u64, q: u64) -> Result<bool, CliError> {
    let params = PqParameters::new(p, q)?;
    let cat = catalogue(g, p * q)?;
    let report = verify_pq_with(&params, &cat)?;
    match g.format.unwrap_or(Format::Text) {
        Format::Text => println!("{}", pq_text(&report)),
        Format::Json => print_json(&report)?,
        Format::Csv => {
            println!("Check,Pass,Detail");
            for c in &report.checks {
                println!("\"{}\",{},\"{}\"", c.name, c.pass, c.detail);
            }
        }
    }
    Ok(report.pass)
}

pub fn analyze(g: &GlobalOpts, path: &Path) -> Result<bool, CliError> {
    let pair = read_pair(path)?;
    let n = pair.g.order() / pair.h.order();
    let (j, j_sub, core) = quotient_pair(&pair.g, &pair.h)?;
    let regular = j.order() == n;
    let cat = catalogue(g, n)?;
    let data = PairData::new(j.clone(), j_sub.clone())?;
    let types = cat.admitted_types(&data)?;
    let (first, scanned) = cat.find_match(&data)?;
    let quotient = json!({
        "degree": n,
        "order": j.order(),
        "stabilizer_order": j_sub.order(),
        "regular": regular,
        "generators": cycles(&j),
        "stabilizer": cycles(&j_sub),
    });
    match g.format.unwrap_or(Format::Text) {
        Format::Json => print_json(&json!({
            "group_order": pair.g.order(),
            "subgroup_order": pair.h.order(),
            "index": n,
            "core_order": core,
            "quotient": quotient,
            "types": types,
            "first_match": first.as_ref().map(|m| json!({"entry_id": m.entry_id, "type_label": m.type_label})),
            "candidates_scanned": scanned,
        }))?,
        Format::Csv => {
            println!("Index,GroupOrder,SubgroupOrder,CoreOrder,QuotientOrder,Regular,Types");
            println!(
                "{n},{},{},{core},{},{regular},\"{}\"",
                pair.g.order(),
                pair.h.order(),
                j.order(),
                types.iter().cloned().collect::<Vec<_>>().join(" ")
            );
        }
        Format::Text => {
            println!(
                "|G| = {}, |H| = {}, index {n}",
                pair.g.order(),
                pair.h.order()
            );
            println!("core order: {core}");
            println!(
                "quotient pair: degree {n}, |G/C| = {}, |H/C| = {}{}",
                j.order(),
                j_sub.order(),
                if regular {
                    " (regular: Galois quotient)"
                } else {
                    ""
                }
            );
            println!("quotient generators: <{}>", cycles(&j).join(", "));
            if types.is_empty() {
                println!("no HGS of any type ({scanned} same-order entries scanned)");
            } else {
                println!(
                    "admits types: {}",
                    types.iter().cloned().collect::<Vec<_>>().join(", ")
                );
                if let Some(m) = first {
                    println!("first match: entry {} ({})", m.entry_id, m.type_label);
                }
            }
        }
    }
    Ok(true)
}

fn witness_report(
    cat: &Catalogue,
    entry: Option<usize>,
) -> Result<(usize, ParallelReport), CliError> {
    let candidates: Vec<usize> = match entry {
        Some(id) if id >= cat.len() => {
            return Err(CliError::usage(format!(
                "entry {id} out of range (degree {} has {})",
                cat.degree,
                cat.len()
            )))
        }
        Some(id) => vec![id],
        None => (0..cat.len()).collect(),
    };
    for id in candidates {
        let reports = analyze_parallel(&cat.entries[id], cat)?;
        if let Some(r) = reports.into_iter().find(|r| r.no_hgs) {
            return Ok((id, r));
        }
    }
    Err(CliError::usage(match entry {
        Some(id) => format!("entry {id} is not a no-HGS witness"),
        None => format!("degree {} has no no-HGS witness", cat.degree),
    }))
}

pub fn extend(
    g: &GlobalOpts,
    degree: u64,
    entry: Option<usize>,
    auto_prime: bool,
    primes: &[u64],
) -> Result<bool, CliError> {
    if degree % 2 == 0 {
        return Err(CliError::usage(format!(
            "n odd required, got degree {degree}"
        )));
    }
    let primes = if auto_prime {
        vec![find_extension_prime(degree, degree, PRIME_SEARCH_CAP)?]
    } else {
        primes.to_vec()
    };
    let cat = catalogue(g, degree)?;
    let (id, report) = witness_report(&cat, entry)?;
    let witness = NoHgsWitness::from_report(&cat.entries[id], &report)?;
    let steps = iterate_family(&witness, &primes, Some(&cat))?;
    let ok = steps.iter().all(|s| s.verified);
    let step_json = |s: &ExtendedEntry| {
        json!({
            "prime": s.prime,
            "degree": s.witness.degree,
            "type_label": s.witness.type_label,
            "group_order": s.witness.group.order(),
            "hypotheses": s.hypotheses,
            "transcript": s.transcript,
            "verified": s.verified,
        })
    };
    match g.format.unwrap_or(Format::Text) {
        Format::Json => print_json(&json!({
            "source_entry": id,
            "source_degree": degree,
            "primes": primes,
            "steps": steps.iter().map(step_json).collect::<Vec<_>>(),
            "verified": ok,
        }))?,
        Format::Csv => {
            println!("Prime,Degree,Type,GroupOrder,Verified");
            for s in &steps {
                println!(
                    "{},{},{},{},{}",
                    s.prime,
                    s.witness.degree,
                    s.witness.type_label,
                    s.witness.group.order(),
                    s.verified
                );
            }
        }
        Format::Text => {
            println!(
                "source: degree {degree}, entry {id} ({})",
                cat.entries[id].type_label
            );
            println!(
                "primes: {}",
                primes
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            for s in &steps {
                println!(
                    "q = {}: degree {}, |G x C{}| = {}",
                    s.prime,
                    s.witness.degree,
                    s.prime,
                    s.witness.group.order()
                );
                for h in &s.hypotheses {
                    println!(
                        "  [{}] {}: {}",
                        if h.holds { "ok" } else { "no" },
                        h.name,
                        h.detail
                    );
                }
                for t in &s.transcript {
                    println!("  {t}");
                }
                println!("  verified: {}", s.verified);
            }
        }
    }
    Ok(ok)
}
