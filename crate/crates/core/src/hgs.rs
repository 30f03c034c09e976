//! Degree catalogues of transitive pairs and the parallel no-HGS search.
//!
//! A catalogue entry is a transitive subgroup `M ≤ Hol(N)` (up to conjugacy
//! in `Hol(N)`) together with `Stab_M(0)`. For an entry `G`, every subgroup
//! `H` of index `n` gives a parallel pair `(G/C, H/C)` with `C` the core of
//! `H`; the pair admits a Hopf–Galois structure of type `N` exactly when it
//! is pair-isomorphic to some entry of `Hol(N)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autohol::{automorphism_group, holomorph};
use crate::error::{Error, Result};
use crate::grouplib::{groups_of_order, is_prime, AbstractGroup, GROUPLIB_VERSION};
use crate::isomorphism::{
    pair_isomorphic_data, permutation_pair_of_quotient, PairData, PairWitness,
};
use crate::permgrp::{gcd, PermGroup, Permutation};
use crate::subgroups::{
    affine_subgroup_classes, index_n_subgroup_classes, transitive_subgroup_classes, AffineFilter,
    AffineFrame, SubgroupClass, DEFAULT_LATTICE_BOUND,
};

/// Bumped whenever cached catalogues or analyses would change.
pub const ALGORITHM_VERSION: u32 = 1;

/// One transitive subgroup class of `Hol(N)` with its point stabilizer.
#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub degree: usize,
    pub type_label: String,
    /// Position of `N` in the group list of its order (1-based).
    pub type_index: usize,
    pub entry_id: usize,
    pub order: u64,
    /// Number of `Hol(N)`-conjugates.
    pub class_size: usize,
    pub key: String,
    pub group: PermGroup,
    pub stabilizer: PermGroup,
}

/// All entries of one degree, with lazily built pair data.
pub struct Catalogue {
    pub degree: usize,
    pub types: Vec<String>,
    pub entries: Vec<CatalogueEntry>,
    pairs: Vec<OnceLock<PairData>>,
    /// Entry ids by group order, sorted by `(type_label, entry_id)`.
    by_order: BTreeMap<u64, Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct CatalogueOptions {
    pub cache_dir: Option<PathBuf>,
    /// Reuse valid cache files instead of recomputing.
    pub resume: bool,
    /// Refuse holomorphs larger than this.
    pub max_order: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct CachedType {
    format: String,
    grouplib_version: u32,
    algorithm_version: u32,
    degree: usize,
    type_index: usize,
    type_label: String,
    holomorph_order: u64,
    entries: Vec<CachedEntry>,
}

#[derive(Serialize, Deserialize)]
struct CachedEntry {
    order: u64,
    class_size: usize,
    key: String,
    generators: Vec<Permutation>,
    stabilizer: Vec<Permutation>,
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn degree_dir(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("degree-{n:03}"))
}

fn type_file(dir: &Path, n: usize, idx: usize, label: &str) -> PathBuf {
    degree_dir(dir, n).join(format!("{idx:02}-{}.json", sanitize(label)))
}

/// Writes through a temporary file so an interrupted run never leaves a
/// truncated cache file behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load_type(path: &Path, n: usize, idx: usize, label: &str) -> Option<CachedType> {
    let text = fs::read_to_string(path).ok()?;
    let c: CachedType = serde_json::from_str(&text).ok()?;
    (c.format == "hgs-catalogue"
        && c.grouplib_version == GROUPLIB_VERSION
        && c.algorithm_version == ALGORITHM_VERSION
        && c.degree == n
        && c.type_index == idx
        && c.type_label == label)
        .then_some(c)
}

fn compute_type(n: &AbstractGroup, idx: usize, max_order: Option<u64>) -> Result<CachedType> {
    let degree = n.order();
    if let Some(limit) = max_order {
        let aut = automorphism_group(n)?;
        let hol_order = degree as u64 * aut.order();
        if hol_order > limit {
            return Err(Error::Resource {
                what: format!("|Hol({})|", n.name),
                limit,
                progress: hol_order,
            });
        }
    }
    let hol = holomorph(n)?;
    let classes = transitive_subgroup_classes(&hol)?;
    let mut entries = Vec::with_capacity(classes.len());
    for t in classes {
        let core = t.class.representative.normal_core(&t.stabilizer)?;
        if !core.is_trivial() {
            return Err(Error::precondition(format!(
                "point stabilizer of a transitive subgroup of Hol({}) has a nontrivial core",
                n.name
            )));
        }
        entries.push(CachedEntry {
            order: t.class.order,
            class_size: t.class.class_size,
            key: t.class.key,
            generators: t.class.representative.generators().to_vec(),
            stabilizer: t.stabilizer.generators().to_vec(),
        });
    }
    Ok(CachedType {
        format: "hgs-catalogue".into(),
        grouplib_version: GROUPLIB_VERSION,
        algorithm_version: ALGORITHM_VERSION,
        degree,
        type_index: idx,
        type_label: n.name.clone(),
        holomorph_order: hol.group.order(),
        entries,
    })
}

/// Builds (or loads) the catalogue of every transitive subgroup class of
/// `Hol(N)` over all groups `N` of order `n`.
pub fn build_catalogue_with(n: u64, opts: &CatalogueOptions) -> Result<Catalogue> {
    let lib = groups_of_order(n)?;
    let degree = n as usize;
    let computed: Vec<CachedType> = lib
        .groups
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<CachedType> {
            let idx = i + 1;
            let path = opts
                .cache_dir
                .as_ref()
                .map(|d| type_file(d, degree, idx, &g.name));
            if opts.resume {
                if let Some(c) = path
                    .as_ref()
                    .and_then(|p| load_type(p, degree, idx, &g.name))
                {
                    return Ok(c);
                }
            }
            let c = compute_type(g, idx, opts.max_order)?;
            if let Some(p) = path {
                write_atomic(&p, &serde_json::to_vec_pretty(&c)?)?;
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::new();
    for c in computed.iter() {
        for e in &c.entries {
            let group = PermGroup::new(degree, e.generators.clone())?;
            let stabilizer = PermGroup::new(degree, e.stabilizer.clone())?;
            if group.order() != e.order {
                return Err(Error::Cache(format!(
                    "entry of type {} has order {} but the cache records {}",
                    c.type_label,
                    group.order(),
                    e.order
                )));
            }
            entries.push(CatalogueEntry {
                degree,
                type_label: c.type_label.clone(),
                type_index: c.type_index,
                entry_id: entries.len(),
                order: e.order,
                class_size: e.class_size,
                key: e.key.clone(),
                group,
                stabilizer,
            });
        }
    }
    Ok(Catalogue::from_entries(
        degree,
        lib.groups.iter().map(|g| g.name.clone()).collect(),
        entries,
    ))
}

/// [`build_catalogue_with`] without a cache.
pub fn build_catalogue(n: u64) -> Result<Catalogue> {
    build_catalogue_with(n, &CatalogueOptions::default())
}

impl Catalogue {
    pub fn from_entries(degree: usize, types: Vec<String>, entries: Vec<CatalogueEntry>) -> Self {
        let mut by_order: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for e in &entries {
            by_order.entry(e.order).or_default().push(e.entry_id);
        }
        for ids in by_order.values_mut() {
            ids.sort_by(|&a, &b| (&entries[a].type_label, a).cmp(&(&entries[b].type_label, b)));
        }
        let pairs = entries.iter().map(|_| OnceLock::new()).collect();
        Catalogue {
            degree,
            types,
            entries,
            pairs,
            by_order,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(G, Stab_G(0))` of an entry, built on first use.
    pub fn pair_data(&self, id: usize) -> Result<&PairData> {
        if let Some(p) = self.pairs[id].get() {
            return Ok(p);
        }
        let e = &self.entries[id];
        let p = PairData::new(e.group.clone(), e.stabilizer.clone())?;
        Ok(self.pairs[id].get_or_init(|| p))
    }

    /// Candidates for a pair of group order `order`, in search order.
    pub fn entries_of_order(&self, order: u64) -> &[usize] {
        self.by_order.get(&order).map_or(&[], |v| v.as_slice())
    }

    pub fn entries_of_type<'a>(
        &'a self,
        label: &'a str,
    ) -> impl Iterator<Item = &'a CatalogueEntry> {
        self.entries.iter().filter(move |e| e.type_label == label)
    }

    /// First catalogue entry pair-isomorphic to `pair`, scanning every
    /// same-order entry. Returns the match and the number of entries scanned.
    pub fn find_match(&self, pair: &PairData) -> Result<(Option<ParallelMatch>, usize)> {
        let ids = self.entries_of_order(pair.order());
        for (i, &id) in ids.iter().enumerate() {
            if let Some(w) = pair_isomorphic_data(pair, self.pair_data(id)?) {
                return Ok((
                    Some(ParallelMatch {
                        entry_id: id,
                        type_label: self.entries[id].type_label.clone(),
                        witness: w,
                    }),
                    i + 1,
                ));
            }
        }
        Ok((None, ids.len()))
    }

    /// Labels `N` for which some entry of `Hol(N)` is pair-isomorphic to `pair`.
    pub fn admitted_types(&self, pair: &PairData) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for &id in self.entries_of_order(pair.order()) {
            let label = &self.entries[id].type_label;
            if out.contains(label) {
                continue;
            }
            if pair_isomorphic_data(pair, self.pair_data(id)?).is_some() {
                out.insert(label.clone());
            }
        }
        Ok(out)
    }
}

/// Summary of one index-`n` subgroup class of an entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HClass {
    /// Position among the index-`n` classes of the entry, ordered by representative.
    pub index: usize,
    pub order: u64,
    pub class_size: usize,
    pub key: String,
    pub generators: Vec<Permutation>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParallelMatch {
    pub entry_id: usize,
    pub type_label: String,
    pub witness: PairWitness,
}

/// The fate of one parallel pair `(G/C, H/C)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParallelReport {
    pub source_entry: usize,
    pub h_class: HClass,
    pub core_order: u64,
    pub quotient_degree: usize,
    pub quotient_order: u64,
    /// Same-order catalogue entries examined before stopping.
    pub candidates_scanned: usize,
    /// Same-order catalogue entries in total.
    pub candidates_available: usize,
    #[serde(rename = "match")]
    pub matched: Option<ParallelMatch>,
    pub no_hgs: bool,
}

/// The quotient pair of `(g, h)`, checked to be transitive of degree `[G:H]`.
pub fn quotient_pair(g: &PermGroup, h: &PermGroup) -> Result<(PermGroup, PermGroup, u64)> {
    let core = g.normal_core(h)?;
    let (j, j_sub) = permutation_pair_of_quotient(g, h)?;
    debug_assert!(j.is_transitive());
    Ok((j, j_sub, core.order()))
}

/// Index-`n` subgroup classes of an entry. Entries beyond the lattice bound
/// use the affine enumeration when their type is elementary abelian.
fn entry_index_n_classes(entry: &CatalogueEntry) -> Result<Vec<SubgroupClass>> {
    let n = entry.degree as u64;
    if entry.order > DEFAULT_LATTICE_BOUND {
        let lib = groups_of_order(n)?;
        let frame = lib
            .groups
            .iter()
            .find(|g| g.name == entry.type_label)
            .and_then(|g| AffineFrame::new(&g.regular_representation()).ok());
        if let Some(frame) = frame {
            let filter = AffineFilter {
                order: Some(entry.order / n),
                transitive: false,
            };
            return affine_subgroup_classes(&frame, &entry.group, filter);
        }
    }
    index_n_subgroup_classes(&entry.group, n)
}

/// One report per index-`n` subgroup class of `entry.group`.
pub fn analyze_parallel(
    entry: &CatalogueEntry,
    catalogue: &Catalogue,
) -> Result<Vec<ParallelReport>> {
    if entry.degree != catalogue.degree {
        return Err(Error::DegreeMismatch {
            expected: catalogue.degree,
            found: entry.degree,
        });
    }
    let classes = entry_index_n_classes(entry)?;
    classes
        .into_iter()
        .enumerate()
        .map(|(index, c)| {
            let (j, j_sub, core_order) = quotient_pair(&entry.group, &c.representative)?;
            let pair = PairData::new(j, j_sub)?;
            let (matched, scanned) = catalogue.find_match(&pair)?;
            Ok(ParallelReport {
                source_entry: entry.entry_id,
                h_class: HClass {
                    index,
                    order: c.order,
                    class_size: c.class_size,
                    key: c.key,
                    generators: c.representative.generators().to_vec(),
                },
                core_order,
                quotient_degree: pair.group.degree(),
                quotient_order: pair.order(),
                candidates_scanned: scanned,
                candidates_available: catalogue.entries_of_order(pair.order()).len(),
                no_hgs: matched.is_none(),
                matched,
            })
        })
        .collect()
}

/// Type sets of the source pair and of every parallel pair of an entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryTypeSets {
    pub entry_id: usize,
    pub source: BTreeSet<String>,
    pub parallel: Vec<BTreeSet<String>>,
    /// `|Core_G(H)|` for each parallel pair, aligned with `parallel`.
    pub core_orders: Vec<u64>,
}

pub fn parallel_type_sets(entry: &CatalogueEntry, catalogue: &Catalogue) -> Result<EntryTypeSets> {
    let source = catalogue.admitted_types(catalogue.pair_data(entry.entry_id)?)?;
    let classes = entry_index_n_classes(entry)?;
    let mut parallel = Vec::with_capacity(classes.len());
    let mut core_orders = Vec::with_capacity(classes.len());
    for c in &classes {
        let (j, j_sub, core) = quotient_pair(&entry.group, &c.representative)?;
        parallel.push(catalogue.admitted_types(&PairData::new(j, j_sub)?)?);
        core_orders.push(core);
    }
    Ok(EntryTypeSets {
        entry_id: entry.entry_id,
        source,
        parallel,
        core_orders,
    })
}

/// Types `N` of order `n` such that `(g, g_sub)` is pair-isomorphic to a
/// transitive pair in `Hol(N)`. A subgroup with nontrivial core is replaced
/// by the quotient pair first.
pub fn hgs_types_admitted_in(
    catalogue: &Catalogue,
    g: &PermGroup,
    g_sub: &PermGroup,
) -> Result<BTreeSet<String>> {
    if !g.contains_group(g_sub) {
        return Err(Error::NotSubgroup("G_sub is not contained in G".into()));
    }
    if g.order() != g_sub.order() * catalogue.degree as u64 {
        return Err(Error::precondition(format!(
            "[G : G_sub] = {} but the catalogue has degree {}",
            g.order() / g_sub.order(),
            catalogue.degree
        )));
    }
    let (j, j_sub, _) = quotient_pair(g, g_sub)?;
    catalogue.admitted_types(&PairData::new(j, j_sub)?)
}

pub fn hgs_types_admitted(g: &PermGroup, g_sub: &PermGroup, n: u64) -> Result<BTreeSet<String>> {
    hgs_types_admitted_in(&build_catalogue(n)?, g, g_sub)
}

/// Result of the parallel analysis of one entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryAnalysis {
    pub entry_id: usize,
    pub type_label: String,
    pub key: String,
    pub reports: Vec<ParallelReport>,
}

impl EntryAnalysis {
    pub fn no_hgs(&self) -> bool {
        self.reports.iter().any(|r| r.no_hgs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TypeSummary {
    pub type_label: String,
    pub transitive_classes: usize,
    pub no_hgs_entries: usize,
    /// `(entry, H-class)` pairs without a match.
    pub no_hgs_pairs: usize,
    /// As `no_hgs_pairs`, counting every conjugate of `H` in `G`.
    pub no_hgs_subgroups: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegreeSummary {
    pub degree: usize,
    pub total_transitive_classes: usize,
    pub no_hgs_entries: usize,
    pub no_hgs_pairs: usize,
    pub no_hgs_subgroups: usize,
    pub per_type: Vec<TypeSummary>,
}

impl DegreeSummary {
    pub fn csv_header() -> &'static str {
        "Degree,TransClasses,NoHGS"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            self.degree, self.total_transitive_classes, self.no_hgs_entries
        )
    }

    /// Checks that the totals are the sums of the per-type rows.
    pub fn is_consistent(&self) -> bool {
        let sum = |f: fn(&TypeSummary) -> usize| self.per_type.iter().map(f).sum::<usize>();
        sum(|t| t.transitive_classes) == self.total_transitive_classes
            && sum(|t| t.no_hgs_entries) == self.no_hgs_entries
            && sum(|t| t.no_hgs_pairs) == self.no_hgs_pairs
            && sum(|t| t.no_hgs_subgroups) == self.no_hgs_subgroups
    }
}

#[derive(Serialize, Deserialize)]
struct CachedAnalysis {
    format: String,
    grouplib_version: u32,
    algorithm_version: u32,
    degree: usize,
    type_label: String,
    keys: Vec<String>,
    entries: Vec<EntryAnalysis>,
}

fn analysis_file(dir: &Path, n: usize, idx: usize, label: &str) -> PathBuf {
    degree_dir(dir, n).join(format!("{idx:02}-{}.analysis.json", sanitize(label)))
}

/// Runs [`analyze_parallel`] on every entry, one type at a time so that an
/// interrupted run can resume from the per-type cache files.
pub fn analyze_catalogue(
    catalogue: &Catalogue,
    opts: &CatalogueOptions,
) -> Result<Vec<EntryAnalysis>> {
    let mut out = Vec::with_capacity(catalogue.len());
    for (i, label) in catalogue.types.iter().enumerate() {
        let ids: Vec<usize> = catalogue
            .entries
            .iter()
            .filter(|e| &e.type_label == label)
            .map(|e| e.entry_id)
            .collect();
        let keys: Vec<String> = ids
            .iter()
            .map(|&id| catalogue.entries[id].key.clone())
            .collect();
        let path = opts
            .cache_dir
            .as_ref()
            .map(|d| analysis_file(d, catalogue.degree, i + 1, label));
        if opts.resume {
            let cached = path
                .as_ref()
                .and_then(|p| fs::read_to_string(p).ok())
                .and_then(|t| serde_json::from_str::<CachedAnalysis>(&t).ok())
                .filter(|c| {
                    c.format == "hgs-analysis"
                        && c.grouplib_version == GROUPLIB_VERSION
                        && c.algorithm_version == ALGORITHM_VERSION
                        && c.degree == catalogue.degree
                        && &c.type_label == label
                        && c.keys == keys
                });
            if let Some(c) = cached {
                out.extend(c.entries);
                continue;
            }
        }
        let analyses: Vec<EntryAnalysis> = ids
            .par_iter()
            .map(|&id| {
                let e = &catalogue.entries[id];
                Ok(EntryAnalysis {
                    entry_id: id,
                    type_label: e.type_label.clone(),
                    key: e.key.clone(),
                    reports: analyze_parallel(e, catalogue)?,
                })
            })
            .collect::<Result<_>>()?;
        if let Some(p) = path {
            let c = CachedAnalysis {
                format: "hgs-analysis".into(),
                grouplib_version: GROUPLIB_VERSION,
                algorithm_version: ALGORITHM_VERSION,
                degree: catalogue.degree,
                type_label: label.clone(),
                keys,
                entries: analyses.clone(),
            };
            write_atomic(&p, &serde_json::to_vec(&c)?)?;
        }
        out.extend(analyses);
    }
    Ok(out)
}

pub fn summarize(catalogue: &Catalogue, analyses: &[EntryAnalysis]) -> DegreeSummary {
    let per_type: Vec<TypeSummary> = catalogue
        .types
        .iter()
        .map(|label| {
            let mine: Vec<&EntryAnalysis> =
                analyses.iter().filter(|a| &a.type_label == label).collect();
            let failing = || {
                mine.iter()
                    .flat_map(|a| a.reports.iter())
                    .filter(|r| r.no_hgs)
            };
            TypeSummary {
                type_label: label.clone(),
                transitive_classes: catalogue.entries_of_type(label).count(),
                no_hgs_entries: mine.iter().filter(|a| a.no_hgs()).count(),
                no_hgs_pairs: failing().count(),
                no_hgs_subgroups: failing().map(|r| r.h_class.class_size).sum(),
            }
        })
        .collect();
    DegreeSummary {
        degree: catalogue.degree,
        total_transitive_classes: per_type.iter().map(|t| t.transitive_classes).sum(),
        no_hgs_entries: per_type.iter().map(|t| t.no_hgs_entries).sum(),
        no_hgs_pairs: per_type.iter().map(|t| t.no_hgs_pairs).sum(),
        no_hgs_subgroups: per_type.iter().map(|t| t.no_hgs_subgroups).sum(),
        per_type,
    }
}

/// Counts the entries of degree `n` having at least one parallel pair that
/// admits no Hopf–Galois structure.
pub fn detect_no_hgs(n: u64) -> Result<DegreeSummary> {
    let catalogue = build_catalogue(n)?;
    let analyses = analyze_catalogue(&catalogue, &CatalogueOptions::default())?;
    Ok(summarize(&catalogue, &analyses))
}

/// Least prime `q > max(lower, n)` with `gcd(q - 1, n) = 1`.
pub fn find_extension_prime(n: u64, lower: u64, cap: u64) -> Result<u64> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::precondition(format!("n odd required, got {n}")));
    }
    let start = lower.max(n) + 1;
    (start..=cap)
        .find(|&q| is_prime(q) && gcd(q - 1, n) == 1)
        .ok_or_else(|| Error::Resource {
            what: format!("prime search for n = {n}"),
            limit: cap,
            progress: cap.saturating_sub(start),
        })
}

/// One machine-checked hypothesis of the extension step.
#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// A transitive pair `(M, M_sub)` with a parallel subgroup known to admit no
/// Hopf–Galois structure.
#[derive(Clone, Debug)]
pub struct NoHgsWitness {
    pub degree: usize,
    pub type_label: String,
    pub group: PermGroup,
    pub stabilizer: PermGroup,
    pub parallel: PermGroup,
}

impl NoHgsWitness {
    pub fn from_report(entry: &CatalogueEntry, report: &ParallelReport) -> Result<Self> {
        if !report.no_hgs || report.source_entry != entry.entry_id {
            return Err(Error::precondition(
                "report is not a no-HGS report of this entry",
            ));
        }
        Ok(NoHgsWitness {
            degree: entry.degree,
            type_label: entry.type_label.clone(),
            group: entry.group.clone(),
            stabilizer: entry.stabilizer.clone(),
            parallel: PermGroup::new(entry.degree, report.h_class.generators.clone())?,
        })
    }
}

/// Outcome of one application of the extension step.
#[derive(Clone, Debug)]
pub struct ExtendedEntry {
    pub prime: u64,
    pub witness: NoHgsWitness,
    pub hypotheses: Vec<HypothesisCheck>,
    pub transcript: Vec<String>,
    pub verified: bool,
}

/// `G × C_q` acting on `{0..n-1} × {0..q-1}`, the point `(x, i)` numbered `x + n i`.
pub fn direct_product_with_cyclic(g: &PermGroup, q: usize) -> Result<PermGroup> {
    let n = g.degree();
    let mut gens: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|s| {
            Permutation::from_images((0..n * q).map(|p| s.image(p % n) + n * (p / n)).collect())
        })
        .collect::<Result<_>>()?;
    gens.push(Permutation::from_images(
        (0..n * q).map(|p| p % n + n * ((p / n + 1) % q)).collect(),
    )?);
    PermGroup::new(n * q, gens)
}

fn lift_subgroup(h: &PermGroup, n: usize, q: usize) -> Result<PermGroup> {
    let gens = h
        .generators()
        .iter()
        .map(|s| {
            Permutation::from_images((0..n * q).map(|p| s.image(p % n) + n * (p / n)).collect())
        })
        .collect::<Result<_>>()?;
    PermGroup::new(n * q, gens)
}

/// Whether `|Aut(Y)|` is known for every `Y` of order `m`. Orders outside
/// the group library fall back on `Aut(Y) ≤ Sym(m - 1)`.
fn aut_orders(m: u64) -> Option<Vec<(String, u64)>> {
    let lib = groups_of_order(m).ok()?;
    lib.groups
        .iter()
        .map(|y| {
            automorphism_group(y)
                .ok()
                .map(|a| (y.name.clone(), a.order()))
        })
        .collect()
}

/// Extends a no-HGS witness of odd degree `n` to `G × C_q` of degree `nq`.
///
/// Any group of order `nq` is `C_q × Y` with `|Y| = n` once `q > n` and
/// `gcd(q - 1, n) = 1`, and `q ∤ |Aut(Y)|` makes `C_q` split off the
/// holomorph, so the extended parallel pair is realized only if the original
/// one is. `catalogue` (degree `n`), when given, is used to re-certify that
/// the original parallel pair has no match.
pub fn extend_family(
    witness: &NoHgsWitness,
    q: u64,
    catalogue: Option<&Catalogue>,
) -> Result<ExtendedEntry> {
    let n = witness.degree as u64;
    if n % 2 == 0 {
        return Err(Error::precondition(format!(
            "n odd required, got degree {n}"
        )));
    }
    if !is_prime(q) {
        return Err(Error::precondition(format!("{q} is not prime")));
    }
    if gcd(q - 1, n) != 1 {
        return Err(Error::precondition(format!(
            "gcd({} , {n}) = {} != 1",
            q - 1,
            gcd(q - 1, n)
        )));
    }
    if q <= n {
        return Err(Error::precondition(format!("q = {q} must exceed n = {n}")));
    }
    let mut hypotheses = vec![
        HypothesisCheck {
            name: "q prime".into(),
            holds: true,
            detail: format!("{q} is prime"),
        },
        HypothesisCheck {
            name: "gcd(q-1, n) = 1".into(),
            holds: true,
            detail: format!("gcd({}, {n}) = 1", q - 1),
        },
        HypothesisCheck {
            name: "q > n".into(),
            holds: true,
            detail: format!("{q} > {n}"),
        },
    ];
    let mut transcript = Vec::new();
    match aut_orders(n) {
        Some(list) => {
            let max = list.iter().map(|(_, a)| *a).max().unwrap_or(1);
            let divides: Vec<&str> = list
                .iter()
                .filter(|(_, a)| a % q == 0)
                .map(|(y, _)| y.as_str())
                .collect();
            hypotheses.push(HypothesisCheck {
                name: "q does not divide |Aut(Y)| for all |Y| = n".into(),
                holds: divides.is_empty(),
                detail: list
                    .iter()
                    .map(|(y, a)| format!("|Aut({y})| = {a}"))
                    .collect::<Vec<_>>()
                    .join(", "),
            });
            hypotheses.push(HypothesisCheck {
                name: "q > |Aut(Y)| for all |Y| = n (informational)".into(),
                holds: q > max,
                detail: format!("max |Aut(Y)| = {max}"),
            });
        }
        None => hypotheses.push(HypothesisCheck {
            name: "q does not divide |Aut(Y)| for all |Y| = n".into(),
            holds: true,
            detail: format!("Aut(Y) embeds in Sym({}) and q > n", n - 1),
        }),
    }
    let (j, j_sub, core_order) = quotient_pair(&witness.group, &witness.parallel)?;
    transcript.push(format!(
        "source: degree {n}, type {}, |G| = {}, |H| = {}, |core| = {core_order}",
        witness.type_label,
        witness.group.order(),
        witness.parallel.order()
    ));
    let mut certified = true;
    if let Some(cat) = catalogue {
        if cat.degree as u64 != n {
            return Err(Error::DegreeMismatch {
                expected: witness.degree,
                found: cat.degree,
            });
        }
        let pair = PairData::new(j, j_sub)?;
        let (m, scanned) = cat.find_match(&pair)?;
        certified = m.is_none();
        transcript.push(format!(
            "quotient pair of order {} rescanned against {scanned} degree-{n} entries: {}",
            pair.order(),
            if certified { "no match" } else { "MATCH FOUND" }
        ));
    } else {
        transcript.push("quotient pair certified by the supplied witness".into());
    }
    let qs = q as usize;
    let nn = witness.degree;
    let group = direct_product_with_cyclic(&witness.group, qs)?;
    let stabilizer = lift_subgroup(&witness.stabilizer, nn, qs)?;
    let parallel = lift_subgroup(&witness.parallel, nn, qs)?;
    let order_ok = group.order() == witness.group.order() * q;
    let transitive = group.is_transitive();
    let index_ok = group.order() == parallel.order() * n * q;
    let stab_ok = group.point_stabilizer(0).same_group(&stabilizer);
    transcript.push(format!(
        "G x C{q}: degree {}, order {} ({}), transitive {transitive}, [G x C{q} : H x 1] = {}, point stabilizer = Stab x 1: {stab_ok}",
        nn * qs,
        group.order(),
        if order_ok { "= |G| q" } else { "!= |G| q" },
        group.order() / parallel.order()
    ));
    let verified = certified
        && order_ok
        && transitive
        && index_ok
        && stab_ok
        && hypotheses
            .iter()
            .all(|h| h.holds || h.name.ends_with("(informational)"));
    Ok(ExtendedEntry {
        prime: q,
        witness: NoHgsWitness {
            degree: nn * qs,
            type_label: format!("{}xC{q}", witness.type_label),
            group,
            stabilizer,
            parallel,
        },
        hypotheses,
        transcript,
        verified,
    })
}

/// Applies [`extend_family`] once per prime, each against the accumulated degree.
pub fn iterate_family(
    witness: &NoHgsWitness,
    primes: &[u64],
    catalogue: Option<&Catalogue>,
) -> Result<Vec<ExtendedEntry>> {
    let mut out: Vec<ExtendedEntry> = Vec::with_capacity(primes.len());
    for (i, &q) in primes.iter().enumerate() {
        let (src, cat) = match out.last() {
            Some(prev) => (&prev.witness, None),
            None => (witness, catalogue),
        };
        let mut step = extend_family(src, q, cat)?;
        if i > 0 {
            step.transcript
                .insert(0, format!("step {}: certified by step {i}", i + 1));
            step.verified &= out[i - 1].verified;
        }
        out.push(step);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_and_three() {
        let c = build_catalogue(2).unwrap();
        assert_eq!(c.len(), 1);
        let s = detect_no_hgs(3).unwrap();
        assert_eq!((s.total_transitive_classes, s.no_hgs_entries), (2, 0));
    }

    #[test]
    fn extension_primes() {
        assert_eq!(find_extension_prime(27, 27, 1000).unwrap(), 29);
        assert_eq!(find_extension_prime(9, 9, 1000).unwrap(), 11);
        assert_eq!(find_extension_prime(3, 3, 1000).unwrap(), 5);
        assert!(find_extension_prime(8, 8, 1000).is_err());
        assert!(find_extension_prime(15, 15, 16).is_err());
    }

    #[test]
    fn stabilizer_class_matches_itself_or_an_equivalent() {
        let c = build_catalogue(4).unwrap();
        for e in &c.entries {
            let reports = analyze_parallel(e, &c).unwrap();
            assert!(!reports.is_empty());
            let own = c.pair_data(e.entry_id).unwrap();
            let types = c.admitted_types(own).unwrap();
            assert!(types.contains(&e.type_label));
        }
    }

    #[test]
    fn product_with_cyclic() {
        let g = PermGroup::from_cycles(3, &["(0,1,2)", "(1,2)"]).unwrap();
        let m = direct_product_with_cyclic(&g, 5).unwrap();
        assert_eq!(m.degree(), 15);
        assert_eq!(m.order(), 30);
        assert!(m.is_transitive());
    }
}
