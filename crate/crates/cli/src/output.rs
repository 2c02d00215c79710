//! Output documents. Field order is the JSON order; `text()` renders the
//! same data as aligned key/value lines or a table.

use serde::Serialize;

use pfree_lab::group::Elem;
use pfree_lab::pfree::PfreeMethod;
use pfree_lab::ratio::Ratio;
use pfree_lab::structure::SweepRow;

pub(crate) fn method_name(m: PfreeMethod) -> &'static str {
    match m {
        PfreeMethod::Exact => "exact",
        PfreeMethod::Greedy => "greedy",
        PfreeMethod::LocalSearch => "local_search",
        PfreeMethod::CyclicConstruction => "cyclic_construction",
        PfreeMethod::AbelianPullback => "abelian_pullback",
        PfreeMethod::Translate => "translate",
    }
}

pub trait TextRender {
    fn text(&self) -> String;
}

fn kv(lines: &mut String, key: &str, value: impl std::fmt::Display) {
    lines.push_str(&format!("{key}: {value}\n"));
}

fn list(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Serialize)]
pub struct GroupInfoOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    pub abelian: bool,
    pub perfect: bool,
    pub classes: usize,
    pub class_sizes: Vec<usize>,
}

impl TextRender for GroupInfoOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "order", self.order);
        kv(&mut s, "exponent", self.exponent);
        kv(&mut s, "abelian", self.abelian);
        kv(&mut s, "perfect", self.perfect);
        kv(&mut s, "classes", self.classes);
        kv(&mut s, "class sizes", list(&self.class_sizes));
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct ValidateOut {
    pub schema: u32,
    pub file: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assoc_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TextRender for ValidateOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "file", &self.file);
        kv(&mut s, "valid", self.valid);
        if let Some(o) = self.order {
            kv(&mut s, "order", o);
        }
        if let Some(m) = &self.assoc_mode {
            kv(&mut s, "associativity check", m);
        }
        if let Some(e) = &self.error {
            kv(&mut s, "error", e);
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct PfreeOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub method: PfreeMethod,
    pub size: usize,
    pub density: Ratio,
    pub optimal: bool,
    pub elements: Vec<usize>,
}

impl TextRender for PfreeOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "method", method_name(self.method));
        kv(&mut s, "size", self.size);
        kv(&mut s, "density", self.density);
        kv(&mut s, "optimal", self.optimal);
        kv(&mut s, "elements", list(&self.elements));
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct NotFoundOut {
    pub schema: u32,
    pub group: String,
    pub found: bool,
    pub reason: String,
}

impl TextRender for NotFoundOut {
    fn text(&self) -> String {
        format!("group: {}\nfound: false\nreason: {}", self.group, self.reason)
    }
}

#[derive(Serialize)]
pub struct CheckOut {
    pub schema: u32,
    pub group: String,
    pub size: usize,
    pub density: Ratio,
    pub product_free: bool,
}

impl TextRender for CheckOut {
    fn text(&self) -> String {
        format!(
            "group: {}\nsize: {}\ndensity: {}\nproduct-free: {}",
            self.group, self.size, self.density, self.product_free
        )
    }
}

#[derive(Serialize)]
pub struct DegreesOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub prime: u64,
    pub degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl TextRender for DegreesOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "order", self.order);
        kv(&mut s, "prime", self.prime);
        let ds: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        kv(&mut s, "degrees", format!("[{}]", ds.join(", ")));
        if let Some(ms) = self.elapsed_ms {
            kv(&mut s, "elapsed_ms", ms);
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct QuasirandomOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub d: u32,
    pub prime: u64,
    pub degrees: Vec<u32>,
}

impl TextRender for QuasirandomOut {
    fn text(&self) -> String {
        let ds: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        format!(
            "group: {}\norder: {}\nd: {}\ndegrees: [{}]\nprime: {}",
            self.group,
            self.order,
            self.d,
            ds.join(", "),
            self.prime
        )
    }
}

#[derive(Serialize)]
pub struct TripleOut {
    pub schema: u32,
    pub group: String,
    pub sizes: [usize; 3],
    pub covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing: Option<Elem>,
}

impl TextRender for TripleOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "sizes", format!("{} x {} x {}", self.sizes[0], self.sizes[1], self.sizes[2]));
        kv(&mut s, "covered", self.covered);
        if let Some(x) = self.missing {
            kv(&mut s, "missing", x);
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct NpOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub d: u32,
    pub threshold: usize,
    pub trials: u64,
    pub passes: u64,
    pub vacuous: bool,
    pub seed: u64,
}

impl TextRender for NpOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "order", self.order);
        kv(&mut s, "d", self.d);
        kv(&mut s, "threshold", self.threshold);
        kv(&mut s, "trials", self.trials);
        kv(&mut s, "passes", self.passes);
        kv(&mut s, "vacuous", self.vacuous);
        kv(&mut s, "seed", self.seed);
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct MixingOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub density: f64,
    pub subset_size: usize,
    pub trials: u64,
    pub seed: u64,
    pub min_ratio: f64,
    pub mean_ratio: f64,
}

impl TextRender for MixingOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "order", self.order);
        kv(&mut s, "density", self.density);
        kv(&mut s, "subset size", self.subset_size);
        kv(&mut s, "trials", self.trials);
        kv(&mut s, "seed", self.seed);
        kv(&mut s, "min |AB|/n", self.min_ratio);
        kv(&mut s, "mean |AB|/n", self.mean_ratio);
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct ChainBuildOut {
    pub schema: u32,
    pub group: String,
    pub found: bool,
    pub truncated: bool,
    pub base: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<usize>>>,
}

impl TextRender for ChainBuildOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "found", self.found);
        if self.truncated {
            kv(&mut s, "truncated", true);
        }
        kv(&mut s, "base", list(&self.base));
        if let Some(k) = self.k {
            kv(&mut s, "k", k);
        }
        if let Some(sets) = &self.sets {
            for (i, x) in sets.iter().enumerate() {
                kv(&mut s, &format!("X{}", i + 1), list(x));
            }
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct ChainVerifyOut {
    pub schema: u32,
    pub group: String,
    pub ok: bool,
    pub violations: Vec<String>,
}

impl TextRender for ChainVerifyOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "ok", self.ok);
        if !self.violations.is_empty() {
            kv(&mut s, "violations", self.violations.join(", "));
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct FinexpOut {
    pub schema: u32,
    pub group: String,
    pub found: bool,
    pub truncated: bool,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_rep: Option<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing_fraction: Option<Ratio>,
}

impl TextRender for FinexpOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "found", self.found);
        if self.truncated {
            kv(&mut s, "truncated", true);
        }
        kv(&mut s, "epsilon", self.epsilon);
        if let (Some(h), Some(ix)) = (&self.subgroup, self.index) {
            kv(&mut s, "subgroup", list(h));
            kv(&mut s, "index", ix);
        }
        if let (Some(rep), Some(c)) = (self.coset_rep, &self.coset) {
            kv(&mut s, "coset rep", rep);
            kv(&mut s, "coset", list(c));
        }
        if let Some(d) = self.delta {
            kv(&mut s, "delta", d);
        }
        if let Some(m) = self.missing_fraction {
            kv(&mut s, "missing fraction", m);
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct BestPfreeOut {
    pub method: PfreeMethod,
    pub size: usize,
    pub density: Ratio,
    pub optimal: bool,
    pub elements: Vec<usize>,
}

#[derive(Serialize)]
pub struct TripleWitnessOut {
    pub subgroup_order: usize,
    pub index: usize,
    pub density: Ratio,
    pub missing: Elem,
}

#[derive(Serialize)]
pub struct ReportOut {
    pub schema: u32,
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    pub perfect: bool,
    pub quasirandom_degree: u32,
    pub degrees: Vec<u32>,
    pub best_pfree: BestPfreeOut,
    pub min_proper_subgroup_index: Option<usize>,
    pub min_nonperfect_subgroup_index: Option<usize>,
    pub triple_witness: Option<TripleWitnessOut>,
    pub notes: Vec<String>,
}

impl TextRender for ReportOut {
    fn text(&self) -> String {
        let mut s = String::new();
        kv(&mut s, "group", &self.group);
        kv(&mut s, "order", self.order);
        kv(&mut s, "exponent", self.exponent);
        kv(&mut s, "perfect", self.perfect);
        kv(&mut s, "quasirandom degree", self.quasirandom_degree);
        let ds: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        kv(&mut s, "degrees", format!("[{}]", ds.join(", ")));
        kv(
            &mut s,
            "best product-free",
            format!(
                "size {} (density {}, {}{})",
                self.best_pfree.size,
                self.best_pfree.density,
                method_name(self.best_pfree.method),
                if self.best_pfree.optimal { ", optimal" } else { "" }
            ),
        );
        match self.min_proper_subgroup_index {
            Some(ix) => kv(&mut s, "min proper subgroup index", ix),
            None => kv(&mut s, "min proper subgroup index", "none"),
        }
        match self.min_nonperfect_subgroup_index {
            Some(ix) => kv(&mut s, "min non-perfect subgroup index", ix),
            None => kv(&mut s, "min non-perfect subgroup index", "none"),
        }
        match &self.triple_witness {
            Some(w) => kv(
                &mut s,
                "triple witness",
                format!(
                    "subgroup of order {} (index {}, density {}), H³ misses {}",
                    w.subgroup_order, w.index, w.density, w.missing
                ),
            ),
            None => kv(&mut s, "triple witness", "none"),
        }
        for note in &self.notes {
            kv(&mut s, "note", note);
        }
        s.pop();
        s
    }
}

#[derive(Serialize)]
pub struct SweepOut {
    pub schema: u32,
    pub rows: Vec<SweepRow>,
}

impl TextRender for SweepOut {
    fn text(&self) -> String {
        let mut table: Vec<[String; 8]> = vec![[
            "spec".into(),
            "order".into(),
            "exponent".into(),
            "perfect".into(),
            "d".into(),
            "pfree".into(),
            "density".into(),
            "error".into(),
        ]];
        let opt = |o: Option<String>| o.unwrap_or_else(|| "-".into());
        for r in &self.rows {
            table.push([
                r.spec.clone(),
                opt(r.order.map(|v| v.to_string())),
                opt(r.exponent.map(|v| v.to_string())),
                opt(r.perfect.map(|v| v.to_string())),
                opt(r.d.map(|v| v.to_string())),
                opt(r.pfree_size.map(|v| v.to_string())),
                opt(r.pfree_density.map(|v| v.to_string())),
                opt(r.error.clone()),
            ]);
        }
        let mut widths = [0usize; 8];
        for row in &table {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut s = String::new();
        for row in &table {
            let cells: Vec<String> = row.iter().enumerate().map(|(i, c)| format!("{:<w$}", c, w = widths[i])).collect();
            s.push_str(cells.join("  ").trim_end());
            s.push('\n');
        }
        s.pop();
        s
    }
}
