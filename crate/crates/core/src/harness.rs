//! Competitive-analysis experiments: LRUC against the exact offline optimum.
//!
//! Ratios and bounds are exact rationals; nothing in the pass/fail path goes
//! through floating point. The additive constant of the competitive inequality
//! is taken to be zero.

use std::io::Write;
use std::ops::RangeInclusive;
use std::time::Duration;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{self, EdgeStream, FamilyTag, GenError, OrderStrategy, StreamError};
use crate::lruc::{color_stream, LrucError};
use crate::oracle::{self, OracleError, SearchBudget};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Lruc(#[from] LrucError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Where the offline optimum comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Exhaustive search.
    Exact,
    /// Closed form when the family has one, exhaustive search otherwise.
    #[serde(alias = "closed_form")]
    Closed,
    /// No optimum; the report carries no ratio.
    Skip,
}

impl OracleMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(OracleMode::Exact),
            "closed" | "closed_form" => Some(OracleMode::Closed),
            "skip" => Some(OracleMode::Skip),
            _ => None,
        }
    }
}

/// The theorems on LRUC's competitive ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremSpec {
    LinePath,
    Tree,
    Star,
    Cycle,
    Wheel,
    Complete,
}

impl TheoremSpec {
    pub const ALL: [TheoremSpec; 6] = [
        TheoremSpec::LinePath,
        TheoremSpec::Tree,
        TheoremSpec::Star,
        TheoremSpec::Cycle,
        TheoremSpec::Wheel,
        TheoremSpec::Complete,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            TheoremSpec::LinePath => "T1-line",
            TheoremSpec::Tree => "T1-tree",
            TheoremSpec::Star => "T1-star",
            TheoremSpec::Cycle => "T2-cycle",
            TheoremSpec::Wheel => "T3-wheel",
            TheoremSpec::Complete => "T4-complete",
        }
    }

    pub fn parse(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.id() == id)
    }

    pub fn for_family(family: &FamilyTag) -> Option<Self> {
        match family {
            FamilyTag::Path { .. } => Some(TheoremSpec::LinePath),
            FamilyTag::Tree { .. } => Some(TheoremSpec::Tree),
            FamilyTag::Star { .. } => Some(TheoremSpec::Star),
            FamilyTag::Cycle { .. } => Some(TheoremSpec::Cycle),
            FamilyTag::Wheel { .. } => Some(TheoremSpec::Wheel),
            FamilyTag::Complete { .. } => Some(TheoremSpec::Complete),
            FamilyTag::CompleteBipartite { .. } => None,
        }
    }

    pub fn min_n(&self) -> usize {
        match self {
            TheoremSpec::LinePath
            | TheoremSpec::Tree
            | TheoremSpec::Star
            | TheoremSpec::Complete => 2,
            TheoremSpec::Cycle => 4,
            TheoremSpec::Wheel => 8,
        }
    }

    /// Competitive ratio claimed for `n` vertices, if `n` is in range.
    pub fn bound(&self, n: usize) -> Option<Ratio<u64>> {
        if n < self.min_n() {
            return None;
        }
        let n = n as u64;
        Some(match self {
            TheoremSpec::LinePath | TheoremSpec::Tree | TheoremSpec::Star => Ratio::from_integer(1),
            TheoremSpec::Cycle => Ratio::from_integer(2) - Ratio::new(2, n),
            TheoremSpec::Wheel => Ratio::new(n - 1, 3),
            TheoremSpec::Complete => Ratio::from_integer(n - 1),
        })
    }

    /// Ranges that fit the default search budget.
    pub fn default_range(&self) -> RangeInclusive<usize> {
        match self {
            TheoremSpec::LinePath => 2..=10,
            TheoremSpec::Tree | TheoremSpec::Star => 3..=10,
            TheoremSpec::Cycle => 4..=9,
            TheoremSpec::Wheel => 8..=9,
            TheoremSpec::Complete => 4..=6,
        }
    }

    fn family(&self, n: usize) -> FamilyTag {
        match self {
            TheoremSpec::LinePath => FamilyTag::Path { n },
            TheoremSpec::Tree => FamilyTag::Tree { n, seed: 0 },
            TheoremSpec::Star => FamilyTag::Star { n },
            TheoremSpec::Cycle => FamilyTag::Cycle { n },
            TheoremSpec::Wheel => FamilyTag::Wheel { n },
            TheoremSpec::Complete => FamilyTag::Complete { n },
        }
    }
}

/// One online-versus-offline comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub family: Option<FamilyTag>,
    pub n: usize,
    pub order: OrderStrategy,
    pub seed: Option<u64>,
    pub colors_online: usize,
    pub rc: Option<usize>,
    pub ratio: Option<Ratio<u64>>,
    pub bound: Option<Ratio<u64>>,
    pub within_bound: Option<bool>,
    pub rainbow_valid: bool,
}

/// Flat row in the documented CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub n: usize,
    pub params: String,
    pub order: String,
    pub seed: Option<u64>,
    pub colors_online: usize,
    pub rc: Option<usize>,
    pub ratio_num: Option<u64>,
    pub ratio_den: Option<u64>,
    pub bound_num: Option<u64>,
    pub bound_den: Option<u64>,
    pub within_bound: Option<bool>,
    pub rainbow_valid: bool,
}

impl RatioReport {
    pub fn row(&self) -> ReportRow {
        ReportRow {
            family: self
                .family
                .map_or_else(|| "file".to_string(), |f| f.name().to_string()),
            n: self.n,
            params: self.family.map(|f| f.params()).unwrap_or_default(),
            order: self.order.name().to_string(),
            seed: self.seed,
            colors_online: self.colors_online,
            rc: self.rc,
            ratio_num: self.ratio.map(|r| *r.numer()),
            ratio_den: self.ratio.map(|r| *r.denom()),
            bound_num: self.bound.map(|r| *r.numer()),
            bound_den: self.bound.map(|r| *r.denom()),
            within_bound: self.within_bound,
            rainbow_valid: self.rainbow_valid,
        }
    }
}

/// Colors the stream with LRUC, validates the result and compares it with the
/// offline optimum chosen by `mode`.
pub fn run_instance(
    stream: &EdgeStream,
    mode: OracleMode,
    budget: SearchBudget,
) -> Result<RatioReport, HarnessError> {
    let (state, _) = color_stream(stream.edges().iter().map(|(a, b)| (a.as_str(), b.as_str())))?;
    let coloring = state.finish()?;
    let graph = state.graph();
    let rainbow_valid = oracle::is_rainbow_connected(graph, &coloring)?;
    let family = stream.provenance().family;

    let rc = match mode {
        OracleMode::Skip => None,
        OracleMode::Closed => match family.as_ref().and_then(oracle::rc_closed_form) {
            Some(k) => Some(k),
            None => Some(oracle::rc_exact(graph, budget)?.rc),
        },
        OracleMode::Exact => Some(oracle::rc_exact(graph, budget)?.rc),
    };
    let colors_online = coloring.colors_used();
    let ratio = rc.map(|k| Ratio::new(colors_online as u64, k as u64));
    let bound = family
        .as_ref()
        .and_then(TheoremSpec::for_family)
        .and_then(|t| t.bound(graph.n()));
    let within_bound = match (ratio, bound) {
        (Some(r), Some(b)) => Some(r <= b),
        _ => None,
    };
    Ok(RatioReport {
        family,
        n: graph.n(),
        order: stream.provenance().order,
        seed: stream.provenance().seed,
        colors_online,
        rc,
        ratio,
        bound,
        within_bound,
        rainbow_valid,
    })
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub theorem: TheoremSpec,
    pub rows: Vec<RatioReport>,
    pub passed: bool,
}

/// Runs the theorem's adversarial instance for each `n` against the exact
/// oracle. Passes iff every coloring is rainbow connected and every ratio is
/// within the claimed bound.
pub fn verify_theorem(
    theorem: TheoremSpec,
    n_range: RangeInclusive<usize>,
    budget: SearchBudget,
) -> Result<TheoremReport, HarnessError> {
    if *n_range.start() < theorem.min_n() {
        return Err(GenError::BadParameters(format!(
            "{} holds for n >= {}, range starts at {}",
            theorem.id(),
            theorem.min_n(),
            n_range.start()
        ))
        .into());
    }
    let rows = n_range
        .map(|n| {
            let stream = generators::order_adversarial(&theorem.family(n))?;
            run_instance(&stream, OracleMode::Exact, budget)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let passed = rows
        .iter()
        .all(|r| r.rainbow_valid && r.within_bound == Some(true));
    Ok(TheoremReport {
        theorem,
        rows,
        passed,
    })
}

/// Sweep configuration, read from a flat TOML key-value file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub families: Vec<String>,
    pub n_min: usize,
    pub n_max: usize,
    pub orders: Vec<String>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_oracle")]
    pub oracle: String,
    #[serde(default = "default_budget_edges")]
    pub budget_edges: usize,
    pub budget_seconds: Option<u64>,
    pub out: Option<String>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_oracle() -> String {
    "exact".to_string()
}

fn default_budget_edges() -> usize {
    SearchBudget::default().max_edges
}

fn config_error(field: &str, message: impl Into<String>) -> HarnessError {
    HarnessError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            // The span points into the offending entry; report the key of its line.
            let field = e
                .span()
                .and_then(|s| {
                    let line_start = text[..s.start].rfind('\n').map_or(0, |i| i + 1);
                    let line = text[line_start..].lines().next()?;
                    line.split_once('=').map(|(k, _)| k.trim().to_string())
                })
                .unwrap_or_else(|| "<root>".to_string());
            config_error(&field, message)
        })
    }

    pub fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default().with_max_edges(self.budget_edges);
        if let Some(secs) = self.budget_seconds {
            b = b.with_max_time(Some(Duration::from_secs(secs)));
        }
        b
    }

    pub fn oracle_mode(&self) -> Result<OracleMode, HarnessError> {
        OracleMode::parse(&self.oracle).ok_or_else(|| {
            config_error(
                "oracle",
                format!("expected exact, closed or skip, got {:?}", self.oracle),
            )
        })
    }

    /// Instances in the documented row order: family, then n (and p for
    /// bipartite graphs), then order, then seed. Parameter combinations
    /// outside a family's range are skipped.
    pub fn instances(&self) -> Result<Vec<EdgeStream>, HarnessError> {
        if self.families.is_empty() {
            return Err(config_error("families", "at least one family is required"));
        }
        if self.orders.is_empty() {
            return Err(config_error("orders", "at least one order is required"));
        }
        if self.n_min > self.n_max {
            return Err(config_error(
                "n_min",
                format!("{} exceeds n_max {}", self.n_min, self.n_max),
            ));
        }
        let orders = self
            .orders
            .iter()
            .enumerate()
            .map(|(i, o)| {
                OrderStrategy::parse(o)
                    .map_err(|e| config_error(&format!("orders[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let needs_seeds =
            orders.contains(&OrderStrategy::Random) || self.families.iter().any(|f| f == "tree");
        if needs_seeds && self.seeds.is_empty() {
            return Err(config_error(
                "seeds",
                "random orders and trees need at least one seed",
            ));
        }

        let mut out = Vec::new();
        for (fi, name) in self.families.iter().enumerate() {
            let field = format!("families[{fi}]");
            for n in self.n_min..=self.n_max {
                let shapes: Vec<Option<FamilyTag>> = match name.as_str() {
                    "complete_bipartite" | "bipartite" => (1..=n / 2)
                        .map(|p| FamilyTag::parse(name, None, Some(p), Some(n - p), 0).ok())
                        .collect(),
                    "tree" => vec![None],
                    _ => match FamilyTag::parse(name, Some(n), None, None, 0) {
                        Ok(tag) => vec![Some(tag)],
                        Err(GenError::BadParameters(msg)) if msg.starts_with("unknown family") => {
                            return Err(config_error(&field, msg))
                        }
                        Err(_) => vec![],
                    },
                };
                for shape in shapes {
                    for &order in &orders {
                        if order == OrderStrategy::Adversarial && name.contains("bipartite") {
                            return Err(config_error(
                                &field,
                                "complete_bipartite has no adversarial order",
                            ));
                        }
                        let seeded = order == OrderStrategy::Random || name == "tree";
                        let seeds: Vec<u64> = if seeded { self.seeds.clone() } else { vec![0] };
                        for seed in seeds {
                            let family = match shape {
                                Some(f) => f,
                                None if n >= 2 => FamilyTag::Tree { n, seed },
                                None => continue,
                            };
                            out.push(generators::order_for(&family, order, seed)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Runs every configured instance, in parallel, keeping the instance order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<RatioReport>, HarnessError> {
    let mode = config.oracle_mode()?;
    let budget = config.budget();
    config
        .instances()?
        .par_iter()
        .map(|s| run_instance(s, mode, budget))
        .collect()
}

pub fn write_csv<W: Write>(reports: &[RatioReport], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r.row())?;
    }
    if reports.is_empty() {
        w.write_record([
            "family",
            "n",
            "params",
            "order",
            "seed",
            "colors_online",
            "rc",
            "ratio_num",
            "ratio_den",
            "bound_num",
            "bound_den",
            "within_bound",
            "rainbow_valid",
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adversarial(f: FamilyTag) -> RatioReport {
        let s = generators::order_adversarial(&f).unwrap();
        run_instance(&s, OracleMode::Exact, SearchBudget::default()).unwrap()
    }

    #[test]
    fn cycle_four_meets_its_bound_exactly() {
        let r = adversarial(FamilyTag::Cycle { n: 4 });
        assert_eq!((r.colors_online, r.rc), (3, Some(2)));
        assert_eq!(r.ratio, Some(Ratio::new(3, 2)));
        assert_eq!(r.bound, Some(Ratio::new(3, 2)));
        assert_eq!(r.within_bound, Some(true));
        assert!(r.rainbow_valid);
    }

    #[test]
    fn complete_four() {
        let r = adversarial(FamilyTag::Complete { n: 4 });
        assert_eq!((r.colors_online, r.rc), (3, Some(1)));
        assert_eq!(r.ratio, Some(Ratio::from_integer(3)));
        assert_eq!(r.within_bound, Some(true));
    }

    #[test]
    fn natural_path_has_ratio_one() {
        let s = generators::order_natural(&FamilyTag::Path { n: 6 }).unwrap();
        let r = run_instance(&s, OracleMode::Exact, SearchBudget::default()).unwrap();
        assert_eq!((r.colors_online, r.rc), (5, Some(5)));
        assert_eq!(r.ratio, Some(Ratio::from_integer(1)));
    }

    #[test]
    fn skip_mode_has_no_ratio() {
        let s = generators::order_adversarial(&FamilyTag::Cycle { n: 5 }).unwrap();
        let r = run_instance(&s, OracleMode::Skip, SearchBudget::default()).unwrap();
        assert_eq!((r.rc, r.ratio, r.within_bound), (None, None, None));
        assert_eq!(r.bound, Some(Ratio::new(8, 5)));
    }

    #[test]
    fn theorem_bounds() {
        assert_eq!(TheoremSpec::Cycle.bound(6), Some(Ratio::new(5, 3)));
        assert_eq!(TheoremSpec::Cycle.bound(3), None);
        assert_eq!(TheoremSpec::Wheel.bound(7), None);
        assert_eq!(TheoremSpec::Wheel.bound(9), Some(Ratio::new(8, 3)));
        assert_eq!(TheoremSpec::Complete.bound(5), Some(Ratio::from_integer(4)));
        assert_eq!(TheoremSpec::Star.bound(9), Some(Ratio::from_integer(1)));
        assert_eq!(TheoremSpec::parse("T3-wheel"), Some(TheoremSpec::Wheel));
    }

    #[test]
    fn cycle_theorem_table() {
        let rep = verify_theorem(TheoremSpec::Cycle, 4..=9, SearchBudget::default()).unwrap();
        assert!(rep.passed);
        for r in &rep.rows {
            assert_eq!(
                r.ratio,
                Some(Ratio::new(r.n as u64 - 1, r.n.div_ceil(2) as u64))
            );
        }
        assert!(verify_theorem(TheoremSpec::Cycle, 3..=5, SearchBudget::default()).is_err());
    }

    #[test]
    fn sweep_rows() {
        let cfg = SweepConfig::parse(
            "families = [\"cycle\"]\nn_min = 4\nn_max = 6\norders = [\"adversarial\"]\n",
        )
        .unwrap();
        let rows = sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [4, 5, 6]);

        let seeded = SweepConfig::parse(
            "families = [\"wheel\"]\nn_min = 5\nn_max = 5\norders = [\"random\"]\nseeds = [0, 1]\n",
        )
        .unwrap();
        let a = sweep(&seeded).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a, sweep(&seeded).unwrap());
    }

    #[test]
    fn config_errors_name_the_field() {
        let empty =
            SweepConfig::parse("families = []\nn_min = 4\nn_max = 6\norders = [\"natural\"]\n")
                .unwrap();
        match sweep(&empty) {
            Err(HarnessError::Config { field, .. }) => assert_eq!(field, "families"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_order = SweepConfig::parse(
            "families = [\"path\"]\nn_min = 4\nn_max = 6\norders = [\"sideways\"]\n",
        )
        .unwrap();
        assert!(
            matches!(sweep(&bad_order), Err(HarnessError::Config { field, .. }) if field == "orders[0]")
        );
        let typo =
            SweepConfig::parse("families = [\"path\"]\nn_min = \"four\"\nn_max = 6\norders = []\n");
        assert!(matches!(typo, Err(HarnessError::Config { field, .. }) if field == "n_min"));
    }

    #[test]
    fn csv_columns() {
        let r = adversarial(FamilyTag::Cycle { n: 4 });
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "family,n,params,order,seed,colors_online,rc,ratio_num,ratio_den,bound_num,bound_den,within_bound,rainbow_valid\n\
             cycle,4,,adversarial,,3,2,3,2,3,2,true,true\n"
        );
    }
}
