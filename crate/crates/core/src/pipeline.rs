//! The full computation: curve, critical cords, boundary values, framing
//! change and simplification.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Tolerances;
use crate::curve::KnotCurve;
use crate::energy::{assign_labels, diagonal_data, find_critical_points, CriticalPoint};
use crate::error::{CordError, Result};
use crate::flow::{Conventions, FlowContext, FlowTrace};
use crate::framing::Framing;
use crate::genericity::{genericity_check, perturb_curve, perturb_spec, Perturbation};
use crate::ring::{framing_transform, AlgebraElement, Generator, Presentation, RING_DESCRIPTOR};
use crate::simplify::simplify;
use crate::spec::{build_curve, build_framing, BraidMeta, KnotSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TargetFraming {
    Blackboard,
    #[default]
    Seifert,
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub tol: Tolerances,
    pub seed: u64,
    pub max_perturb: usize,
    pub framing: TargetFraming,
    pub conventions: Conventions,
    /// Directory for per-cord flow traces, written as JSON.
    pub trace_dir: Option<PathBuf>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        let tol = Tolerances::default();
        ComputeOptions {
            tol,
            seed: 0,
            max_perturb: tol.max_perturb,
            framing: TargetFraming::Seifert,
            conventions: Conventions::default(),
            trace_dir: None,
        }
    }
}

impl ComputeOptions {
    pub fn seed_for(&self, spec: &KnotSpec) -> u64 {
        spec.seed.unwrap_or(self.seed)
    }
}

/// Curve, framing and critical cords of one (possibly perturbed) spec.
pub struct Analysis {
    pub spec: KnotSpec,
    pub curve: KnotCurve,
    pub meta: Option<BraidMeta>,
    pub framing: Framing,
    pub linking_number: i64,
    pub critical: Vec<CriticalPoint>,
    pub perturbation: Option<Perturbation>,
}

impl Analysis {
    pub fn build(spec: &KnotSpec, tol: &Tolerances) -> Result<Self> {
        Self::build_perturbed(spec, tol, None)
    }

    pub fn build_perturbed(
        spec: &KnotSpec,
        tol: &Tolerances,
        perturbation: Option<Perturbation>,
    ) -> Result<Self> {
        let (spec, curve, meta) = match perturbation {
            None => {
                let (c, m) = build_curve(spec, tol)?;
                (spec.clone(), c, m)
            }
            Some(p) => {
                let (base, _) = build_curve(spec, tol)?;
                let moved = perturb_spec(spec, &p, base.length());
                let (c, m) = build_curve(&moved, tol)?;
                let mut bump = p;
                let c = loop {
                    match perturb_curve(&c, &bump, tol) {
                        Ok(c) => break c,
                        Err(CordError::NonEmbedded(..) | CordError::DegenerateSpec(_))
                            if bump.bump.iter().any(|x| x.abs() > 1e-12) =>
                        {
                            bump = bump.shrunk()
                        }
                        Err(e) => return Err(e),
                    }
                };
                (moved, c, m)
            }
        };
        let framing = build_framing(&spec, &curve)?;
        let linking_number = framing.linking_number(&curve)?;
        let mut critical = find_critical_points(&curve, tol)?;
        assign_labels(&curve, &mut critical, meta.as_ref());
        Ok(Analysis {
            spec,
            curve,
            meta,
            framing,
            linking_number,
            critical,
            perturbation,
        })
    }

    pub fn counts(&self) -> CriticalCounts {
        let n = |i| self.critical.iter().filter(|c| c.index == i).count();
        CriticalCounts {
            index0: n(0) + 1,
            index1: n(1) + 1,
            index2: n(2),
        }
    }

    pub fn flow_context(&self, tol: &Tolerances, conventions: Conventions) -> FlowContext<'_> {
        FlowContext::new(&self.curve, &self.framing, &self.critical, tol, conventions)
    }
}

/// Critical cord counts including the diagonal `m` (index 0) and `M`
/// (index 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalCounts {
    pub index0: usize,
    pub index1: usize,
    pub index2: usize,
}

impl CriticalCounts {
    pub fn euler(&self) -> i64 {
        self.index0 as i64 - self.index1 as i64 + self.index2 as i64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Boundary {
    pub label: String,
    pub value: String,
    /// The unstable direction did not move the start point; `k₊` is then a
    /// conventional choice.
    pub vertical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub framing: TargetFraming,
    pub lk: i64,
    pub critical_points: CriticalCounts,
    pub seed: u64,
    pub attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<Perturbation>,
    pub tolerances: Tolerances,
    pub conventions: Conventions,
    /// `D(k)` for every index-1 cord in the computation framing.
    pub boundaries: Vec<Boundary>,
}

pub struct CordAlgebra {
    /// Boundary values in the computation (blackboard) framing.
    pub raw: Presentation,
    /// After the change to the target framing, before simplification.
    pub transformed: Presentation,
    pub presentation: Presentation,
    pub metadata: Metadata,
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    ring: &'a str,
    generators: Vec<String>,
    relations: Vec<String>,
    metadata: &'a Metadata,
}

impl CordAlgebra {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PresentationJson {
            ring: RING_DESCRIPTOR,
            generators: self
                .presentation
                .generators
                .iter()
                .map(ToString::to_string)
                .collect(),
            relations: self.presentation.relation_strings(),
            metadata: &self.metadata,
        })
        .expect("presentation serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "framing {:?}, lk {}, critical points {}/{}/{}\n",
            self.metadata.framing,
            self.metadata.lk,
            self.metadata.critical_points.index0,
            self.metadata.critical_points.index1,
            self.metadata.critical_points.index2
        );
        for b in &self.metadata.boundaries {
            out += &format!("D({}) = {}\n", b.label, b.value);
        }
        out += &format!("Cord = {}", self.presentation);
        out
    }
}

/// Both flows of one index-1 cord.
#[derive(Serialize)]
pub struct BoundaryTraces {
    pub label: String,
    pub plus: FlowTrace,
    pub minus: FlowTrace,
    pub value: String,
}

/// Label, boundary, whether the unstable direction was vertical, and the
/// traces.
type BoundaryValue = (String, AlgebraElement, bool, Option<BoundaryTraces>);

fn boundary_values(analysis: &Analysis, opts: &ComputeOptions) -> Result<Vec<BoundaryValue>> {
    let ctx = analysis.flow_context(&opts.tol, opts.conventions);
    let saddles: Vec<&CriticalPoint> = analysis.critical.iter().filter(|c| c.index == 1).collect();
    saddles
        .par_iter()
        .map(|k| {
            let (_, _, vertical) = ctx.select_k_pm(k)?;
            let (plus, minus) = ctx.boundary_traces(k)?;
            let d = &plus.value() - &minus.value();
            let traces = opts.trace_dir.as_ref().map(|_| BoundaryTraces {
                label: k.label.clone(),
                value: d.to_string(),
                plus,
                minus,
            });
            Ok((k.label.clone(), d, vertical, traces))
        })
        .collect()
}

fn compute_once(
    spec: &KnotSpec,
    opts: &ComputeOptions,
    perturbation: Option<Perturbation>,
) -> Result<CordAlgebra> {
    let tol = &opts.tol;
    let analysis = Analysis::build_perturbed(spec, tol, perturbation)?;
    genericity_check(&analysis.curve, &analysis.framing, &analysis.critical, tol).into_result()?;
    let mut values = boundary_values(&analysis, opts)?;
    values.push((
        "M".to_string(),
        diagonal_data().maximum_boundary,
        false,
        None,
    ));
    if let Some(dir) = &opts.trace_dir {
        std::fs::create_dir_all(dir)?;
        for (label, _, _, traces) in &values {
            if let Some(t) = traces {
                let f = std::fs::File::create(dir.join(format!("{label}.json")))?;
                serde_json::to_writer_pretty(std::io::BufWriter::new(f), t)?;
            }
        }
    }
    let generators: Vec<Generator> = analysis
        .critical
        .iter()
        .filter(|c| c.index == 0)
        .map(|c| Generator::new(c.label.as_str()))
        .collect();
    let relations: Vec<AlgebraElement> = values
        .iter()
        .filter(|v| !v.1.is_zero())
        .map(|v| v.1.clone())
        .collect();
    let raw = Presentation::new(generators, relations)?;
    let transformed = match opts.framing {
        TargetFraming::Blackboard => raw.clone(),
        TargetFraming::Seifert => framing_transform(
            &raw,
            analysis.linking_number as i32,
            &analysis.spec.seifert_twists,
        ),
    };
    let presentation = simplify(&transformed);
    let metadata = Metadata {
        framing: opts.framing,
        lk: analysis.linking_number,
        critical_points: analysis.counts(),
        seed: opts.seed_for(spec),
        attempts: 0,
        perturbation,
        tolerances: *tol,
        conventions: opts.conventions,
        boundaries: values
            .iter()
            .map(|(label, d, vertical, _)| Boundary {
                label: label.clone(),
                value: d.to_string(),
                vertical: *vertical,
            })
            .collect(),
    };
    Ok(CordAlgebra {
        raw,
        transformed,
        presentation,
        metadata,
    })
}

/// Runs the pipeline, perturbing the input and retrying up to
/// `max_perturb` times when the configuration is not generic.
pub fn compute_cord_algebra(spec: &KnotSpec, opts: &ComputeOptions) -> Result<CordAlgebra> {
    let seed = opts.seed_for(spec);
    let mut last = String::new();
    for attempt in 0..=opts.max_perturb {
        let perturbation = (attempt > 0).then(|| Perturbation::seeded(seed, attempt, &opts.tol));
        match compute_once(spec, opts, perturbation) {
            Ok(mut r) => {
                r.metadata.attempts = attempt + 1;
                return Ok(r);
            }
            Err(e) if e.is_genericity() => last = e.to_string(),
            Err(e) => return Err(e),
        }
    }
    Err(CordError::GenericityExhausted(opts.max_perturb, last))
}
