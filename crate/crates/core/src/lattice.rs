//! Generator sets, word-ball enumeration and census statistics.
//!
//! A word ball is grown breadth-first: layer `k + 1` is every product of a
//! layer-`k` element with a generator, kept only if its projective class is
//! new. Products are computed in parallel but inserted in a fixed order, so
//! the ball (and everything derived from it) does not depend on the number
//! of worker threads.
//!
//! All Γ-infima derived here (systole, minimal trace, `t_∞`, `c_m`) are taken
//! over a finite subset of Γ and are therefore one-sided.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{GroupElement, SquareMatrix};
use crate::isometry::{self, IsometryKind};
use crate::siegel::{act, distance, Cusp, SiegelPoint};

/// Largest word length accepted by [`word_ball`].
pub const MAX_WORD_LENGTH: usize = 12;
/// Default ball-size cap.
pub const DEFAULT_CAP: usize = 1_000_000;
/// Resolution at which length and trace spectra are deduplicated.
pub const SPECTRUM_RESOLUTION: f64 = 1e-9;
/// `|tr| > n + 1 + TRACE_TOL` places an element in `S_Γ`.
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_tol")]
    pub membership: f64,
    #[serde(default = "default_tol")]
    pub dedup: f64,
}

fn default_tol() -> f64 {
    1e-8
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            membership: default_tol(),
            dedup: default_tol(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub matrix: SquareMatrix,
}

/// On-disk lattice description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub n: usize,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, rename = "designatedCusp", alias = "cusp")]
    pub cusp: Option<Cusp>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug)]
pub struct NamedGenerator {
    pub name: String,
    pub element: GroupElement,
}

/// Validated generator set, closed under formal inversion.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub n: usize,
    pub generators: Vec<NamedGenerator>,
    pub cusp: Option<Cusp>,
    pub tolerances: Tolerances,
}

impl LatticeSpec {
    /// Validates every matrix and appends `name^-1` for each generator.
    pub fn from_document(doc: LatticeDocument) -> Result<Self> {
        if doc.generators.is_empty() {
            return Err(Error::InvalidInput("lattice has no generators".into()));
        }
        if doc.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if doc.cusp == Some(Cusp::Zero) {
            return Err(Error::InvalidInput("the designated cusp must be \"infinity\"".into()));
        }
        let tol = doc.tolerances.membership;
        let mut generators = Vec::with_capacity(2 * doc.generators.len());
        for entry in &doc.generators {
            if entry.matrix.dim() != doc.n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: doc.n + 1,
                    found: entry.matrix.dim(),
                });
            }
            let element = GroupElement::new(entry.matrix.clone(), tol).map_err(|e| match e {
                Error::NotAMember { residual, tol, .. } => Error::NotAMember {
                    name: Some(entry.name.clone()),
                    residual,
                    tol,
                },
                other => other,
            })?;
            generators.push(NamedGenerator {
                name: entry.name.clone(),
                element,
            });
        }
        let inverses: Vec<NamedGenerator> = generators
            .iter()
            .map(|g| NamedGenerator {
                name: format!("{}^-1", g.name),
                element: g.element.inverse(),
            })
            .collect();
        generators.extend(inverses);
        Ok(Self {
            n: doc.n,
            generators,
            cusp: doc.cusp,
            tolerances: doc.tolerances,
        })
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    /// Human-readable word, e.g. `"t*s^-1"`; the empty word is `"1"`.
    pub fn spell(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter().map(|&i| self.generators[i].name.as_str()).collect::<Vec<_>>().join("*")
    }
}

pub fn load_lattice(document: &str) -> Result<LatticeSpec> {
    LatticeSpec::from_document(serde_json::from_str(document)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallOptions {
    pub dedup_tol: f64,
    pub cap: usize,
    /// Worker threads for product evaluation; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BallOptions {
    fn default() -> Self {
        Self {
            dedup_tol: default_tol(),
            cap: DEFAULT_CAP,
            threads: None,
        }
    }
}

impl BallOptions {
    pub fn for_spec(spec: &LatticeSpec) -> Self {
        Self {
            dedup_tol: spec.tolerances.dedup,
            ..Self::default()
        }
    }
}

/// Projective-class index. Each normal form is projected to a weighted sum
/// of its real coordinates whose Lipschitz constant (w.r.t. Frobenius) is at
/// most `weight_norm`; two classes within Frobenius distance `radius` then
/// land in equal or adjacent buckets of width `radius · weight_norm`.
#[derive(Clone, Debug)]
struct DedupIndex {
    weights: Vec<f64>,
    width: f64,
    radius: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl DedupIndex {
    fn new(dim: usize, dedup_tol: f64) -> Self {
        const PHI: f64 = 0.618_033_988_749_894_9;
        let weights: Vec<f64> = (0..2 * dim * dim).map(|k| 0.5 + ((k + 1) as f64 * PHI).fract()).collect();
        let weight_norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        let radius = 10.0 * dedup_tol;
        Self {
            weights,
            width: radius * weight_norm,
            radius,
            buckets: HashMap::new(),
        }
    }

    fn bucket(&self, m: &SquareMatrix) -> i64 {
        let p: f64 = m
            .entries()
            .iter()
            .enumerate()
            .map(|(k, z)| self.weights[2 * k] * z.re + self.weights[2 * k + 1] * z.im)
            .sum();
        (p / self.width).floor() as i64
    }

    fn find(&self, elements: &[GroupElement], m: &SquareMatrix) -> Option<usize> {
        let b = self.bucket(m);
        (b - 1..=b + 1)
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
            .filter(|&i| elements[i].normal_form().frobenius_distance(m) < self.radius)
            .min()
    }

    fn insert(&mut self, m: &SquareMatrix, id: usize) {
        self.buckets.entry(self.bucket(m)).or_default().push(id);
    }

    fn remove(&mut self, m: &SquareMatrix, id: usize) {
        let b = self.bucket(m);
        if let Some(v) = self.buckets.get_mut(&b) {
            v.retain(|&i| i != id);
            if v.is_empty() {
                self.buckets.remove(&b);
            }
        }
    }
}

/// Breadth-first word ball. Element `0` is the identity; every element keeps
/// a shortest word witnessing it.
#[derive(Clone, Debug)]
pub struct WordBall {
    n: usize,
    elements: Vec<GroupElement>,
    completed_length: usize,
    layer_start: usize,
    index: DedupIndex,
}

/// Where an interrupted enumeration stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResumeToken {
    pub completed_length: usize,
    pub element_count: usize,
    pub target_length: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum EnumerationError {
    #[error("word length {0} outside 1..={MAX_WORD_LENGTH}")]
    InvalidLength(usize),
    #[error("ball cap {cap} exceeded while building length {}; complete through length {}", resume.completed_length + 1, resume.completed_length)]
    CapExceeded {
        cap: usize,
        partial: Box<WordBall>,
        resume: ResumeToken,
    },
    #[error(transparent)]
    Other(#[from] Error),
}

impl WordBall {
    /// The ball of radius `0`: just the identity.
    pub fn new(spec: &LatticeSpec, dedup_tol: f64) -> Self {
        let id = GroupElement::identity(spec.n);
        let mut index = DedupIndex::new(spec.n + 1, dedup_tol);
        index.insert(id.normal_form(), 0);
        Self {
            n: spec.n,
            elements: vec![id],
            completed_length: 0,
            layer_start: 0,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn completed_length(&self) -> usize {
        self.completed_length
    }

    /// Index of a ball element projectively equal to `m`, if any.
    pub fn position(&self, m: &SquareMatrix) -> Option<usize> {
        let nf = crate::hermitian::projective_normalize(m).ok()?;
        self.index.find(&self.elements, &nf)
    }

    pub fn word_length(&self, i: usize) -> usize {
        self.elements[i].word().map_or(0, <[usize]>::len)
    }

    /// Grows the ball to `target` layers. On cap overflow the layer being
    /// built is discarded and the ball is returned in the error.
    pub fn extend_to(mut self, spec: &LatticeSpec, target: usize, opts: &BallOptions) -> std::result::Result<Self, EnumerationError> {
        if target > MAX_WORD_LENGTH {
            return Err(EnumerationError::InvalidLength(target));
        }
        let pool = match opts.threads {
            Some(k) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(k.max(1))
                    .build()
                    .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
            ),
            None => None,
        };
        while self.completed_length < target {
            let frontier = &self.elements[self.layer_start..];
            let expand = || -> Vec<Vec<GroupElement>> {
                frontier
                    .par_iter()
                    .map(|g| {
                        let word = g.word().unwrap_or(&[]);
                        spec.generators
                            .iter()
                            .enumerate()
                            .map(|(j, h)| {
                                let mut w = word.to_vec();
                                w.push(j);
                                g.compose(&h.element).with_word(w)
                            })
                            .collect()
                    })
                    .collect()
            };
            let products = match &pool {
                Some(p) => p.install(expand),
                None => expand(),
            };
            let before = self.elements.len();
            for candidate in products.into_iter().flatten() {
                if self.index.find(&self.elements, candidate.normal_form()).is_some() {
                    continue;
                }
                if self.elements.len() >= opts.cap {
                    self.rollback(before);
                    let resume = ResumeToken {
                        completed_length: self.completed_length,
                        element_count: self.elements.len(),
                        target_length: target,
                    };
                    return Err(EnumerationError::CapExceeded {
                        cap: opts.cap,
                        partial: Box::new(self),
                        resume,
                    });
                }
                let id = self.elements.len();
                self.index.insert(candidate.normal_form(), id);
                self.elements.push(candidate);
            }
            self.layer_start = before;
            self.completed_length += 1;
        }
        Ok(self)
    }

    fn rollback(&mut self, len: usize) {
        for id in (len..self.elements.len()).rev() {
            let nf = self.elements[id].normal_form().clone();
            self.index.remove(&nf, id);
        }
        self.elements.truncate(len);
    }

    /// Serialisable snapshot (words only; matrices are recomputed on load).
    pub fn to_document(&self, spec: &LatticeSpec, dedup_tol: f64) -> PartialBallDocument {
        PartialBallDocument {
            n: self.n,
            dedup_tol,
            generators: spec.generator_names().into_iter().map(String::from).collect(),
            completed_length: self.completed_length,
            words: self.elements.iter().map(|g| g.word().unwrap_or(&[]).to_vec()).collect(),
        }
    }

    /// Rebuilds a ball from a snapshot taken with the same generator set.
    pub fn from_document(spec: &LatticeSpec, doc: &PartialBallDocument) -> Result<Self> {
        let names: Vec<&str> = spec.generator_names();
        if doc.n != spec.n || doc.generators.iter().map(String::as_str).ne(names.iter().copied()) {
            return Err(Error::InvalidInput("snapshot was taken with a different generator set".into()));
        }
        let mut ball = Self::new(spec, doc.dedup_tol);
        let mut layer_start = 1;
        for word in doc.words.iter().skip(1) {
            if word.is_empty() || word.len() > doc.completed_length || word.iter().any(|&j| j >= spec.generators.len()) {
                return Err(Error::InvalidInput(format!("bad word {word:?} in snapshot")));
            }
            let mut g = spec.generators[word[0]].element.clone();
            for &j in &word[1..] {
                g = g.compose(&spec.generators[j].element);
            }
            let g = g.with_word(word.clone());
            if word.len() < doc.completed_length {
                layer_start = ball.elements.len() + 1;
            }
            let id = ball.elements.len();
            ball.index.insert(g.normal_form(), id);
            ball.elements.push(g);
        }
        ball.completed_length = doc.completed_length;
        ball.layer_start = if doc.completed_length == 0 { 0 } else { layer_start };
        Ok(ball)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartialBallDocument {
    pub n: usize,
    pub dedup_tol: f64,
    pub generators: Vec<String>,
    pub completed_length: usize,
    pub words: Vec<Vec<usize>>,
}

/// Word ball of radius `length` (`1 ≤ length ≤ 12`).
pub fn word_ball(spec: &LatticeSpec, length: usize, opts: &BallOptions) -> std::result::Result<WordBall, EnumerationError> {
    if length == 0 || length > MAX_WORD_LENGTH {
        return Err(EnumerationError::InvalidLength(length));
    }
    WordBall::new(spec, opts.dedup_tol).extend_to(spec, length, opts)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub elliptic: usize,
    pub parabolic: usize,
    pub hyperbolic: usize,
    pub indeterminate: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IndeterminateEntry {
    pub word: String,
    pub candidates: [IsometryKind; 2],
    pub margin: f64,
}

/// Cusp statistics at `q_∞`. Both minima run over a finite subset of Γ, so
/// each is an upper bound for the corresponding Γ-infimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CuspStats {
    pub t_min_vertical: Option<f64>,
    pub c_min_non_stabilizer: Option<f64>,
    /// `t·c/2`; an empirical estimate of the cusp depth, never a certificate.
    pub depth_estimate: Option<f64>,
    pub depth_estimate_is_empirical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WordBallCensus {
    pub max_length: usize,
    pub element_count: usize,
    pub counts: ClassCounts,
    pub hyperbolic_length_spectrum: Vec<f64>,
    pub trace_spectrum: Vec<f64>,
    pub sys_upper_estimate: Option<f64>,
    pub lambda_estimate: Option<f64>,
    pub cusp_stats: Option<CuspStats>,
    pub indeterminate: Vec<IndeterminateEntry>,
    pub one_sidedness: Vec<String>,
}

/// Sorts and merges values closer than [`SPECTRUM_RESOLUTION`].
fn dedup_spectrum(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(&last) if v - last <= SPECTRUM_RESOLUTION => {}
            _ => out.push(v),
        }
    }
    out
}

pub fn one_sidedness_flags() -> Vec<String> {
    [
        "sysUpperEstimate is an upper bound for the systole: a minimum over a finite word ball",
        "lambdaEstimate is an upper bound for the minimal trace over S_Γ: a minimum over a finite word ball",
        "tMinVertical is an upper bound for the shortest vertical translation",
        "cMinNonStabilizer is an upper bound for the minimal |c| over elements not fixing the cusp",
        "depthEstimate = tMinVertical·cMinNonStabilizer/2 is an empirical estimate, not a certificate",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Classifies every element and folds the results into a census.
pub fn census(ball: &WordBall, spec: &LatticeSpec) -> WordBallCensus {
    let n = ball.n();
    let classes: Vec<Result<crate::isometry::IsometryClass>> = ball
        .elements()
        .par_iter()
        .map(|g| isometry::classify(g, isometry::DEFAULT_TOL))
        .collect();
    let mut counts = ClassCounts::default();
    let mut lengths = Vec::new();
    let mut traces = Vec::new();
    let mut indeterminate = Vec::new();
    for (g, class) in ball.elements().iter().zip(&classes) {
        match class {
            Ok(c) => match c.kind {
                IsometryKind::Elliptic => counts.elliptic += 1,
                IsometryKind::Parabolic => counts.parabolic += 1,
                IsometryKind::Hyperbolic => {
                    counts.hyperbolic += 1;
                    lengths.push(isometry::length_from_modulus(c.r));
                }
            },
            Err(Error::Indeterminate { first, second, margin }) => {
                counts.indeterminate += 1;
                indeterminate.push(IndeterminateEntry {
                    word: spec.spell(g.word().unwrap_or(&[])),
                    candidates: [*first, *second],
                    margin: *margin,
                });
            }
            Err(_) => counts.indeterminate += 1,
        }
        let tr = isometry::abs_trace(g);
        if tr > (n + 1) as f64 + TRACE_TOL {
            traces.push(tr);
        }
    }
    let hyperbolic_length_spectrum = dedup_spectrum(lengths);
    let trace_spectrum = dedup_spectrum(traces);
    WordBallCensus {
        max_length: ball.completed_length(),
        element_count: ball.len(),
        counts,
        sys_upper_estimate: hyperbolic_length_spectrum.first().copied(),
        lambda_estimate: trace_spectrum.first().copied(),
        hyperbolic_length_spectrum,
        trace_spectrum,
        cusp_stats: (spec.cusp == Some(Cusp::Infinity)).then(|| cusp_stats(ball)),
        indeterminate,
        one_sidedness: one_sidedness_flags(),
    }
}

/// Shortest vertical translation and smallest `|c|` of a non-stabiliser in
/// the ball, both relative to `q_∞`.
pub fn cusp_stats(ball: &WordBall) -> CuspStats {
    let mut t_min: Option<f64> = None;
    let mut c_min: Option<f64> = None;
    for g in ball.elements() {
        if isometry::fixes_infinity(g, 1e-12) {
            if let Some(t) = isometry::vertical_translation_length(g, 1e-8) {
                t_min = Some(t_min.map_or(t.abs(), |m| m.min(t.abs())));
            }
        } else {
            let c = isometry::c_entry(g).norm();
            c_min = Some(c_min.map_or(c, |m| m.min(c)));
        }
    }
    CuspStats {
        t_min_vertical: t_min,
        c_min_non_stabilizer: c_min,
        depth_estimate: t_min.zip(c_min).map(|(t, c)| 0.5 * t * c),
        depth_estimate_is_empirical: true,
    }
}

/// Ball elements that fix `q_∞`.
pub fn stabilizer_elements(ball: &WordBall) -> Vec<GroupElement> {
    ball.elements()
        .iter()
        .filter(|g| isometry::fixes_infinity(g, 1e-12))
        .cloned()
        .collect()
}

/// `true` when some element moves `p` by less than `rho`. A `false` answer
/// only means no witness was found in `stabilizers`.
pub fn thin_membership(p: &SiegelPoint, stabilizers: &[GroupElement], rho: f64) -> bool {
    stabilizers.iter().any(|g| {
        act(g, p)
            .and_then(|q| distance(p, &q))
            .is_ok_and(|d| d < rho)
    })
}

/// Matrix of the translation `(0, t)` at `q_∞` for an `n`-ball; convenience
/// for building lattice documents.
pub fn vertical_translation_matrix(n: usize, t: f64) -> SquareMatrix {
    let mut m = SquareMatrix::identity(n + 1);
    m.set(0, n, Complex64::new(0.0, -0.5 * t));
    m
}
