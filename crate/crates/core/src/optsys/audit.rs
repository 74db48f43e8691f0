use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::liealg::Q;

use super::{
    canonical_form, orbit_invariants, reduce, AdjointGroup, CoeffVector, OrbitInvariant,
    ReductionTrace, DEFAULT_SAMPLES, DEFAULT_SEED,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub reflections: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            reflections: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Matched,
    MatchedWithResidue,
    Unmatched,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleOutcome {
    pub input: CoeffVector,
    pub category: Category,
    /// Items whose orbit contains the input.
    pub equivalent_items: Vec<usize>,
    pub trace: ReductionTrace,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Counts {
    pub matched: usize,
    pub matched_with_residue: usize,
    pub unmatched: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentativeInfo {
    pub item: usize,
    pub name: String,
    pub vector: CoeffVector,
    pub normal_form: CoeffVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub samples: usize,
    pub reflections: bool,
    pub invariants: Vec<OrbitInvariant>,
    /// Both `a2/a1` and `a5/a1` are invariant and some sample of case 1a
    /// keeps a coefficient other than ±1.
    pub case_1a_normalization_refuted: bool,
    pub counts: Counts,
    pub replay_failures: usize,
    pub cases: BTreeMap<String, usize>,
    pub items_hit: BTreeMap<usize, usize>,
    /// Listed items lying in one orbit.
    pub redundant_pairs: Vec<(usize, usize)>,
    pub representatives: Vec<RepresentativeInfo>,
    /// Fixed probe vectors, reduced and classified like samples.
    pub probes: Vec<SampleOutcome>,
}

fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.random_range(-9..=9);
    let d: i64 = rng.random_range(1..=9);
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The `index`-th sample of the stream for `seed`.
pub fn sample_vector(seed: u64, index: u64, dim: usize) -> CoeffVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let v = CoeffVector((0..dim).map(|_| small_rational(&mut rng)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

pub const PROBES: [[i64; 6]; 4] = [
    [1, 0, 0, 0, 1, 0],
    [1, 3, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [1, 2, 3, 4, 5, 6],
];

struct Classifier<'a> {
    g: &'a AdjointGroup,
    reps: &'a [(String, CoeffVector)],
    by_form: BTreeMap<CoeffVector, Vec<usize>>,
    reflections: bool,
}

impl Classifier<'_> {
    fn classify(&self, a: &CoeffVector) -> SampleOutcome {
        let trace = reduce(self.g, self.reps, a, self.reflections);
        let form = canonical_form(self.g, a, self.reflections);
        let items = self.by_form.get(&form).cloned().unwrap_or_default();
        let category = if !items.is_empty() {
            Category::Matched
        } else if trace.case.covered() {
            Category::MatchedWithResidue
        } else {
            Category::Unmatched
        };
        SampleOutcome {
            input: a.clone(),
            category,
            equivalent_items: items,
            trace,
        }
    }
}

/// Reduces `config.samples` random vectors and compares each orbit with
/// the listed representatives.
pub fn audit_optimal_system(
    g: &AdjointGroup,
    reps: &[(String, CoeffVector)],
    config: &AuditConfig,
) -> AuditReport {
    let mut by_form: BTreeMap<CoeffVector, Vec<usize>> = BTreeMap::new();
    let mut representatives = Vec::new();
    for (i, (name, v)) in reps.iter().enumerate() {
        let nf = canonical_form(g, v, config.reflections);
        by_form.entry(nf.clone()).or_default().push(i + 1);
        representatives.push(RepresentativeInfo {
            item: i + 1,
            name: name.clone(),
            vector: v.clone(),
            normal_form: nf,
        });
    }
    let mut redundant_pairs = Vec::new();
    for items in by_form.values() {
        for (x, &i) in items.iter().enumerate() {
            for &j in &items[x + 1..] {
                redundant_pairs.push((i, j));
            }
        }
    }
    redundant_pairs.sort_unstable();

    let cl = Classifier {
        g,
        reps,
        by_form,
        reflections: config.reflections,
    };
    let invariants = orbit_invariants(g);
    let mut counts = Counts::default();
    let mut replay_failures = 0;
    let mut cases = BTreeMap::new();
    let mut items_hit = BTreeMap::new();
    let mut case_1a_residue = false;
    for index in 0..config.samples {
        let a = sample_vector(config.seed, index as u64, g.dim());
        let out = cl.classify(&a);
        if !out.trace.replays(g) {
            replay_failures += 1;
        }
        *cases.entry(out.trace.case.label.to_string()).or_insert(0) += 1;
        for &i in &out.equivalent_items {
            *items_hit.entry(i).or_insert(0) += 1;
        }
        if out.trace.case.label == "1a" && !out.trace.residues.is_empty() {
            case_1a_residue = true;
        }
        match out.category {
            Category::Matched => counts.matched += 1,
            Category::MatchedWithResidue => counts.matched_with_residue += 1,
            Category::Unmatched => counts.unmatched += 1,
        }
    }
    let ratios_invariant = invariants.iter().any(|v| v.is_ratio(2, 1))
        && invariants.iter().any(|v| v.is_ratio(5, 1));
    let probes = if g.dim() == 6 {
        PROBES.iter().map(|p| cl.classify(&CoeffVector::from_ints(p))).collect()
    } else {
        Vec::new()
    };
    AuditReport {
        seed: config.seed,
        samples: config.samples,
        reflections: config.reflections,
        invariants,
        case_1a_normalization_refuted: ratios_invariant && case_1a_residue,
        counts,
        replay_failures,
        cases,
        items_hit,
        redundant_pairs,
        representatives,
        probes,
    }
}
