//! Named verification suites over `(type, Γ)` cases.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bundles::{
    act_subspace, act_vector, all_roots, bracket_preservation_violation, canonical_id, embed,
    fiber_dimension, invariance_square, killing_invariance_violation, make_bc_point, make_uc_point,
    mu_c, nu_g, nu_t, phi_c, pi_c, quotient_to_uc, random_torus, random_word, sigma_c, GroupWord,
    Letter, TStarBCPoint, TwistFrame, TwistLevel, UCPoint,
};
use crate::chevalley::{build_algebra, CartanDatum, ChevalleyAlgebra, Series, TypeLabel};
use crate::exactlin::{format_scalar, format_vector, int, unit_vec, Mat, Scalar, Subspace, Vector};
use crate::parabolic::{build_parabolic, ParabolicDatum};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_MAX_WORD_LEN: usize = 8;

pub const SUITE_NAMES: [&str; 7] = [
    "algebra",
    "parabolic-identities",
    "richardson-torsor",
    "uc-family",
    "invariance",
    "embedding",
    "bc-hypotheses",
];

/// Seeded samples per case.
pub const UC_SAMPLES: usize = 100;
pub const TWIST_LEVELS: usize = 5;
pub const SQUARE_SAMPLES: usize = 50;
pub const STABILIZER_WORDS: usize = 8;
pub const EMBED_SAMPLES: usize = 8;
pub const BC_SAMPLES: usize = 6;
pub const ACTION_AUDIT_WORDS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("malformed case spec {token:?}: {reason}")]
    BadCase { token: String, reason: String },
}

/// `TYPE:Γ` with 1-based indices, plus the run parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseSpec {
    pub type_label: TypeLabel,
    /// 1-based, sorted, distinct.
    pub gamma: Vec<usize>,
    pub seed: u64,
    pub max_word_len: usize,
}

impl CaseSpec {
    pub fn new(type_label: TypeLabel, gamma: &[usize], seed: u64, max_word_len: usize) -> Result<Self, SuiteError> {
        let mut g = gamma.to_vec();
        g.sort_unstable();
        g.dedup();
        let spec = CaseSpec {
            type_label,
            gamma: g,
            seed,
            max_word_len,
        };
        if let Some(&i) = spec.gamma.iter().find(|&&i| i == 0 || i > type_label.rank) {
            return Err(SuiteError::BadCase {
                token: spec.label(),
                reason: format!("index {i} outside 1..={}", type_label.rank),
            });
        }
        Ok(spec)
    }

    /// Parses `B2:-` or `A3:1,3`.
    pub fn parse(s: &str, seed: u64, max_word_len: usize) -> Result<Self, SuiteError> {
        let bad = |reason: String| SuiteError::BadCase {
            token: s.to_string(),
            reason,
        };
        let (ty, g) = s.split_once(':').ok_or_else(|| bad("expected TYPE:Γ".into()))?;
        let label: TypeLabel = ty.parse().map_err(|e: crate::chevalley::ChevalleyError| bad(e.to_string()))?;
        let gamma = if g == "-" {
            Vec::new()
        } else {
            g.split(',')
                .map(|t| {
                    if t.is_empty() || !t.chars().all(|c| c.is_ascii_digit()) {
                        return Err(bad(format!("bad index {t:?}")));
                    }
                    t.parse::<usize>().map_err(|_| bad(format!("bad index {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        CaseSpec::new(label, &gamma, seed, max_word_len).map_err(|e| match e {
            SuiteError::BadCase { reason, .. } => bad(reason),
            other => other,
        })
    }

    pub fn label(&self) -> String {
        let g = if self.gamma.is_empty() {
            "-".to_string()
        } else {
            self.gamma.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        };
        format!("{}:{}", self.type_label, g)
    }

    pub fn gamma_zero_based(&self) -> Vec<usize> {
        self.gamma.iter().map(|i| i - 1).collect()
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        // FNV-1a over suite and case label, folded into the run seed
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in suite.bytes().chain([0u8]).chain(self.label().bytes()) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
struct CaseSpecRepr {
    spec: String,
    seed: String,
    max_word_len: String,
}

impl Serialize for CaseSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CaseSpecRepr {
            spec: self.label(),
            seed: self.seed.to_string(),
            max_word_len: self.max_word_len.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CaseSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = CaseSpecRepr::deserialize(d)?;
        let seed = u64::from_str(&r.seed).map_err(D::Error::custom)?;
        let len = usize::from_str(&r.max_word_len).map_err(D::Error::custom)?;
        CaseSpec::parse(&r.spec, seed, len).map_err(D::Error::custom)
    }
}

/// Every `Γ ⊆ Δ` for A1, A2, A3, B2, B3, C3, G2, and D4 on request.
pub fn default_case_matrix(include_d4: bool, seed: u64, max_word_len: usize) -> Vec<CaseSpec> {
    let mut types = vec![
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::B, 2),
        (Series::B, 3),
        (Series::C, 3),
        (Series::G, 2),
    ];
    if include_d4 {
        types.push((Series::D, 4));
    }
    let mut out = Vec::new();
    for (s, r) in types {
        let label = TypeLabel::new(s, r).expect("supported type");
        for mask in 0u32..(1 << r) {
            let gamma: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            out.push(CaseSpec::new(label, &gamma, seed, max_word_len).expect("in range"));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisGated,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisGated => "hypothesis-gated",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub case: CaseSpec,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
}

impl SuiteResult {
    fn from_checks(suite: &str, case: &CaseSpec, checks: Vec<CheckRecord>) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::HypothesisGated) {
            Status::HypothesisGated
        } else if !checks.is_empty() && checks.iter().all(|c| c.status == Status::Skipped) {
            Status::Skipped
        } else {
            Status::Pass
        };
        SuiteResult {
            suite: suite.to_string(),
            case: case.clone(),
            status,
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Appends check records; a failing record always gets a witness.
struct Checks(Vec<CheckRecord>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn record(
        &mut self,
        name: &str,
        ok: bool,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
        witness: impl FnOnce() -> String,
    ) -> bool {
        self.0.push(CheckRecord {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: if ok { None } else { Some(witness()) },
        });
        ok
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, name: &str, expected: T, actual: T, witness: impl FnOnce() -> String) -> bool {
        let ok = expected == actual;
        self.record(name, ok, expected, actual, witness)
    }

    fn gated(&mut self, name: &str, expected: impl fmt::Display, actual: impl fmt::Display, witness: String) {
        self.0.push(CheckRecord {
            name: name.to_string(),
            status: Status::HypothesisGated,
            expected: expected.to_string(),
            actual: actual.to_string(),
            witness: Some(witness),
        });
    }

    fn skipped(&mut self, name: &str, reason: String) {
        self.0.push(CheckRecord {
            name: name.to_string(),
            status: Status::Skipped,
            expected: String::new(),
            actual: String::new(),
            witness: Some(reason),
        });
    }

    fn error(&mut self, name: &str, err: impl fmt::Display) {
        let msg = err.to_string();
        self.record(name, false, "no error", format!("error: {msg}"), || msg);
    }
}

/// Suite inputs shared across cases: one audited algebra per type.
pub struct Workbench {
    algebras: BTreeMap<TypeLabel, Result<Arc<ChevalleyAlgebra>, String>>,
}

impl Workbench {
    pub fn for_cases(cases: &[CaseSpec]) -> Self {
        let mut algebras = BTreeMap::new();
        for c in cases {
            algebras.entry(c.type_label).or_insert_with(|| {
                build_algebra(&CartanDatum::from_label(c.type_label))
                    .map(Arc::new)
                    .map_err(|e| e.to_string())
            });
        }
        Workbench { algebras }
    }

    fn algebra(&self, label: TypeLabel) -> Result<Arc<ChevalleyAlgebra>, String> {
        match self.algebras.get(&label) {
            Some(r) => r.clone(),
            None => build_algebra(&CartanDatum::from_label(label))
                .map(Arc::new)
                .map_err(|e| e.to_string()),
        }
    }

    pub fn run(&self, name: &str, cases: &[CaseSpec]) -> Result<Vec<SuiteResult>, SuiteError> {
        let suite = SUITE_NAMES
            .iter()
            .copied()
            .find(|s| *s == name)
            .ok_or_else(|| SuiteError::UnknownSuite(name.to_string()))?;
        let mut sorted = cases.to_vec();
        sorted.sort();
        sorted.dedup();
        Ok(sorted
            .par_iter()
            .map(|case| SuiteResult::from_checks(suite, case, self.run_case(suite, case)))
            .collect())
    }

    fn run_case(&self, suite: &str, case: &CaseSpec) -> Vec<CheckRecord> {
        let mut ck = Checks::new();
        let alg = match self.algebra(case.type_label) {
            Ok(a) => a,
            Err(e) => {
                ck.error("build algebra", e);
                return ck.0;
            }
        };
        let mut rng = case.rng(suite);
        if suite == "algebra" {
            algebra_suite(&alg, case, &mut rng, &mut ck);
            return ck.0;
        }
        let pd = match build_parabolic(alg, &case.gamma_zero_based()) {
            Ok(pd) => pd,
            Err(e) => {
                ck.error("build parabolic", e);
                return ck.0;
            }
        };
        match suite {
            "parabolic-identities" => parabolic_suite(&pd, &mut ck),
            "richardson-torsor" => richardson_suite(&pd, &mut ck),
            "uc-family" => uc_family_suite(&pd, case, &mut rng, &mut ck),
            "invariance" => invariance_suite(&pd, case, &mut rng, &mut ck),
            "embedding" => embedding_suite(&pd, case, &mut rng, &mut ck),
            "bc-hypotheses" => bc_suite(&pd, case, &mut rng, &mut ck),
            _ => unreachable!("suite names are validated"),
        }
        ck.0
    }
}

pub fn run_suite(name: &str, cases: &[CaseSpec]) -> Result<Vec<SuiteResult>, SuiteError> {
    Workbench::for_cases(cases).run(name, cases)
}

fn triple_names(alg: &ChevalleyAlgebra, t: &[usize]) -> String {
    let names: Vec<String> = t.iter().map(|&i| alg.basis_name(i)).collect();
    format!("({})", names.join(", "))
}

fn algebra_suite(alg: &ChevalleyAlgebra, case: &CaseSpec, rng: &mut ChaCha8Rng, ck: &mut Checks) {
    let dim = alg.dim();
    let r = alg.rank();
    ck.eq("dim g = 2|Φ+| + rank", 2 * alg.num_positive_roots() + r, dim, || {
        format!("{} positive roots, rank {r}", alg.num_positive_roots())
    });
    let anti = alg.antisymmetry_violation();
    ck.record("bracket antisymmetry", anti.is_none(), "0 violations", anti.is_some() as usize, || {
        let (a, b) = anti.expect("violation");
        triple_names(alg, &[a, b])
    });

    let jac = alg.jacobi_violations();
    ck.record(
        "Jacobi identity on all basis triples",
        jac.is_empty(),
        format!("0 violations over {} triples", dim * dim * dim),
        format!("{} violations over {} triples", jac.len(), dim * dim * dim),
        || {
            let (a, b, c) = jac[0];
            triple_names(alg, &[a, b, c])
        },
    );

    let gram = alg.killing_gram();
    ck.record("Killing gram symmetric", gram.is_symmetric(), "symmetric", gram.is_symmetric(), || {
        "gram differs from its transpose".into()
    });

    // independent route: explicit ad matrices, trace of the product
    let ads: Vec<Mat> = (0..dim)
        .map(|i| alg.ad(&alg.basis_vector(i)).expect("basis vector"))
        .collect();
    let mut trace_mismatch = None;
    'outer: for a in 0..dim {
        for b in a..dim {
            let mut tr = Scalar::zero();
            for k in 0..dim {
                for m in 0..dim {
                    let x = ads[a].get(k, m);
                    if x.is_zero() {
                        continue;
                    }
                    let y = ads[b].get(m, k);
                    if !y.is_zero() {
                        tr += x * y;
                    }
                }
            }
            if tr != *gram.get(a, b) {
                trace_mismatch = Some((a, b, tr));
                break 'outer;
            }
        }
    }
    ck.record(
        "Killing gram = trace(ad_x ad_y)",
        trace_mismatch.is_none(),
        "all basis pairs agree",
        if trace_mismatch.is_none() { "all basis pairs agree" } else { "mismatch" },
        || {
            let (a, b, tr) = trace_mismatch.clone().expect("mismatch");
            format!(
                "{}: gram {} vs trace {}",
                triple_names(alg, &[a, b]),
                format_scalar(gram.get(a, b)),
                format_scalar(&tr)
            )
        },
    );

    let mut invariance = None;
    'inv: for z in 0..dim {
        for x in 0..dim {
            let zx = alg.bracket_unchecked(&alg.basis_vector(z), &alg.basis_vector(x));
            for y in 0..dim {
                let zy = alg.bracket_unchecked(&alg.basis_vector(z), &alg.basis_vector(y));
                let s = alg.killing_unchecked(&zx, &alg.basis_vector(y))
                    + alg.killing_unchecked(&alg.basis_vector(x), &zy);
                if !s.is_zero() {
                    invariance = Some((z, x, y));
                    break 'inv;
                }
            }
        }
    }
    ck.record(
        "Killing form invariant: κ([z,x],y) + κ(x,[z,y]) = 0",
        invariance.is_none(),
        "0 violations",
        invariance.is_some() as usize,
        || {
            let (z, x, y) = invariance.expect("violation");
            triple_names(alg, &[z, x, y])
        },
    );

    ck.eq("Killing form nondegenerate", dim, gram.rank(), || "rank deficit".into());

    let mut orth = None;
    'orth: for a in 0..dim {
        for b in 0..dim {
            let opposite = match (alg.root_of(a), alg.root_of(b)) {
                (Some(x), Some(y)) => x.negate() == y,
                (None, None) => true,
                _ => false,
            };
            if !opposite && !gram.get(a, b).is_zero() {
                orth = Some((a, b));
                break 'orth;
            }
        }
    }
    ck.record(
        "κ(g_α, g_β) = 0 unless α + β = 0",
        orth.is_none(),
        "0 violations",
        orth.is_some() as usize,
        || {
            let (a, b) = orth.expect("violation");
            triple_names(alg, &[a, b])
        },
    );

    let h = alg.cartan_subalgebra();
    let hh = alg.bracket_space(&h, &h).expect("same ambient");
    ck.eq("Cartan subalgebra abelian", 0, hh.dim(), || "[h,h] != 0".into());
    let g = Subspace::full(dim);
    let gg = alg.bracket_space(&g, &g).expect("same ambient");
    ck.eq("[g,g] = g", dim, gg.dim(), || "g is not perfect".into());

    let roots = all_roots(alg);
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| (a..dim).map(move |b| (a, b))).collect();
    for k in 0..ACTION_AUDIT_WORDS {
        let w = random_word(alg, rng, &roots, case.max_word_len);
        let br = bracket_preservation_violation(alg, &w, &pairs);
        ck.record(
            &format!("Ad_w preserves brackets (word {k})"),
            br.is_none(),
            "all basis pairs",
            if br.is_none() { "all basis pairs" } else { "violation" },
            || format!("w = {w}, pair {}", triple_names(alg, &[br.unwrap().0, br.unwrap().1])),
        );
        let kv = killing_invariance_violation(alg, &w, &pairs);
        ck.record(
            &format!("Ad_w preserves the Killing form (word {k})"),
            kv.is_none(),
            "all basis pairs",
            if kv.is_none() { "all basis pairs" } else { "violation" },
            || format!("w = {w}, pair {}", triple_names(alg, &[kv.unwrap().0, kv.unwrap().1])),
        );
    }
}

fn parabolic_suite(pd: &ParabolicDatum, ck: &mut Checks) {
    for c in pd.identity_checks() {
        let detail = c.detail.clone();
        ck.record(c.name, c.holds, "holds", if c.holds { "holds" } else { "fails" }, || detail);
    }
    let g = pd.pairing_gram();
    ck.eq("pairing gram size", pd.torus_rank, g.rows(), || format_matrix(&g));
}

fn format_matrix(m: &Mat) -> String {
    let rows: Vec<String> = m.row_vectors().map(format_vector).collect();
    format!("[{}]", rows.join(", "))
}

fn richardson_suite(pd: &ParabolicDatum, ck: &mut Checks) {
    let alg = pd.alg();
    let cert = match pd.find_richardson() {
        Ok(c) => c,
        Err(e) => {
            ck.error("Richardson element found", e);
            ck.skipped("torsor certificate", "no Richardson element".into());
            return;
        }
    };
    ck.record("Richardson element found", true, "found", "found", String::new);
    ck.record("element lies in u(p)", pd.u.contains(&cert.element), "x ∈ u", "x ∈ u", || {
        alg.describe(&cert.element)
    });
    ck.eq("dim [p, x] = dim u(p)", pd.u.dim(), cert.tangent.dim(), || alg.describe(&cert.element));
    match pd.torsor_certificate(&cert) {
        Ok(t) => {
            ck.eq("infinitesimal stabilizer in h_Γ", 0, t.stabilizer_dim, || alg.describe(&cert.element));
            let inv: Vec<String> = t.invariants.iter().map(|x| x.to_string()).collect();
            let expect: Vec<String> = vec!["1".to_string(); pd.torus_rank];
            ck.record(
                "character lattice generated (Smith invariants)",
                t.lattice_generating,
                format!("[{}]", expect.join(", ")),
                format!("[{}]", inv.join(", ")),
                || format!("characters {:?} of {}", t.characters.characters, alg.describe(&cert.element)),
            );
        }
        Err(e) => ck.error("torsor certificate", e),
    }
}

fn random_in<R: Rng>(s: &Subspace, rng: &mut R) -> Vector {
    let coords: Vec<Scalar> = (0..s.dim()).map(|_| int(rng.gen_range(-2..=2))).collect();
    s.combine(&coords)
}

fn p_word<R: Rng>(pd: &ParabolicDatum, rng: &mut R, max_len: usize) -> GroupWord {
    random_word(pd.alg(), rng, &pd.roots_of_p(), max_len)
}

fn fmt_level(t: &TwistLevel) -> String {
    format_vector(&t.psi)
}

fn random_level<R: Rng>(pd: &ParabolicDatum, rng: &mut R) -> TwistLevel {
    TwistLevel {
        psi: (0..pd.torus_rank).map(|_| int(rng.gen_range(-3..=3))).collect(),
    }
}

fn uc_family_suite(pd: &ParabolicDatum, case: &CaseSpec, rng: &mut ChaCha8Rng, ck: &mut Checks) {
    let alg = pd.alg();
    let rep = pd.dimension_report();
    ck.eq("leaf_dim = 2 dim C", 2 * rep.dim_c, rep.leaf_dim, || format!("{rep:?}"));
    ck.eq(
        "σ_C fiber over p_Γ has dim dim C + torus_rank",
        rep.dim_c + rep.torus_rank,
        rep.dim_p_derived_perp,
        || format!("{rep:?}"),
    );

    let mut levels = vec![TwistLevel::zero(pd)];
    for j in 0..pd.torus_rank {
        levels.push(TwistLevel {
            psi: unit_vec(pd.torus_rank, j),
        });
    }
    while levels.len() < TWIST_LEVELS {
        levels.push(random_level(pd, rng));
    }
    let mut dims = Vec::new();
    let mut bad = None;
    for psi in &levels {
        match fiber_dimension(pd, psi) {
            Ok(f) => {
                if f.total != 2 * rep.dim_c && bad.is_none() {
                    bad = Some(format!("ψ = {} gives {}", fmt_level(psi), f.total));
                }
                dims.push(f.total);
            }
            Err(e) => {
                bad.get_or_insert(format!("ψ = {}: {e}", fmt_level(psi)));
            }
        }
    }
    ck.record(
        &format!("π_C fibers equidimensional over {} twist levels", levels.len()),
        bad.is_none(),
        format!("all {}", 2 * rep.dim_c),
        format!("{dims:?}"),
        || bad.clone().unwrap_or_default(),
    );

    let roots = all_roots(alg);
    let mut failures: BTreeMap<&'static str, String> = BTreeMap::new();
    let mut note = |key: &'static str, msg: String| {
        failures.entry(key).or_insert(msg);
    };
    for k in 0..UC_SAMPLES {
        let x0 = random_in(&pd.p_derived_perp, rng);
        let w0 = random_word(alg, rng, &roots, case.max_word_len);
        let g = random_word(alg, rng, &roots, case.max_word_len);
        let s = p_word(pd, rng, case.max_word_len);
        let base = || format!("sample {k}: x0 = {}, w0 = {w0}, g = {g}, s = {s}", format_vector(&x0));
        let pt = match make_uc_point(pd, &w0, &x0) {
            Ok(p) => p,
            Err(e) => {
                note("point", format!("{}: {e}", base()));
                continue;
            }
        };
        let moved = match pt.act(alg, &g) {
            Ok(p) => p,
            Err(e) => {
                note("point", format!("{}: {e}", base()));
                continue;
            }
        };
        if mu_c(&moved) != act_vector(alg, &g, &mu_c(&pt)) {
            note("mu", base());
        }
        if sigma_c(&moved) != act_subspace(alg, &g, &sigma_c(&pt)) {
            note("sigma", base());
        }
        let before = pi_c(pd, &pt);
        let after = moved.rewitness(pd, &s).and_then(|m| pi_c(pd, &m));
        match (before, after) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => note("pi", format!("{}: {} vs {}", base(), fmt_level(&a), fmt_level(&b))),
            (Err(e), _) | (_, Err(e)) => note("pi", format!("{}: {e}", base())),
        }
    }
    let n = UC_SAMPLES;
    for (key, name) in [
        ("point", "U_C points valid under the action"),
        ("mu", "μ_C equivariant"),
        ("sigma", "σ_C equivariant"),
        ("pi", "π_C invariant after re-witnessing"),
    ] {
        let w = failures.get(key).cloned();
        ck.record(
            &format!("{name} ({n} seeded words)"),
            w.is_none(),
            "no violations",
            if w.is_none() { "no violations" } else { "violation" },
            || w.unwrap_or_default(),
        );
    }
}

fn invariance_suite(pd: &ParabolicDatum, case: &CaseSpec, rng: &mut ChaCha8Rng, ck: &mut Checks) {
    let alg = pd.alg();
    let basis_levels: Vec<TwistLevel> = (0..pd.torus_rank)
        .map(|j| TwistLevel {
            psi: unit_vec(pd.torus_rank, j),
        })
        .collect();

    let mut stab_failure = None;
    for k in 0..STABILIZER_WORDS {
        let s = p_word(pd, rng, case.max_word_len);
        if act_subspace(alg, &s, &pd.p) != pd.p {
            stab_failure.get_or_insert(format!("word {k} = {s} does not fix p_Γ"));
            continue;
        }
        for psi in &basis_levels {
            match canonical_id(pd, &s, psi) {
                Ok(out) if out == *psi => {}
                Ok(out) => {
                    stab_failure.get_or_insert(format!("s = {s}: {} ↦ {}", fmt_level(psi), fmt_level(&out)));
                }
                Err(e) => {
                    stab_failure.get_or_insert(format!("s = {s}: {e}"));
                }
            }
        }
    }
    ck.record(
        &format!("canonical_id is the identity for P_Γ words ({STABILIZER_WORDS} words)"),
        stab_failure.is_none(),
        "identity on every basis level",
        if stab_failure.is_none() { "identity on every basis level" } else { "moved" },
        || stab_failure.clone().unwrap_or_default(),
    );

    let roots = all_roots(alg);
    let mut square_failure = None;
    let mut frame_failure = None;
    for k in 0..SQUARE_SAMPLES {
        let w = random_word(alg, rng, &roots, case.max_word_len);
        let psi = random_level(pd, rng);
        let frame = match TwistFrame::transported(pd, &w) {
            Ok(f) => f,
            Err(e) => {
                frame_failure.get_or_insert(format!("sample {k}, w = {w}: {e}"));
                continue;
            }
        };
        if frame.twist.dim() != pd.torus_rank || frame.a_p.dim() != pd.torus_rank || frame.u.dim() != pd.u.dim() {
            frame_failure.get_or_insert(format!(
                "sample {k}, w = {w}: dims a(p') {}, twist' {}, u' {}",
                frame.a_p.dim(),
                frame.twist.dim(),
                frame.u.dim()
            ));
            continue;
        }
        match invariance_square(pd, &frame, &w, &psi) {
            Ok(sq) if sq.commutes() => {}
            Ok(sq) => {
                square_failure.get_or_insert(format!(
                    "sample {k}, w = {w}, ψ = {}: {} vs {}",
                    fmt_level(&psi),
                    format_vector(&sq.down_then_across),
                    format_vector(&sq.across_then_down)
                ));
            }
            Err(e) => {
                square_failure.get_or_insert(format!("sample {k}, w = {w}: {e}"));
            }
        }
    }
    ck.record(
        "transported frames have the standard dimensions",
        frame_failure.is_none(),
        "dim a(p') = dim twist' = torus_rank",
        if frame_failure.is_none() { "all frames" } else { "mismatch" },
        || frame_failure.clone().unwrap_or_default(),
    );
    ck.record(
        &format!("invariance square commutes ({SQUARE_SAMPLES} seeded pairs)"),
        square_failure.is_none(),
        "both paths agree",
        if square_failure.is_none() { "both paths agree" } else { "paths differ" },
        || square_failure.clone().unwrap_or_default(),
    );
}

fn embedding_suite(pd: &ParabolicDatum, case: &CaseSpec, rng: &mut ChaCha8Rng, ck: &mut Checks) {
    let alg = pd.alg();
    let roots = all_roots(alg);
    let mut failures: BTreeMap<&'static str, String> = BTreeMap::new();
    for k in 0..EMBED_SAMPLES {
        let x0 = random_in(&pd.p_derived_perp, rng);
        let w0 = random_word(alg, rng, &roots, case.max_word_len);
        let g = random_word(alg, rng, &roots, case.max_word_len);
        let base = format!("sample {k}: x0 = {}, w0 = {w0}, g = {g}", format_vector(&x0));
        let pt: UCPoint = match make_uc_point(pd, &w0, &x0) {
            Ok(p) => p,
            Err(e) => {
                failures.entry("embed").or_insert(format!("{base}: {e}"));
                continue;
            }
        };
        let gc = match embed(&pt) {
            Ok(gc) => gc,
            Err(e) => {
                failures.entry("embed").or_insert(format!("{base}: {e}"));
                continue;
            }
        };
        if phi_c(&gc) != mu_c(&pt) {
            failures.entry("triangle").or_insert(base.clone());
        }
        let lhs = pt.act(alg, &g).and_then(|m| embed(&m));
        let rhs = gc.act(alg, &g);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => {
                failures.entry("equivariant").or_insert(base.clone());
            }
            (Err(e), _) | (_, Err(e)) => {
                failures.entry("equivariant").or_insert(format!("{base}: {e}"));
            }
        }
    }
    for (key, name) in [
        ("embed", "U_C points embed into g_C"),
        ("triangle", "φ_C ∘ embed = μ_C"),
        ("equivariant", "embed is G-equivariant"),
    ] {
        let w = failures.get(key).cloned();
        ck.record(
            &format!("{name} ({EMBED_SAMPLES} seeded points)"),
            w.is_none(),
            "no violations",
            if w.is_none() { "no violations" } else { "violation" },
            || w.unwrap_or_default(),
        );
    }
}

/// `{y ∈ p : [y, x] ∈ [u,u]}` for `x ∈ u`.
fn class_stabilizer(pd: &ParabolicDatum, x: &[Scalar]) -> Subspace {
    let alg = pd.alg();
    let rows: Vec<Vector> = pd
        .p
        .basis_vectors()
        .map(|y| pd.a_u.class_of(&alg.bracket_unchecked(y, x)).expect("[p, u] ⊆ u"))
        .collect();
    let m = Mat::from_rows(pd.a_u.dim(), &rows).expect("uniform rows");
    // coefficient vectors c with c·M = 0
    let kernel = m.transpose().kernel();
    Subspace::from_vectors(alg.dim(), kernel.into_iter().map(|c| pd.p.combine(&c)))
}

fn bc_suite(pd: &ParabolicDatum, case: &CaseSpec, rng: &mut ChaCha8Rng, ck: &mut Checks) {
    let alg = pd.alg();
    let h1 = pd.hypothesis_h1();
    let cert = match pd.find_richardson() {
        Ok(c) => c,
        Err(e) => {
            ck.error("Richardson element found", e);
            return;
        }
    };
    let stab = class_stabilizer(pd, &cert.element);
    let stab_text = format!("dim {}", stab.dim());
    let derived_text = format!("dim {}", pd.p_derived.dim());
    let bij_lhs = pd.alg().dim() - pd.p.dim() + pd.a_u.dim();
    let bij_rhs = pd.alg().dim() - pd.p_derived.dim();

    if !h1.holds {
        let w = h1.witness.clone().expect("failing H1 has a witness");
        let witness = format!("[{}, {}] = {} ∉ [u,u]", w.left, w.right, w.bracket);
        ck.gated("H1: [[l,l], u] ⊆ [u,u]", "holds", "fails", witness.clone());
        match make_bc_point(pd, &cert, &GroupWord::identity()) {
            Err(e) => ck.gated("B_C point construction", "gated", "gated", e.to_string()),
            Ok(_) => {
                ck.record("B_C point construction", false, "gated", "constructed", || {
                    "construction ignored the H1 gate".into()
                });
            }
        }
        ck.gated(
            "G-stabilizer of (p,[x]) is [P,P] (Lie algebra)",
            derived_text,
            stab_text,
            witness.clone(),
        );
        ck.gated(
            "dim B_C = dim G/[P,P]",
            format!("{bij_rhs}"),
            format!("dim C + dim a(u) = {bij_lhs}"),
            witness,
        );
        return;
    }

    ck.record("H1: [[l,l], u] ⊆ [u,u]", true, "holds", "holds", String::new);
    let stab_ok = stab == pd.p_derived;
    ck.record(
        "G-stabilizer of (p,[x]) is [P,P] (Lie algebra)",
        stab_ok,
        derived_text,
        stab_text,
        || alg.describe(&cert.element),
    );
    ck.eq("dim B_C = dim G/[P,P]", bij_rhs, bij_lhs, || {
        format!("dim a(u) = {}, torus_rank = {}", pd.a_u.dim(), pd.torus_rank)
    });

    let roots = all_roots(alg);
    let mut failures: BTreeMap<&'static str, String> = BTreeMap::new();
    for k in 0..BC_SAMPLES {
        let w = random_word(alg, rng, &roots, case.max_word_len);
        let g = random_word(alg, rng, &roots, case.max_word_len);
        let s = p_word(pd, rng, case.max_word_len);
        let params = torus_params(pd, rng);
        let base = format!("sample {k}: w = {w}, g = {g}, s = {s}");
        let bc = match make_bc_point(pd, &cert, &w) {
            Ok(b) => b,
            Err(e) => {
                failures.entry("point").or_insert(format!("{base}: {e}"));
                continue;
            }
        };
        match bc.membership(alg, rng) {
            Ok((best, target)) if best == target => {}
            Ok((best, target)) => {
                failures
                    .entry("member")
                    .or_insert(format!("{base}: tangent {best} of {target}"));
            }
            Err(e) => {
                failures.entry("member").or_insert(format!("{base}: {e}"));
            }
        }

        let y0 = random_in(&pd.p_derived_perp, rng);
        let y = act_vector(alg, &w, &y0);
        let ptt = match TStarBCPoint::new(alg, bc.clone(), y) {
            Ok(p) => p,
            Err(e) => {
                failures.entry("point").or_insert(format!("{base}: {e}"));
                continue;
            }
        };
        match quotient_to_uc(alg, &ptt) {
            Ok(q) => {
                if nu_g(&ptt) != mu_c(&q) {
                    failures.entry("nu_g").or_insert(base.clone());
                }
                match (nu_t(pd, &ptt), pi_c(pd, &q)) {
                    (Ok(a), Ok(b)) if a == b => {}
                    (Ok(a), Ok(b)) => {
                        failures
                            .entry("nu_t")
                            .or_insert(format!("{base}: {} vs {}", fmt_level(&a), fmt_level(&b)));
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        failures.entry("nu_t").or_insert(format!("{base}: {e}"));
                    }
                }
            }
            Err(e) => {
                failures.entry("nu_g").or_insert(format!("{base}: {e}"));
            }
        }

        // G and T_C commute: g·(t·b) = t·(g·b), the latter re-witnessed by s
        let left = bc.torus_act(pd, &params).map(|tb| tb.act(alg, &g));
        let right = bc
            .act(alg, &g)
            .rewitness(pd, &s)
            .and_then(|gb| gb.torus_act(pd, &params));
        match (left, right) {
            (Ok(l), Ok(r)) => match l.same_class(pd, &r) {
                Ok(true) => {}
                Ok(false) => {
                    failures.entry("commute").or_insert(format!("{base}, t = {}", format_vector(&params)));
                }
                Err(e) => {
                    failures.entry("commute").or_insert(format!("{base}: {e}"));
                }
            },
            (Err(e), _) | (_, Err(e)) => {
                failures.entry("commute").or_insert(format!("{base}: {e}"));
            }
        }

        // freeness: a nontrivial t moves [x]
        if params.iter().any(|p| *p != int(1)) {
            match bc.torus_act(pd, &params).and_then(|tb| tb.same_class(pd, &bc)) {
                Ok(false) => {}
                Ok(true) => {
                    failures.entry("free").or_insert(format!("{base}, t = {}", format_vector(&params)));
                }
                Err(e) => {
                    failures.entry("free").or_insert(format!("{base}: {e}"));
                }
            }
        }
    }
    for (key, name) in [
        ("point", "B_C and T*B_C points constructed"),
        ("member", "x_rep + [u,u] meets the open orbit"),
        ("nu_g", "ν_G = μ_C ∘ quotient"),
        ("nu_t", "ν_T = π_C ∘ quotient"),
        ("commute", "G and T_C actions commute"),
        ("free", "T_C acts freely"),
    ] {
        let w = failures.get(key).cloned();
        ck.record(
            &format!("{name} ({BC_SAMPLES} seeded points)"),
            w.is_none(),
            "no violations",
            if w.is_none() { "no violations" } else { "violation" },
            || w.unwrap_or_default(),
        );
    }
}

/// Random element of `H = ∩_{α∈Γ} ker α`, not the identity when `H ≠ 1`.
fn torus_params<R: Rng>(pd: &ParabolicDatum, rng: &mut R) -> Vec<Scalar> {
    loop {
        let Letter::Torus { params } = random_torus(rng, pd.alg().rank(), &pd.gamma) else {
            unreachable!("random_torus builds torus letters")
        };
        if pd.torus_rank == 0 || params.iter().any(|p| *p != int(1)) {
            return params;
        }
    }
}
