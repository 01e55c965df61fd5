//! The analysis pipeline and its report. Text and JSON are two renderings
//! of the same JSON tree.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::binary::{binary_b, binary_link, binary_theorems};
use crate::error::{Error, Result};
use crate::fixtures::Loaded;
use crate::gbasis::ideal_quotient;
use crate::hilbert::{dubreil_identity_check, h1_series, hilbert_samuel, hilbert_series, socle, SamuelData};
use crate::oracle::{kernel_dimensions, rank_hilbert_upto, Caps};
use crate::polycore::Poly;
use crate::rees::{fiber_in_rees, rees_ideal, secondary_edeg, ReesIdeal, ReesSetup};
use crate::resolution::{link_resolution, northcott_check};
use crate::syzmatrix::{
    balance, being_a_power_check, count_checks, delta_generators, det_content, matrix_strings, power_of_elim,
    quaternary_quadrics_matrix, socle_degree_theorem, ternary_balanced_matrix, ternary_quadrics_classify, two_step,
    two_step_inputs, BalanceData, ContentMatrix, CountCheck, SocleDegreeCheck,
};

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub caps: Caps,
    /// Largest `m` tried for `λ(R/I^(m+1))`; `None` skips the fit.
    pub samuel_max: Option<usize>,
    /// Compare graded pieces and Hilbert functions with the oracle.
    pub oracle: bool,
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { caps: Caps::default(), samuel_max: Some(10), oracle: true, timings: false }
    }
}

/// Which parts of the pipeline to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    Hilbert,
    Rees,
    Fiber,
    Matrix,
    Binary,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertSection {
    pub quotient: Vec<i64>,
    pub reduction: Vec<i64>,
    pub colon: Vec<i64>,
    pub content: Vec<i64>,
    pub h1: Vec<i64>,
    pub h1_initial_degree: i64,
    pub length: i64,
    pub colon_socle_degree: i64,
    pub colon_type: usize,
    pub colon_generators: usize,
    pub link_ranks: Vec<usize>,
    pub northcott: Option<bool>,
    pub samuel: Option<SamuelData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samuel_note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationSection {
    pub degrees: Vec<u32>,
    pub twists: Vec<u32>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSection {
    pub equation: String,
    pub edeg: u32,
    pub birational: bool,
    pub reduction_number: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReesSection {
    /// Generators of `(L_1)`, one per column of phi.
    pub l1: Vec<String>,
    /// `(i, ν(L_i))` for every T-degree with fresh generators.
    pub nu: Vec<(u32, usize)>,
    /// `((a, b), count)` of minimal generators by bidegree.
    pub bidegrees: Vec<((u32, u32), usize)>,
    pub epsilon: u32,
    pub r_bound: u32,
    pub r_min: u32,
    pub balance: BalanceData,
    pub fresh_quadrics: Vec<String>,
    pub counts: Option<CountCheck>,
    pub socle_theorem: Option<SocleDegreeCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixSection {
    pub kind: String,
    pub basis: Vec<String>,
    pub forms: Vec<String>,
    pub b: Vec<Vec<String>>,
    pub det: String,
    pub det_degree: u32,
    pub exponent: u32,
    pub pure_power: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BinarySection {
    pub r: u32,
    pub s: u32,
    pub link_generators: Vec<String>,
    pub hforms: Vec<String>,
    pub zeta: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSection {
    pub bidegrees: usize,
    pub hilbert_degrees: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub field: String,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub d: usize,
    pub n: u32,
    /// 1-based positions of the generators of the reduction J.
    pub reduction: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rees: Option<ReesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary: Option<BinarySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    pub verdicts: Vec<Verdict>,
    /// Steps skipped because their hypotheses do not hold.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        render_text(&self.to_value())
    }
}

fn strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

struct Run {
    verdicts: Vec<Verdict>,
    notes: Vec<String>,
    timings: BTreeMap<String, u128>,
}

impl Run {
    fn verdict(&mut self, check: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.to_string(), pass, detail: detail.into() });
    }

    /// Turns a theorem failure into a failing verdict and an unmet
    /// precondition into a note; other errors propagate.
    fn soft<T>(&mut self, check: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::Theorem(msg)) => {
                self.verdict(check, false, msg);
                Ok(None)
            }
            Err(Error::Precondition(msg)) => {
                self.notes.push(format!("{check}: {msg}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn timed<T>(&mut self, step: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        *self.timings.entry(step.to_string()).or_default() += t.elapsed().as_millis();
        out
    }
}

fn hilbert_section(setup: &ReesSetup, opts: &Options, run: &mut Run) -> Result<HilbertSection> {
    let ring = &setup.ring;
    let j = setup.j();
    let a = setup.a();
    let quotient = hilbert_series(ring, &setup.gens)?;
    let reduction = hilbert_series(ring, &j)?;
    let colon_ideal = ideal_quotient(&j, a)?;
    let colon = hilbert_series(ring, &colon_ideal)?;
    let content = hilbert_series(ring, &crate::resolution::content_ideal(&setup.phi)?)?;
    let h1 = h1_series(ring, &j, a)?;
    let colon_socle = socle(ring, &colon_ideal)?;
    let dubreil = dubreil_identity_check(ring, &j, a, setup.n)?;
    run.verdict("series of R/I = series of R/J - t^n series of R/(J:a)", dubreil, "");
    let mut rev = quotient.coeffs.clone();
    rev.reverse();
    run.verdict("H1(I) coefficients reverse those of R/I", h1.coeffs == rev, "");
    run.verdict("length of (J:a)/J equals length of R/I", h1.length() == quotient.length(), "");

    let link = run.timed("linkage", || link_resolution(ring, &j, a))?;
    let north = northcott_check(ring, &j, a)?;
    let northcott = north.applicable.then_some(north.holds);
    if let Some(h) = northcott {
        run.verdict("(J, det phi') = I when J:a has d generators", h, "");
    }

    let samuel_res = match opts.samuel_max {
        Some(max) => run.timed("samuel", || hilbert_samuel(ring, &setup.gens, max)),
        None => Err(Error::Precondition("Hilbert–Samuel fit skipped".into())),
    };
    let (samuel, samuel_note) = match samuel_res {
        Ok(s) => {
            let ebar: num_rational::BigRational = s.ebar1.parse().unwrap_or_default();
            let e1 = num_rational::BigRational::from_integer(s.e1.into());
            run.verdict("e1 <= ebar1", e1 <= ebar, format!("e1 = {}, ebar1 = {}", s.e1, s.ebar1));
            run.verdict(
                "e1 = ebar1 exactly when birational",
                (e1 == ebar) == setup.fiber.birational,
                "",
            );
            (Some(s), None)
        }
        Err(Error::Precondition(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    Ok(HilbertSection {
        h1_initial_degree: h1.offset,
        length: quotient.length(),
        colon_socle_degree: colon.top_degree().unwrap_or(-1),
        colon_type: colon_socle.dimension,
        colon_generators: link.colon.len(),
        link_ranks: link.complex.ranks(),
        quotient: quotient.coeffs,
        reduction: reduction.coeffs,
        colon: colon.coeffs,
        content: content.coeffs,
        h1: h1.coeffs,
        northcott,
        samuel,
        samuel_note,
    })
}

fn matrix_section(kind: &str, cm: &ContentMatrix, det: &Poly, exponent: u32, pure: bool) -> MatrixSection {
    MatrixSection {
        kind: kind.to_string(),
        basis: strings(&cm.basis),
        forms: strings(&cm.forms),
        b: matrix_strings(&cm.b),
        det: det.to_string(),
        det_degree: det.bidegree().map(|b| b.1).unwrap_or(0),
        exponent,
        pure_power: pure,
    }
}

/// Square content matrix for the shapes that have one.
fn content_matrix_section(
    loaded: &Loaded,
    setup: &ReesSetup,
    rees: &ReesIdeal,
    bal: &BalanceData,
    deltas: &[Poly],
    r_min: Option<u32>,
    run: &mut Run,
) -> Result<Option<MatrixSection>> {
    let (d, n) = (setup.d, setup.n);
    let f = &setup.fiber.equation;
    let section = if d == 3 && n == 2 {
        let Some(q) = run.soft("ternary quadrics classification", ternary_quadrics_classify(setup, &rees.l1, deltas))? else {
            return Ok(None);
        };
        run.verdict("quadrics case matches birationality", q.birational == setup.fiber.birational, format!("{:?}", q.case));
        let kind = format!("ternary-quadrics-{}", if q.birational { "generic" } else { "degenerate" });
        matrix_section(&kind, &q.matrix, &q.det, q.power.exponent, q.power.pure)
    } else if d == 3 && bal.s == Some(n - 1) {
        let cm = ternary_balanced_matrix(setup, &rees.l1, deltas)?;
        let det = det_content(&cm)?;
        let p = power_of_elim(&det, f)?;
        if let Some(r) = r_min {
            let bp = being_a_power_check(setup, rees, r, &cm);
            if let Some(bp) = run.soft("det B is a power of the elimination equation", bp)? {
                run.verdict("2n-2 is a secondary elimination degree", bp.secondary, "");
            }
        }
        matrix_section("ternary-balanced", &cm, &det, p.exponent, p.pure)
    } else if d == 4 && n == 2 && !loaded.spec.two_step.is_empty() {
        let inputs = two_step_inputs(rees, &loaded.spec.two_step)?;
        let Some(ts) = run.soft("two-step derivation", two_step(setup, rees, &inputs))? else {
            return Ok(None);
        };
        run.verdict("det B1, det B2 minimally generate L3 modulo S1 L2", ts.steps_fresh, "");
        matrix_section("quaternary-two-step", &ts.matrix, &ts.det, ts.power.exponent, ts.power.pure)
    } else if d == 4 && n == 2 && bal.s == Some(2) {
        let cm = quaternary_quadrics_matrix(deltas)?;
        let det = det_content(&cm)?;
        let p = power_of_elim(&det, f)?;
        matrix_section("quaternary-quadrics", &cm, &det, p.exponent, p.pure)
    } else {
        return Ok(None);
    };
    let want = if d == 3 { n * n } else { 8 };
    run.verdict("det B is nonzero", section.det != "0", "");
    run.verdict(&format!("det B has degree {want}"), section.det_degree == want, format!("degree {}", section.det_degree));
    run.verdict(
        "det B is a pure power of the elimination equation",
        section.pure_power && section.exponent >= 1,
        format!("exponent {}", section.exponent),
    );
    Ok(Some(section))
}

fn oracle_section(setup: &ReesSetup, rees: &ReesIdeal, quotient: Option<&HilbertSection>, caps: Caps) -> Result<OracleSection> {
    let mut bidegrees = 0;
    for b in 0..=caps.max_b {
        let dims = kernel_dimensions(&setup.gens, caps.max_a, b)?;
        for (a, &dim) in dims.iter().enumerate() {
            let gb = rees.piece_dimension(a as u32, b);
            if dim as usize != gb {
                return Err(Error::Inconsistency(format!(
                    "dim L_({a},{b}): Gröbner basis gives {gb}, linear algebra gives {dim}"
                )));
            }
            bidegrees += 1;
        }
    }
    let mut hilbert_degrees = 0;
    if let Some(h) = quotient {
        let top = h.quotient.len() as u32;
        let ranks = rank_hilbert_upto(&setup.gens, top)?;
        for (t, &r) in ranks.iter().enumerate() {
            let gb = h.quotient.get(t).copied().unwrap_or(0);
            if r != gb {
                return Err(Error::Inconsistency(format!("dim (R/I)_{t}: series gives {gb}, rank gives {r}")));
            }
            hilbert_degrees += 1;
        }
    }
    Ok(OracleSection { bidegrees, hilbert_degrees })
}

/// Runs the pipeline on a loaded ideal.
pub fn analyze(loaded: &Loaded, scope: Scope, opts: &Options) -> Result<AnalysisReport> {
    let mut run = Run { verdicts: Vec::new(), notes: Vec::new(), timings: BTreeMap::new() };
    let spec = &loaded.spec;
    let setup = run.timed("setup", || ReesSetup::new(&loaded.ring, &loaded.gens, spec.reduction0().as_deref()))?;
    let mut report = AnalysisReport {
        name: spec.name.clone(),
        field: loaded.ring.field().to_string(),
        variables: loaded.ring.names().to_vec(),
        generators: strings(&loaded.gens),
        d: setup.d,
        n: setup.n,
        reduction: setup.reduction.iter().map(|i| i + 1).collect(),
        hilbert: None,
        presentation: None,
        fiber: None,
        rees: None,
        binary: None,
        matrix: None,
        oracle: None,
        verdicts: Vec::new(),
        notes: Vec::new(),
        timings_ms: None,
    };
    let all = scope == Scope::All;
    if all || scope == Scope::Hilbert {
        let t = Instant::now();
        report.hilbert = Some(hilbert_section(&setup, opts, &mut run)?);
        run.timings.insert("hilbert".into(), t.elapsed().as_millis());
    }
    if all || scope == Scope::Hilbert || scope == Scope::Rees {
        report.presentation = Some(PresentationSection {
            degrees: setup.phi.degrees.clone(),
            twists: setup.phi.twists(),
            matrix: matrix_strings(&setup.phi.matrix),
        });
    }
    if all || scope != Scope::Hilbert {
        report.fiber = Some(FiberSection {
            equation: setup.fiber.equation.to_string(),
            edeg: setup.fiber.edeg,
            birational: setup.fiber.birational,
            reduction_number: setup.reduction_number,
        });
    }
    if scope == Scope::Hilbert || scope == Scope::Fiber {
        report.verdicts = run.verdicts;
        report.notes = run.notes;
        return Ok(report);
    }

    let rees = run.timed("rees", || rees_ideal(&setup))?;
    fiber_in_rees(&setup, &rees)?;
    let bal = balance(&setup)?;
    let deltas = run.timed("delta", || delta_generators(&setup, &rees.l1));
    let deltas = run.soft("fresh quadrics match the type of R/I1(phi)", deltas)?;
    let sec = run.soft("L = (L1) : m^(eps+1) with eps+1 <= d(n-1)", secondary_edeg(&setup, &rees))?;
    if let Some(sec) = &sec {
        run.verdict("r_min <= eps+1 <= d(n-1)", sec.r_min <= sec.r_bound, format!("r_min = {}, eps+1 = {}", sec.r_min, sec.r_bound));
    }
    let (counts, socle_theorem) = match bal.s {
        Some(s) => {
            let c = count_checks(&setup, s)?;
            run.verdict("degree-s syzygy count", c.holds(), format!("{} of degree {s}, kernel {}", c.actual, c.kernel));
            let st = socle_degree_theorem(&setup, s)?;
            run.verdict("socle degree of H1(I) is d(n-1)", st.h1_top == st.expected_top, "");
            if let Some(p) = st.power_identity {
                run.verdict("m^(d(n-1)-s+1) = I m^((d-1)(n-1)-s)", p, "");
            }
            (Some(c), Some(st))
        }
        None => (None, None),
    };
    if scope == Scope::All || scope == Scope::Rees {
        report.rees = Some(ReesSection {
            l1: strings(&rees.l1),
            nu: rees.fresh.iter().map(|(&i, &c)| (i, c)).collect(),
            bidegrees: bidegree_counts(&rees),
            epsilon: sec.as_ref().map_or(0, |s| s.epsilon),
            r_bound: sec.as_ref().map_or(0, |s| s.r_bound),
            r_min: sec.as_ref().map_or(0, |s| s.r_min),
            balance: bal.clone(),
            fresh_quadrics: deltas.as_deref().map(strings).unwrap_or_default(),
            counts,
            socle_theorem,
        });
    }
    if setup.d == 2 && (all || scope == Scope::Binary || scope == Scope::Matrix) {
        if let Some(data) = run.soft("binary link", binary_link(&setup))? {
            let cm = binary_b(&data)?;
            if let Some(th) = run.soft("binary determinant theorems", binary_theorems(&setup, &rees, &data))? {
                run.verdict("det B nonzero of degree n", th.det_degree == setup.n, "");
                run.verdict("det B = unit * p^m with m edeg = n", th.power.pure && th.power.exponent * th.edeg == setup.n, "");
                run.verdict("L = (L1) : m^(n-1)", th.saturation, "");
                report.matrix = Some(matrix_section("binary", &cm, &th.det, th.power.exponent, th.power.pure));
            }
            report.binary = Some(BinarySection {
                r: data.r,
                s: data.s,
                link_generators: strings(&data.n_ideal),
                hforms: strings(&data.hforms),
                zeta: matrix_strings(&data.zeta),
            });
        }
    } else if setup.d > 2 && (all || scope == Scope::Matrix) {
        if let Some(deltas) = &deltas {
            let r_min = sec.as_ref().map(|s| s.r_min);
            let t = Instant::now();
            let m = content_matrix_section(loaded, &setup, &rees, &bal, deltas, r_min, &mut run);
            report.matrix = run.soft("content matrix", m)?.flatten();
            run.timings.insert("matrix".into(), t.elapsed().as_millis());
        }
    }
    if all && opts.oracle {
        report.oracle = Some(run.timed("oracle", || oracle_section(&setup, &rees, report.hilbert.as_ref(), opts.caps))?);
    }
    report.verdicts = run.verdicts;
    report.notes = run.notes;
    if opts.timings {
        report.timings_ms = Some(run.timings);
    }
    Ok(report)
}

fn bidegree_counts(rees: &ReesIdeal) -> Vec<((u32, u32), usize)> {
    let mut m: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for g in &rees.generators {
        if let Ok(b) = g.bidegree() {
            *m.entry(b).or_default() += 1;
        }
    }
    m.into_iter().collect()
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar_text).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(is_flat),
        _ => true,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if is_flat(val) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(val)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(val, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    out.push_str(&format!("{pad}- {}\n", scalar_text(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

/// Indented `key: value` rendering of a JSON tree.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;

    #[test]
    fn text_and_json_carry_the_same_tree() {
        let l = fixture("ternary-monomial-cubics").unwrap().load().unwrap();
        let r = analyze(&l, Scope::All, &Options::default()).unwrap();
        assert!(r.passed(), "{:?}", r.verdicts);
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(render_text(&json), r.to_text());
        let again = analyze(&l, Scope::All, &Options::default()).unwrap();
        assert_eq!(again.to_json(), r.to_json());
        let m = r.matrix.unwrap();
        assert_eq!((m.det_degree, m.exponent), (9, 3));
    }

    #[test]
    fn text_layout() {
        let v: Value = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": "x"}]});
        assert_eq!(render_text(&v), "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: x\n");
    }
}
