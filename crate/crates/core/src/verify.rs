//! The fixture verification suite: nine criteria, each checked against the
//! expected values stored with the fixtures.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::binary::{binary_link, binary_theorems, random_binary};
use crate::error::{Error, Result};
use crate::fixtures::{IdealSpec, Loaded};
use crate::matrix::Matrix;
use crate::oracle::Caps;
use crate::polycore::{parse_poly, Poly, Ring};
use crate::rees::{rees_ideal, ReesSetup};
use crate::report::{analyze, AnalysisReport, Options, Scope};
use crate::syzmatrix::same_up_to_permutation;

#[derive(Clone, Debug, Serialize)]
pub struct FixtureOutcome {
    pub fixture: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub fixtures: Vec<FixtureOutcome>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let mut s = format!("criterion {} [{}] {}", self.id, if self.pass { "pass" } else { "FAIL" }, self.title);
        for f in self.fixtures.iter().filter(|f| !f.pass) {
            s.push_str(&format!("\n    {}: {}", f.fixture, f.failures.join("; ")));
        }
        s
    }
}

const RANDOM_BINARY: &str = "binary-random";

/// Criterion id, title, and the fixtures it runs on. An empty list means
/// every fixture.
const CRITERIA: &[(u32, &str, &[&str])] = &[
    (1, "quaternary cubics: series, r_min = eps+1, edeg, not birational", &["quaternary-cubics"]),
    (2, "ternary monomial cubics: nu table, elimination equation, det B = F^3", &["ternary-monomial-cubics"]),
    (3, "binary example: link generators, h-forms, B and det B", &["binary"]),
    (4, "det B theorems on 25 random binary ideals", &[RANDOM_BINARY]),
    (5, "ternary quadrics: generic and degenerate case", &["ternary-quadrics", "ternary-quadrics-degenerate"]),
    (6, "ternary cubics and quartics: det B and nu tables", &["ternary-cubics", "ternary-cubics-gorenstein", "ternary-quartics"]),
    (
        7,
        "quaternary quadrics: nu, det B powers, two-step derivation",
        &["quaternary-quadrics", "quaternary-quadrics-square", "quaternary-quadrics-two-step"],
    ),
    (8, "oracle agreement and the two routes to L", &[]),
    (9, "counting theorems", &[]),
];

/// Loads every `*.toml` in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<IdealSpec>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| IdealSpec::from_path(p)).collect()
}

fn options() -> Options {
    Options { caps: Caps { max_a: 8, max_b: 3 }, samuel_max: None, oracle: true, timings: false }
}

struct Analyzed {
    loaded: Loaded,
    report: std::result::Result<AnalysisReport, Error>,
}

fn analyze_all(corpus: &[IdealSpec]) -> BTreeMap<String, std::result::Result<Analyzed, Error>> {
    let opts = options();
    std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .iter()
            .map(|spec| {
                scope.spawn(move || {
                    let loaded = spec.load()?;
                    let report = analyze(&loaded, Scope::All, &opts);
                    Ok(Analyzed { loaded, report })
                })
            })
            .collect();
        corpus
            .iter()
            .zip(handles)
            .map(|(spec, h)| (spec.name.clone(), h.join().expect("fixture thread panicked")))
            .collect()
    })
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }
}

fn parse_all(ring: &Arc<Ring>, items: &[String]) -> Result<Vec<Poly>> {
    items.iter().map(|s| parse_poly(s, ring)).collect()
}

fn parse_matrix(ring: &Arc<Ring>, rows: &[Vec<String>]) -> Result<Matrix> {
    let rows = rows.iter().map(|r| parse_all(ring, r)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(ring, rows))
}

fn same_up_to_scalar(a: &Poly, b: &Poly) -> bool {
    a.monic() == b.monic()
}

fn same_sets_up_to_scalar(a: &[Poly], b: &[Poly]) -> bool {
    let norm = |v: &[Poly]| {
        let mut s: Vec<String> = v.iter().map(|p| p.monic().to_string()).collect();
        s.sort();
        s
    };
    norm(a) == norm(b)
}

/// Compares a report with the values stored in its fixture.
fn expected_checks(a: &Analyzed, r: &AnalysisReport, c: &mut Checker) -> Result<()> {
    let e = &a.loaded.spec.expected;
    let base = &a.loaded.ring;
    let s = Ring::rees_over(base);
    for v in r.verdicts.iter().filter(|v| !v.pass) {
        c.failures.push(format!("verdict failed: {} {}", v.check, v.detail));
    }
    let h = r.hilbert.as_ref();
    let rees = r.rees.as_ref();
    let fiber = r.fiber.as_ref();
    let matrix = r.matrix.as_ref();
    let present = |name: &str, ok: bool, c: &mut Checker| c.check(ok, || format!("report has no {name} section"));
    present("hilbert", h.is_some(), c);
    present("rees", rees.is_some(), c);
    present("fiber", fiber.is_some(), c);
    if let Some(h) = h {
        if let Some(want) = &e.series_quotient {
            c.eq("series of R/I", &h.quotient, want);
        }
        if let Some(want) = &e.series_colon {
            c.eq("series of R/(J:a)", &h.colon, want);
        }
        if let Some(want) = &e.series_content {
            c.eq("series of R/I1(phi)", &h.content, want);
        }
        if let Some(want) = e.colon_generators {
            c.eq("generators of J:a", h.colon_generators, want);
        }
    }
    if let Some(p) = &r.presentation {
        if let Some(want) = e.syzygies {
            c.eq("nu(Z1)", p.degrees.len(), want);
        }
        if let Some(want) = &e.syzygy_degrees {
            let mut got: BTreeMap<u32, usize> = BTreeMap::new();
            for &deg in &p.degrees {
                *got.entry(deg).or_default() += 1;
            }
            c.eq("syzygy degrees", got.into_iter().collect::<Vec<_>>(), want.clone());
        }
        if let Some(want) = &e.presentation {
            let got = parse_matrix(base, &p.matrix)?;
            let want = parse_matrix(base, want)?;
            c.check(same_up_to_permutation(&got, &want), || "presentation matrix differs".into());
        }
    }
    if let Some(rs) = rees {
        if let Some(want) = e.balance {
            c.eq("balance s", rs.balance.s, Some(want));
        }
        if let Some(want) = e.epsilon {
            c.eq("epsilon", rs.epsilon, want);
        }
        if let Some(want) = e.r_min {
            c.eq("r_min", rs.r_min, want);
        }
        if let Some(want) = &e.nu {
            let got: BTreeMap<u32, usize> = rs.nu.iter().copied().collect();
            for &(i, n) in want {
                c.eq(&format!("nu(L_{i})"), got.get(&i).copied().unwrap_or(0), n);
            }
        }
        if let Some(want) = &e.symmetric {
            let got = parse_all(&s, &rs.l1)?;
            let want = parse_all(&s, want)?;
            c.check(same_sets_up_to_scalar(&got, &want), || "generators of (L1) differ".into());
        }
    }
    if let Some(f) = fiber {
        if let Some(want) = e.edeg {
            c.eq("edeg", f.edeg, want);
        }
        if let Some(want) = e.birational {
            c.eq("birational", f.birational, want);
        }
        if let Some(want) = &e.elimination {
            let got = parse_poly(&f.equation, &s)?;
            let want = parse_poly(want, &s)?;
            c.check(same_up_to_scalar(&got, &want), || format!("elimination equation {got}, expected {want}"));
        }
    }
    if let Some(want) = &e.hforms {
        match &r.binary {
            Some(b) => {
                let got = parse_all(&s, &b.hforms)?;
                let want = parse_all(&s, want)?;
                c.check(got == want, || "h-forms differ".into());
            }
            None => c.failures.push("report has no binary section".into()),
        }
    }
    let wants_matrix = e.matrix.is_some() || e.det_degree.is_some() || e.power.is_some() || e.quadrics_case.is_some();
    match (matrix, wants_matrix) {
        (None, true) => c.failures.push("report has no content matrix".into()),
        (Some(m), _) => {
            if let Some(want) = &e.matrix {
                let got = parse_matrix(&s, &m.b)?;
                let want = parse_matrix(&s, want)?;
                c.check(same_up_to_permutation(&got, &want), || "content matrix differs".into());
            }
            if let Some(want) = e.det_degree {
                c.eq("degree of det B", m.det_degree, want);
            }
            if let Some(want) = e.power {
                c.eq("det B exponent", m.exponent, want);
                c.check(m.pure_power, || "det B is not a pure power of the elimination equation".into());
            }
            if let Some(want) = &e.quadrics_case {
                c.check(m.kind.ends_with(want.as_str()), || format!("quadrics case {}, expected {want}", m.kind));
            }
        }
        (None, false) => {}
    }
    Ok(())
}

/// Checks specific to one criterion, on top of the stored values.
fn criterion_checks(id: u32, a: &Analyzed, r: &AnalysisReport, c: &mut Checker) -> Result<()> {
    let s = Ring::rees_over(&a.loaded.ring);
    match id {
        1 => {
            if let Some(rs) = &r.rees {
                c.eq("r_min = eps+1", rs.r_min, rs.epsilon + 1);
            }
        }
        2 | 3 | 5 | 6 | 7 => {
            let m = r.matrix.as_ref();
            c.check(m.is_some_and(|m| m.b.len() == m.basis.len()), || "content matrix is not square".into());
            if let (Some(m), Some(f)) = (m, &r.fiber) {
                let det = parse_poly(&m.det, &s)?;
                let eq = parse_poly(&f.equation, &s)?;
                c.check(same_up_to_scalar(&det, &eq.pow(m.exponent)?), || {
                    format!("det B is not a scalar multiple of the elimination equation to the power {}", m.exponent)
                });
            }
            if r.name.ends_with("two-step") {
                let ok = r.verdicts.iter().any(|v| v.check.starts_with("det B1, det B2") && v.pass);
                c.check(ok, || "two-step determinants are not the fresh generators of L3".into());
            }
        }
        8 => {
            match &r.oracle {
                Some(o) => {
                    c.eq("oracle bidegrees", o.bidegrees, 9 * 4);
                    c.check(o.hilbert_degrees > 0, || "no Hilbert function degrees compared".into());
                }
                None => c.failures.push("no oracle comparison".into()),
            }
        }
        9 => {
            let Some(rs) = &r.rees else { return Ok(()) };
            c.eq("fresh quadrics vs type of R/I1(phi)", rs.fresh_quadrics.len(), rs.balance.content_type);
            let d = r.d as u32;
            c.check(rs.r_min <= rs.epsilon + 1 && rs.epsilon + 1 <= d * (r.n - 1), || {
                format!("r_min = {}, eps+1 = {}, d(n-1) = {}", rs.r_min, rs.epsilon + 1, d * (r.n - 1))
            });
            if rs.balance.s.is_some() {
                match &rs.counts {
                    Some(k) => c.check(k.holds(), || format!("syzygy count {:?}", k)),
                    None => c.failures.push("no syzygy count".into()),
                }
                match &rs.socle_theorem {
                    Some(t) => c.check(t.holds() && t.power_identity != Some(false), || format!("socle check {:?}", t)),
                    None => c.failures.push("no socle check".into()),
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn fixture_outcome(id: u32, name: &str, a: &std::result::Result<Analyzed, Error>) -> FixtureOutcome {
    let mut c = Checker { failures: Vec::new() };
    match a {
        Err(e) => c.failures.push(format!("cannot load: {e}")),
        Ok(a) => match &a.report {
            Err(e) => c.failures.push(format!("analysis failed: {e}")),
            Ok(r) => {
                let res = if id == 8 || id == 9 {
                    criterion_checks(id, a, r, &mut c)
                } else {
                    expected_checks(a, r, &mut c).and_then(|_| criterion_checks(id, a, r, &mut c))
                };
                if let Err(e) = res {
                    c.failures.push(format!("cannot compare: {e}"));
                }
            }
        },
    }
    FixtureOutcome { fixture: name.to_string(), pass: c.failures.is_empty(), failures: c.failures }
}

/// `(n, r)` for the `i`-th random binary ideal.
pub fn random_binary_shape(i: u64) -> (u32, u32) {
    let n = 3 + (i % 4) as u32;
    let r = 1 + ((i / 4) as u32) % (n / 2);
    (n, r)
}

fn random_binary_outcomes(count: u64) -> Vec<FixtureOutcome> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..count)
            .map(|i| {
                scope.spawn(move || {
                    let (n, r) = random_binary_shape(i);
                    let run = || -> Result<Option<String>> {
                        let (ring, gens) = random_binary(i, n, r)?;
                        let setup = ReesSetup::new(&ring, &gens, None)?;
                        let rees = rees_ideal(&setup)?;
                        let data = binary_link(&setup)?;
                        let th = binary_theorems(&setup, &rees, &data)?;
                        Ok((!th.holds(n)).then(|| format!("{th:?}")))
                    };
                    let failures = match run() {
                        Ok(None) => Vec::new(),
                        Ok(Some(msg)) => vec![msg],
                        Err(e) => vec![e.to_string()],
                    };
                    FixtureOutcome {
                        fixture: format!("{RANDOM_BINARY} seed {i} (n={n}, r={r})"),
                        pass: failures.is_empty(),
                        failures,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("random binary thread panicked")).collect()
    })
}

/// Runs the criteria on `corpus`. With a filter, only fixtures whose name
/// starts with it take part, and criteria left without fixtures are skipped.
pub fn verify_corpus(corpus: &[IdealSpec], filter: Option<&str>) -> Vec<CriterionResult> {
    let keep = |name: &str| filter.is_none_or(|f| name.starts_with(f));
    let chosen: Vec<IdealSpec> = corpus.iter().filter(|s| keep(&s.name)).cloned().collect();
    let analyzed = analyze_all(&chosen);
    let mut out = Vec::new();
    for &(id, title, names) in CRITERIA {
        let fixtures: Vec<FixtureOutcome> = if names == [RANDOM_BINARY] {
            if !keep(RANDOM_BINARY) {
                continue;
            }
            random_binary_outcomes(25)
        } else if names.is_empty() {
            analyzed.iter().map(|(name, a)| fixture_outcome(id, name, a)).collect()
        } else {
            names
                .iter()
                .filter(|n| keep(n))
                .map(|n| match analyzed.get(*n) {
                    Some(a) => fixture_outcome(id, n, a),
                    None => FixtureOutcome { fixture: n.to_string(), pass: false, failures: vec!["missing from corpus".into()] },
                })
                .collect()
        };
        if fixtures.is_empty() {
            continue;
        }
        out.push(CriterionResult {
            id,
            title: title.to_string(),
            pass: fixtures.iter().all(|f| f.pass),
            fixtures,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::corpus;

    #[test]
    fn perturbed_value_fails_only_its_fixture() {
        let mut specs: Vec<IdealSpec> = corpus()
            .into_iter()
            .filter(|s| s.name.starts_with("ternary-quadrics"))
            .collect();
        specs[0].expected.det_degree = Some(5);
        let res = verify_corpus(&specs, Some("ternary-quadrics"));
        let c5 = res.iter().find(|c| c.id == 5).unwrap();
        assert!(!c5.pass);
        let failed: Vec<_> = c5.fixtures.iter().filter(|f| !f.pass).map(|f| f.fixture.as_str()).collect();
        assert_eq!(failed, ["ternary-quadrics"]);
        assert!(res.iter().all(|c| c.id != 4));
        assert!(res.iter().filter(|c| c.id != 5).all(|c| c.pass), "{res:?}");
    }

    #[test]
    fn random_shapes_mix_r_and_s() {
        let shapes: Vec<_> = (0..25).map(random_binary_shape).collect();
        assert!(shapes.contains(&(4, 2)) && shapes.contains(&(6, 3)) && shapes.contains(&(5, 1)));
    }
}
