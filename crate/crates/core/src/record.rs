//! JSON record files describing one extension, their validation, and the
//! batch verification driver.
//!
//! The wire format (field names are fixed; see `docs/schema.md`):
//!
//! ```json
//! {
//!   "group": {"two_m": 2, "d": 2},
//!   "field_summary": {"h_K": 1, "h_Kplus": 1, "R_K": 1.0, "R_Kplus": 1.0,
//!                      "t_S": 0, "e": 0, "e_prime": null, "c": 0, "c_prime": null},
//!   "minus_units": {"gamma_action": [[-1]], "log_embeddings": [[0.48]],
//!                    "precision": 1e-10},
//!   "class_minus": {"ring": "Z", "relations": [[[1]]]},
//!   "l_values": [{"chi_exponent": 1, "re": 0.48, "im": 0.0, "precision": 1e-10}],
//!   "sub_extension_F": null,
//!   "provenance": {"oracle": "...", "version": "...", "defining_polynomials": []}
//! }
//! ```
//!
//! Schema violations (malformed JSON, missing or mistyped fields) map to
//! exit code 2; consistency violations (well-formed data that contradicts
//! an invariant) map to exit code 3. Every rejection carries a field path.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gmodule::{enumerate_psi, ModulePresentation, RingTag};
use crate::groupring::GroupSpec;
use crate::intmat::IntMat;
use crate::report::{
    AbsLValueRow, P1Report, P2Row, ProdformReport, RecordReport, Verdict,
};
use crate::stark::{
    check_p1, check_p2, construct, e_lower_bound, squareness, ExtensionRecord,
    Provenance,
};
use crate::unitlattice::{
    abs_lvalue_check, prodform_check, FieldSummary, LValueEntry, LValueInput, MinusUnitLattice,
};
use crate::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecordFile {
    pub group: GroupBlock,
    pub field_summary: FieldSummaryBlock,
    pub minus_units: MinusUnitsBlock,
    pub class_minus: ClassMinusBlock,
    pub l_values: Vec<LValueBlock>,
    #[serde(rename = "sub_extension_F", default)]
    pub sub_extension_f: Option<Box<RecordFile>>,
    pub provenance: ProvenanceBlock,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GroupBlock {
    pub two_m: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FieldSummaryBlock {
    #[serde(rename = "h_K")]
    pub h_k: u64,
    #[serde(rename = "h_Kplus")]
    pub h_kplus: u64,
    #[serde(rename = "R_K")]
    pub r_k: f64,
    #[serde(rename = "R_Kplus")]
    pub r_kplus: f64,
    #[serde(rename = "t_S")]
    pub t_s: u32,
    pub e: u32,
    #[serde(default)]
    pub e_prime: Option<u32>,
    pub c: u32,
    #[serde(default)]
    pub c_prime: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinusUnitsBlock {
    pub gamma_action: Vec<Vec<i64>>,
    pub log_embeddings: Vec<Vec<f64>>,
    pub precision: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassMinusBlock {
    /// One of `"Z"`, `"Z[i]"`, `"Z[H]"`, matching m = 1, 2, 3.
    pub ring: String,
    /// `relations[r][g]` is the ring element (integer coordinates in the
    /// ring basis) acting on generator `g` in relation `r`.
    pub relations: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LValueBlock {
    pub chi_exponent: usize,
    pub re: f64,
    pub im: f64,
    pub precision: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ProvenanceBlock {
    pub oracle: String,
    pub version: String,
    pub defining_polynomials: Vec<String>,
}

fn ring_from_name(name: &str, path: &str) -> Result<RingTag> {
    match name {
        "Z" => Ok(RingTag::Z),
        "Z[i]" => Ok(RingTag::Gaussian),
        "Z[H]" => Ok(RingTag::HGroupRing),
        other => Err(Error::schema(
            format!("{path}.ring"),
            format!("unknown ring tag {other:?}; expected \"Z\", \"Z[i]\" or \"Z[H]\""),
        )),
    }
}

impl RecordFile {
    /// Parse a record file from bytes. Structural problems come back as
    /// schema errors with a JSON field path.
    pub fn from_bytes(bytes: &[u8]) -> Result<RecordFile> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(de)
            .map_err(|e| Error::schema(e.path().to_string(), e.inner().to_string()))
    }

    /// Full semantic validation and conversion into an extension record.
    /// `path` is used as the prefix of field-path diagnostics.
    pub fn into_extension(self, path: &str) -> Result<ExtensionRecord> {
        self.build(path, true)
    }

    fn build(self, path: &str, top_level: bool) -> Result<ExtensionRecord> {
        let p = |s: &str| format!("{path}{s}");
        if self.group.two_m == 0 || self.group.two_m % 2 != 0 {
            return Err(Error::inconsistent(
                p(".group.two_m"),
                "group order must be even and positive",
            ));
        }
        let m = self.group.two_m / 2;
        if m > 3 {
            return Err(Error::inconsistent(
                p(".group.two_m"),
                format!(
                    "m = {m} is outside the supported constructions (m ≤ 3); \
                     there is no trivial-unit classification beyond |G| = 6"
                ),
            ));
        }
        if self.group.d < 2 {
            return Err(Error::inconsistent(
                p(".group.d"),
                "base field must be totally real of degree ≥ 2",
            ));
        }
        let group = GroupSpec::new(self.group.two_m, self.group.d)?;

        // Units lattice with the γ-order and shape checks.
        if self.minus_units.gamma_action.len() != m {
            return Err(Error::inconsistent(
                p(".minus_units.gamma_action"),
                format!("expected {m} rows"),
            ));
        }
        let gamma = IntMat::from_rows(&self.minus_units.gamma_action);
        let units = MinusUnitLattice::new(
            m,
            gamma,
            self.minus_units.log_embeddings.clone(),
            self.minus_units.precision,
        )
        .map_err(|e| prefix_error(e, path))?;
        // The log rows must realize the documented ordering: row j is the
        // log of the γ^j-conjugate, so it is determined by row 0 and the
        // action up to the stated precision.
        {
            let logs = &units.log_embeddings;
            let scale: f64 = logs[0].iter().map(|x| x.abs()).fold(1.0, f64::max);
            let allow = 8.0 * (m as f64) * units.precision * scale;
            let mut pow = IntMat::identity(m);
            for (j, row) in logs.iter().enumerate().skip(1) {
                pow = units.gamma_action.mul(&pow);
                for l in 0..m {
                    let derived: f64 = (0..m)
                        .map(|k| {
                            let c = i64::try_from(&pow[(k, l)]).unwrap_or(0);
                            c as f64 * logs[0][k]
                        })
                        .sum();
                    if (derived - row[l]).abs() > allow {
                        return Err(Error::inconsistent(
                            p(&format!(".minus_units.log_embeddings[{j}][{l}]")),
                            format!(
                                "row is not the γ^{j}-conjugate of row 0 \
                                 (got {}, derived {derived:.12e})",
                                row[l]
                            ),
                        ));
                    }
                }
            }
        }

        // Class module over the matching minus ring.
        let ring = ring_from_name(&self.class_minus.ring, &p(".class_minus"))?;
        let expected = RingTag::minus_ring_for(m)?;
        if ring != expected {
            return Err(Error::inconsistent(
                p(".class_minus.ring"),
                format!(
                    "ring {} does not match m = {m} (expected {})",
                    ring.name(),
                    expected.name()
                ),
            ));
        }
        let generators = self
            .class_minus
            .relations
            .first()
            .map(|r| r.len())
            .unwrap_or(0);
        let relations: Vec<Vec<Vec<BigInt>>> = self
            .class_minus
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|coords| coords.iter().map(|&x| BigInt::from(x)).collect())
                    .collect()
            })
            .collect();
        let class_minus = ModulePresentation::new(ring, generators, relations)
            .map_err(|e| prefix_error(e, path))?;
        let class_order = class_minus.order().map_err(|_| {
            Error::inconsistent(
                p(".class_minus.relations"),
                "presentation does not define a finite module",
            )
        })?;

        // Class data consistency: |Cl⁻| = h_K / h_K⁺ and c = v₂(|Cl⁻|).
        let s = self.field_summary;
        if s.h_k == 0 || s.h_kplus == 0 {
            return Err(Error::inconsistent(
                p(".field_summary"),
                "class numbers must be positive",
            ));
        }
        if s.h_k % s.h_kplus != 0 || BigInt::from(s.h_k / s.h_kplus) != class_order {
            return Err(Error::inconsistent(
                p(".field_summary.h_K"),
                format!(
                    "h_K/h_Kplus = {}/{} does not equal |Cl_K⁻| = {class_order}",
                    s.h_k, s.h_kplus
                ),
            ));
        }
        let computed_c = two_valuation(&class_order);
        if s.c != computed_c {
            return Err(Error::inconsistent(
                p(".field_summary.c"),
                format!("c = {} but v₂(|Cl_K⁻|) = {computed_c}", s.c),
            ));
        }
        if !(s.r_k > 0.0) || !(s.r_kplus > 0.0) {
            return Err(Error::inconsistent(
                p(".field_summary.R_K"),
                "regulators must be positive",
            ));
        }

        // The proven lower bound on e.
        let bound = e_lower_bound(self.group.d, m);
        if s.e < bound {
            return Err(Error::inconsistent(
                p(".field_summary.e"),
                format!(
                    "e = {} violates the bound e ≥ (d−1)m−2 = {bound}",
                    s.e
                ),
            ));
        }

        // L-values.
        let lvalues = LValueInput {
            two_m: self.group.two_m,
            entries: self
                .l_values
                .iter()
                .map(|b| LValueEntry {
                    chi_exponent: b.chi_exponent,
                    value: Complex64::new(b.re, b.im),
                    precision: b.precision,
                })
                .collect(),
        };
        lvalues.validate().map_err(|e| prefix_error(e, path))?;

        // Sextic sub-extension block.
        let sub_extension = match (m, self.sub_extension_f) {
            (3, Some(subfile)) => {
                let sub_path = p(".sub_extension_F");
                let sub = subfile.build(&sub_path, false)?;
                if sub.group.m() != 1 {
                    return Err(Error::inconsistent(
                        format!("{sub_path}.group.two_m"),
                        "the F/k block must be quadratic (two_m = 2)",
                    ));
                }
                if sub.group.d != self.group.d {
                    return Err(Error::inconsistent(
                        format!("{sub_path}.group.d"),
                        "F/k lives over the same base field k",
                    ));
                }
                let e_prime = s.e_prime.ok_or_else(|| {
                    Error::inconsistent(p(".field_summary.e_prime"), "sextic records need e'")
                })?;
                let c_prime = s.c_prime.ok_or_else(|| {
                    Error::inconsistent(p(".field_summary.c_prime"), "sextic records need c'")
                })?;
                if sub.summary.e != e_prime {
                    return Err(Error::inconsistent(
                        p(".field_summary.e_prime"),
                        format!(
                            "e' = {e_prime} disagrees with the F block's e = {}",
                            sub.summary.e
                        ),
                    ));
                }
                if sub.summary.c != c_prime {
                    return Err(Error::inconsistent(
                        p(".field_summary.c_prime"),
                        format!(
                            "c' = {c_prime} disagrees with the F block's c = {}",
                            sub.summary.c
                        ),
                    ));
                }
                if s.e < e_prime || (s.e - e_prime) % 2 != 0 {
                    return Err(Error::inconsistent(
                        p(".field_summary.e"),
                        format!("e − e' = {} must be nonnegative and even", s.e as i64 - e_prime as i64),
                    ));
                }
                if (s.e - e_prime) < (2 * self.group.d as u32).saturating_sub(2) {
                    return Err(Error::inconsistent(
                        p(".field_summary.e"),
                        format!(
                            "e − e' = {} violates the bound e − e' ≥ 2d − 2 = {}",
                            s.e - e_prime,
                            2 * self.group.d - 2
                        ),
                    ));
                }
                if self.field_summary.h_k % 3 == 0 {
                    return Err(Error::inconsistent(
                        p(".field_summary.h_K"),
                        "3 | h_K is outside the sextic hypotheses",
                    ));
                }
                Some(Box::new(sub))
            }
            (3, None) => {
                return Err(Error::inconsistent(
                    p(".sub_extension_F"),
                    "sextic records must include the F/k block",
                ));
            }
            (_, Some(_)) => {
                return Err(Error::inconsistent(
                    p(".sub_extension_F"),
                    "only sextic records carry an F/k block",
                ));
            }
            (_, None) => None,
        };
        let _ = top_level;

        Ok(ExtensionRecord {
            group,
            summary: FieldSummary {
                h_k: s.h_k,
                h_kplus: s.h_kplus,
                r_k: s.r_k,
                r_kplus: s.r_kplus,
                t_s: s.t_s,
                e: s.e,
                e_prime: s.e_prime,
                c: s.c,
                c_prime: s.c_prime,
            },
            units,
            class_minus,
            lvalues,
            sub_extension,
            provenance: Provenance {
                oracle: self.provenance.oracle,
                version: self.provenance.version,
                defining_polynomials: self.provenance.defining_polynomials,
            },
        })
    }
}

fn prefix_error(e: Error, path: &str) -> Error {
    match e {
        Error::Inconsistent { path: p, message } => Error::Inconsistent {
            path: format!("{path}.{p}"),
            message,
        },
        Error::Schema { path: p, message } => Error::Schema {
            path: format!("{path}.{p}"),
            message,
        },
        other => Error::inconsistent(path, other.to_string()),
    }
}

fn two_valuation(n: &BigInt) -> u32 {
    let mut v = 0;
    let mut n = n.abs();
    let two = BigInt::from(2);
    while n > BigInt::one() && (&n % &two).is_zero() {
        n /= &two;
        v += 1;
    }
    v
}

/// Read and fully validate one record file.
pub fn ingest(path: &std::path::Path) -> Result<ExtensionRecord> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::schema(path.display().to_string(), format!("cannot read file: {e}")))?;
    let file = RecordFile::from_bytes(&bytes)?;
    file.into_extension(&path.display().to_string())
}

/// Verification options, mirroring the CLI flags.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub p_max: u64,
    pub tolerance: f64,
    pub strict: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            p_max: 50,
            tolerance: 1e-8,
            strict: false,
        }
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    'outer: for p in 2..=n {
        for q in &primes {
            if q * q > p {
                break;
            }
            if p % q == 0 {
                continue 'outer;
            }
        }
        primes.push(p);
    }
    primes
}

/// Run the full verification pipeline on one ingested record.
pub fn verify_record(path: &str, r: &ExtensionRecord, opts: &VerifyOptions) -> RecordReport {
    let m = r.m();
    let d = r.group.d;
    let mut report = RecordReport {
        path: path.to_string(),
        m,
        d,
        candidate: Vec::new(),
        p1: None,
        p2: Vec::new(),
        prodform: None,
        abs_l: Vec::new(),
        abelian: None,
        squareness: None,
        sextic: None,
        diagnostics: Vec::new(),
        overall: Verdict::Pass,
    };

    let outcome = match construct(r) {
        Ok(o) => o,
        Err(e) => {
            report.diagnostics.push(format!("construction failed: {e}"));
            report.finalize(opts.strict);
            return report;
        }
    };
    let candidate = &outcome.candidate;
    report.candidate = candidate.coords.iter().map(|c| c.to_string()).collect();
    report.abelian = Some(outcome.abelian.clone());
    report.sextic = outcome.sextic.clone();
    for n in &outcome.notes {
        report.diagnostics.push(n.clone());
    }

    match check_p1(r, candidate) {
        Ok(p1) => {
            report.p1 = Some(P1Report {
                index: p1.index.to_string(),
                target: p1.target.to_string(),
                verdict: if p1.pass { Verdict::Pass } else { Verdict::Fail },
            });
        }
        Err(e) => report.diagnostics.push(format!("P1 check failed: {e}")),
    }

    for p in primes_up_to(opts.p_max) {
        if r.group.two_m as u64 % p == 0 {
            continue;
        }
        match enumerate_psi(p, r.group.two_m) {
            Ok(psis) => {
                for psi in psis {
                    match check_p2(r, candidate, &psi) {
                        Ok(out) => report.p2.push(P2Row {
                            p,
                            psi: psi.label(),
                            odd: psi.is_odd(),
                            lhs: out.lhs.to_string(),
                            rhs: out.rhs.to_string(),
                            verdict: if out.pass { Verdict::Pass } else { Verdict::Fail },
                        }),
                        Err(e) => report
                            .diagnostics
                            .push(format!("P2 check failed at {}: {e}", psi.label())),
                    }
                }
            }
            Err(e) => report.diagnostics.push(format!("ψ enumeration at p={p}: {e}")),
        }
    }

    match prodform_check(&r.units, &candidate.coords, &r.lvalues, opts.tolerance) {
        Ok(out) => {
            report.prodform = Some(ProdformReport {
                lhs: out.lhs,
                rhs: out.rhs,
                ratio: out.ratio,
                err_radius: out.err_radius,
                verdict: out.verdict,
                note: out.note,
            });
        }
        Err(e) => report.diagnostics.push(format!("product formula: {e}")),
    }

    for chi in 0..r.group.two_m {
        match abs_lvalue_check(&r.units, &candidate.coords, &r.lvalues, chi, opts.tolerance) {
            Ok(out) => report.abs_l.push(AbsLValueRow {
                chi_exponent: chi,
                lhs_abs: out.lhs_abs,
                rhs_abs: out.rhs_abs,
                err_radius: out.err_radius,
                verdict: out.verdict,
            }),
            Err(e) => report
                .diagnostics
                .push(format!("|L'| check at chi_{chi}: {e}")),
        }
    }

    match squareness(r, 1, Some(candidate)) {
        Ok(sq) => report.squareness = Some(sq),
        Err(e) => report.diagnostics.push(format!("squareness: {e}")),
    }

    report.finalize(opts.strict);
    report
}

/// Ingest-and-verify over a list of files; per-record failures are
/// isolated into their reports. Records are independent, so they run in a
/// work pool; report order follows the input order. Returns the reports
/// and the process exit code (0 all pass, 1 verification failure, 2
/// schema error, 3 consistency error).
pub fn run_verify(paths: &[std::path::PathBuf], opts: &VerifyOptions) -> (Vec<RecordReport>, i32) {
    use rayon::prelude::*;
    let outcomes: Vec<(RecordReport, Option<u8>)> = paths
        .par_iter()
        .map(|path| {
            let display = path.display().to_string();
            match ingest(path) {
                Ok(record) => (verify_record(&display, &record, opts), None),
                Err(e) => {
                    let class = match &e {
                        Error::Schema { .. } => 2u8,
                        _ => 3u8,
                    };
                    (
                        RecordReport::failed(&display, 0, 0, e.to_string()),
                        Some(class),
                    )
                }
            }
        })
        .collect();
    let saw_schema = outcomes.iter().any(|(_, c)| *c == Some(2));
    let saw_consistency = outcomes.iter().any(|(_, c)| *c == Some(3));
    let reports: Vec<RecordReport> = outcomes.into_iter().map(|(r, _)| r).collect();
    let any_fail = reports.iter().any(|r| r.overall.is_fail());
    let code = if saw_schema {
        2
    } else if saw_consistency {
        3
    } else if any_fail {
        1
    } else {
        0
    };
    (reports, code)
}

/// Serialize an extension record back into the wire format (used by the
/// synthesizer and tests).
pub fn to_record_file(r: &ExtensionRecord) -> RecordFile {
    let m = r.m();
    let gamma: Vec<Vec<i64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| i64::try_from(&r.units.gamma_action[(i, j)]).expect("small entries"))
                .collect()
        })
        .collect();
    let relations: Vec<Vec<Vec<i64>>> = r
        .class_minus
        .relations
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|coords| {
                    coords
                        .iter()
                        .map(|x| i64::try_from(x).expect("small entries"))
                        .collect()
                })
                .collect()
        })
        .collect();
    RecordFile {
        group: GroupBlock {
            two_m: r.group.two_m,
            d: r.group.d,
        },
        field_summary: FieldSummaryBlock {
            h_k: r.summary.h_k,
            h_kplus: r.summary.h_kplus,
            r_k: r.summary.r_k,
            r_kplus: r.summary.r_kplus,
            t_s: r.summary.t_s,
            e: r.summary.e,
            e_prime: r.summary.e_prime,
            c: r.summary.c,
            c_prime: r.summary.c_prime,
        },
        minus_units: MinusUnitsBlock {
            gamma_action: gamma,
            log_embeddings: r.units.log_embeddings.clone(),
            precision: r.units.precision,
        },
        class_minus: ClassMinusBlock {
            ring: r.class_minus.ring.name().to_string(),
            relations,
        },
        l_values: r
            .lvalues
            .entries
            .iter()
            .map(|e| LValueBlock {
                chi_exponent: e.chi_exponent,
                re: e.value.re,
                im: e.value.im,
                precision: e.precision,
            })
            .collect(),
        sub_extension_f: r
            .sub_extension
            .as_ref()
            .map(|s| Box::new(to_record_file(s))),
        provenance: ProvenanceBlock {
            oracle: r.provenance.oracle.clone(),
            version: r.provenance.version.clone(),
            defining_polynomials: r.provenance.defining_polynomials.clone(),
        },
    }
}

/// A plain-text restatement of the exact JSON field layout, kept next to
/// the parsing code; `docs/schema.md` is generated from the same names.
pub const SCHEMA_FIELDS: &[&str] = &[
    "group.two_m",
    "group.d",
    "field_summary.h_K",
    "field_summary.h_Kplus",
    "field_summary.R_K",
    "field_summary.R_Kplus",
    "field_summary.t_S",
    "field_summary.e",
    "field_summary.e_prime",
    "field_summary.c",
    "field_summary.c_prime",
    "minus_units.gamma_action",
    "minus_units.log_embeddings",
    "minus_units.precision",
    "class_minus.ring",
    "class_minus.relations",
    "l_values[].chi_exponent",
    "l_values[].re",
    "l_values[].im",
    "l_values[].precision",
    "sub_extension_F",
    "provenance.oracle",
    "provenance.version",
    "provenance.defining_polynomials",
];
