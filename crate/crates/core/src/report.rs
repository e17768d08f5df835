//! Verdicts and per-record verification reports.
//!
//! Every float comparison carries the propagated error radius of its
//! inputs and can end `Inconclusive` instead of turning a precision
//! shortfall into a mathematical claim. Exact integer comparisons never
//! produce `Inconclusive`.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Compare a measured absolute difference against the check tolerance,
/// given the propagated error radius of the data.
///
/// A difference within tolerance (and resolvable at that tolerance) passes;
/// a difference inside the error radius is inconclusive; a difference
/// exceeding both is a genuine failure.
pub fn float_verdict(diff: f64, err_radius: f64, tolerance: f64) -> Verdict {
    if !diff.is_finite() {
        return Verdict::Fail;
    }
    if diff <= tolerance && err_radius <= tolerance {
        Verdict::Pass
    } else if diff <= err_radius.max(tolerance) {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    /// `(U_K⁻ : Z[G]·candidate)`, exact.
    pub index: String,
    /// `2^{e+t_S}·|Cl_K⁻|`, exact.
    pub target: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct P2Row {
    pub p: u64,
    pub psi: String,
    pub odd: bool,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProdformReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub err_radius: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbsLValueRow {
    pub chi_exponent: usize,
    pub lhs_abs: f64,
    /// Absent for even characters, whose L'-side is identically zero.
    pub rhs_abs: Option<f64>,
    pub err_radius: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquarenessKind {
    IffTrue,
    IffFalse,
    NecessaryOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquarenessReport {
    pub kind: SquarenessKind,
    /// The instantiated inequality, e.g. `e+t_S+c = 0 < 1`.
    pub inequality: String,
    /// Largest `r` with the candidate a `2^r`-th power (by the iff
    /// criterion), when available.
    pub power_level: Option<u32>,
    /// Direct 2-divisibility of the constructed candidate in the lattice
    /// agrees with the criterion at r = 1.
    pub divisibility_cross_check: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianReport {
    pub verdict: Verdict,
    pub note: String,
}

/// Extra checks that only apply to sextic records.
#[derive(Clone, Debug, Serialize)]
pub struct SexticReport {
    /// `(U_F⁻ : Z·η̄_F) = 2^{e'+t_S}|Cl_F⁻|`, exact.
    pub norm_index_check: Verdict,
    /// `N_H·U_K⁻ = U_F⁻` as lattices (surjectivity of the norm).
    pub norm_surjectivity: Verdict,
    /// The norm of the constructed unit matches the quadratic construction
    /// for `F/k` up to the documented sign convention.
    pub f_unit_match: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordReport {
    pub path: String,
    pub m: usize,
    pub d: usize,
    /// Candidate in lattice coordinates, after canonical normalization.
    pub candidate: Vec<String>,
    pub p1: Option<P1Report>,
    pub p2: Vec<P2Row>,
    pub prodform: Option<ProdformReport>,
    pub abs_l: Vec<AbsLValueRow>,
    pub abelian: Option<AbelianReport>,
    pub squareness: Option<SquarenessReport>,
    pub sextic: Option<SexticReport>,
    pub diagnostics: Vec<String>,
    pub overall: Verdict,
}

impl RecordReport {
    pub fn failed(path: &str, m: usize, d: usize, message: String) -> Self {
        RecordReport {
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
            diagnostics: vec![message],
            overall: Verdict::Fail,
        }
    }

    /// Recompute the overall verdict from the parts.
    pub fn finalize(&mut self, strict: bool) {
        let mut v = Verdict::Pass;
        if let Some(p1) = &self.p1 {
            v = v.combine(p1.verdict);
        }
        for row in &self.p2 {
            v = v.combine(row.verdict);
        }
        if let Some(p) = &self.prodform {
            v = v.combine(p.verdict);
        }
        for row in &self.abs_l {
            v = v.combine(row.verdict);
        }
        if let Some(a) = &self.abelian {
            v = v.combine(a.verdict);
        }
        if let Some(s) = &self.sextic {
            v = v
                .combine(s.norm_index_check)
                .combine(s.norm_surjectivity)
                .combine(s.f_unit_match);
        }
        if !self.diagnostics.is_empty() {
            v = Verdict::Fail;
        }
        if strict && v == Verdict::Inconclusive {
            v = Verdict::Fail;
        }
        self.overall = v;
    }

    /// Deterministic human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write;
        let _ = writeln!(out, "record {} (m={}, d={})", self.path, self.m, self.d);
        if !self.candidate.is_empty() {
            let _ = writeln!(out, "  candidate: [{}]", self.candidate.join(", "));
        }
        if let Some(p1) = &self.p1 {
            let _ = writeln!(
                out,
                "  P1: index={} target={} {}",
                p1.index,
                p1.target,
                p1.verdict.as_str()
            );
        }
        for row in &self.p2 {
            let _ = writeln!(
                out,
                "  P2[{}]: lhs={} rhs={} {}",
                row.psi,
                row.lhs,
                row.rhs,
                row.verdict.as_str()
            );
        }
        if let Some(p) = &self.prodform {
            let _ = writeln!(
                out,
                "  product-formula: ratio={:+.12e} (err<={:.3e}) {}{}",
                p.ratio,
                p.err_radius,
                p.verdict.as_str(),
                p.note
                    .as_ref()
                    .map(|n| format!(" [{n}]"))
                    .unwrap_or_default()
            );
        }
        for row in &self.abs_l {
            match row.rhs_abs {
                Some(rhs) => {
                    let _ = writeln!(
                        out,
                        "  |L'|[chi={}]: lhs={:.12e} rhs={:.12e} {}",
                        row.chi_exponent,
                        row.lhs_abs,
                        rhs,
                        row.verdict.as_str()
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  |L'|[chi={}]: lhs={:.12e} rhs=0 (even) {}",
                        row.chi_exponent,
                        row.lhs_abs,
                        row.verdict.as_str()
                    );
                }
            }
        }
        if let Some(a) = &self.abelian {
            let _ = writeln!(out, "  abelian: {} ({})", a.verdict.as_str(), a.note);
        }
        if let Some(s) = &self.squareness {
            let kind = match s.kind {
                SquarenessKind::IffTrue => "iff-true",
                SquarenessKind::IffFalse => "iff-false",
                SquarenessKind::NecessaryOnly => "necessary-only",
            };
            let _ = write!(out, "  squareness: {kind} ({})", s.inequality);
            if let Some(lvl) = s.power_level {
                let _ = write!(out, " power-level=2^{lvl}");
            }
            if let Some(ok) = s.divisibility_cross_check {
                let _ = write!(out, " divisibility-cross-check={ok}");
            }
            out.push('\n');
        }
        if let Some(s) = &self.sextic {
            let _ = writeln!(
                out,
                "  sextic: norm-index {} / norm-surjectivity {} / F-unit-match {}",
                s.norm_index_check.as_str(),
                s.norm_surjectivity.as_str(),
                s.f_unit_match.as_str()
            );
        }
        for diag in &self.diagnostics {
            let _ = writeln!(out, "  diagnostic: {diag}");
        }
        let _ = writeln!(out, "  overall: {}", self.overall.as_str());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_verdict_semantics() {
        // Resolvable and small: pass.
        assert_eq!(float_verdict(1e-10, 1e-10, 1e-8), Verdict::Pass);
        // Difference beyond tolerance and beyond error: fail.
        assert_eq!(float_verdict(1e-3, 1e-10, 1e-8), Verdict::Fail);
        // Difference within the data's error radius: inconclusive.
        assert_eq!(float_verdict(1e-5, 1e-4, 1e-8), Verdict::Inconclusive);
        // Unresolvable data (error radius above tolerance): never pass.
        assert_eq!(float_verdict(0.0, 1e-6, 1e-8), Verdict::Inconclusive);
        assert_eq!(float_verdict(f64::NAN, 1e-10, 1e-8), Verdict::Fail);
    }

    #[test]
    fn combine_prefers_failure() {
        use Verdict::*;
        assert_eq!(Pass.combine(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.combine(Fail), Fail);
        assert_eq!(Pass.combine(Pass), Pass);
    }
}
