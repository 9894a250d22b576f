//! Text and CSV renderings of the reports; JSON goes straight through serde.

use std::fmt::Write as _;

use collatz_fp::collatz::TrajectoryRecord;
use collatz_fp::verifier::{ConditionCoverageReport, LambdaSearchResult, RangeSpec, VerificationReport};

pub trait Render {
    fn text(&self) -> String;
    fn csv(&self) -> Result<String, csv::Error>;
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn range_line(r: &RangeSpec) -> String {
    let cases = r
        .cases
        .as_ref()
        .map_or_else(|| "all".to_string(), |c| join(c.iter().map(|c| c.label())));
    format!(
        "range: x in [{}, {}], y in [{}, {}], cases: {cases}",
        r.x_min, r.x_max, r.y_min, r.y_max
    )
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

impl Render for VerificationReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(s, "command: {} ({params})", self.command);
        let _ = writeln!(s, "{}", range_line(&self.range));
        let _ = writeln!(s, "checked: {}", self.pairs_checked);
        let _ = writeln!(
            s,
            "{:<28} {:>12} {:>14} {:>14} {:>8}",
            "cell", "checked", "min", "max", "bound"
        );
        for t in &self.per_case {
            let _ = writeln!(
                s,
                "{:<28} {:>12} {:>14} {:>14} {:>8}",
                t.cell,
                t.checked,
                opt(t.min.map(|e| e.value)),
                opt(t.max.map(|e| e.value)),
                opt(t.bound)
            );
        }
        let _ = writeln!(s, "violations: {}", self.violations_total);
        for v in &self.violations {
            let z = v.z.map_or_else(String::new, |z| format!(", z={}", z.0));
            let detail = v.detail.as_deref().map_or_else(String::new, |d| format!(" ({d})"));
            let _ = writeln!(s, "  {:?} at x={}, y={}{z}: {}{detail}", v.kind, v.x, v.y, v.value);
        }
        if self.violations.len() < self.violations_total as usize {
            let _ = writeln!(
                s,
                "  ... {} more",
                self.violations_total as usize - self.violations.len()
            );
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }

    fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "record", "cell", "checked", "min", "min_x", "min_y", "max", "max_x", "max_y", "bound", "x", "y", "z",
            "kind", "case", "value", "detail",
        ])?;
        for t in &self.per_case {
            w.write_record([
                "tally".into(),
                t.cell.clone(),
                t.checked.to_string(),
                opt(t.min.map(|e| e.value)),
                opt(t.min.map(|e| e.x)),
                opt(t.min.map(|e| e.y)),
                opt(t.max.map(|e| e.value)),
                opt(t.max.map(|e| e.x)),
                opt(t.max.map(|e| e.y)),
                opt(t.bound),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])?;
        }
        for v in &self.violations {
            let kind = serde_json::to_value(v.kind)
                .ok()
                .and_then(|k| k.as_str().map(String::from));
            w.write_record([
                "violation".into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                v.x.to_string(),
                v.y.to_string(),
                opt(v.z.map(|z| z.0)),
                kind.unwrap_or_default(),
                opt(v.case.map(|c| c.label())),
                v.value.to_string(),
                v.detail.clone().unwrap_or_default(),
            ])?;
        }
        finish_csv(w)
    }
}

impl Render for ConditionCoverageReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(
            s,
            "condition: {}{}, lambda={}, A={}, B={}, M={}{}",
            self.condition,
            if self.corrected_c4 { " (corrected)" } else { "" },
            p.lambda,
            p.a,
            p.b,
            p.m,
            if p.m_on_symmetrized {
                ", M on symmetrized weights"
            } else {
                ""
            }
        );
        let _ = writeln!(s, "{}", range_line(&self.range));
        let _ = writeln!(
            s,
            "pairs: {}, hold: {}, fail: {}",
            self.pairs_checked, self.holds_total, self.fails_total
        );
        for c in &self.cells {
            let pair = |p: Option<collatz_fp::verifier::PairRef>| {
                p.map_or_else(|| "-".into(), |p| format!("({}, {})", p.x, p.y))
            };
            let _ = writeln!(
                s,
                "{}: pairs {}, first {}, mirrored {}, fail {}",
                c.cell, c.pairs, c.holds_first, c.holds_mirrored, c.fails
            );
            let _ = writeln!(
                s,
                "    exemplars: first {}, mirrored {}, fail {}",
                pair(c.exemplar_first),
                pair(c.exemplar_mirrored),
                pair(c.exemplar_fail)
            );
            let _ = writeln!(
                s,
                "    ratios {{{}}} (= A: {}), B-sums {{{}}}",
                join(&c.ratios),
                c.ratio_equals_a,
                join(&c.b_sums)
            );
            let combos = c
                .raw_combos
                .iter()
                .map(|w| format!("{w:?}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(s, "    raw weights: {combos}{}", if c.truncated { " ..." } else { "" });
            let _ = writeln!(
                s,
                "    identification mismatches {}, M failures raw {}, symmetrized {}",
                c.identification_mismatches, c.m_failures_raw, c.m_failures_symmetrized
            );
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }

    fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "cell",
            "pairs",
            "holds_first",
            "holds_mirrored",
            "fails",
            "exemplar_first",
            "exemplar_mirrored",
            "exemplar_fail",
            "ratio_equals_a",
            "ratios",
            "b_sums",
            "raw_combos",
            "identification_mismatches",
            "m_failures_raw",
            "m_failures_symmetrized",
        ])?;
        let pair =
            |p: Option<collatz_fp::verifier::PairRef>| p.map_or_else(String::new, |p| format!("{} {}", p.x, p.y));
        for c in &self.cells {
            w.write_record([
                c.cell.clone(),
                c.pairs.to_string(),
                c.holds_first.to_string(),
                c.holds_mirrored.to_string(),
                c.fails.to_string(),
                pair(c.exemplar_first),
                pair(c.exemplar_mirrored),
                pair(c.exemplar_fail),
                c.ratio_equals_a.to_string(),
                join(&c.ratios),
                join(&c.b_sums),
                join(c.raw_combos.iter().map(join)),
                c.identification_mismatches.to_string(),
                c.m_failures_raw.to_string(),
                c.m_failures_symmetrized.to_string(),
            ])?;
        }
        finish_csv(w)
    }
}

impl Render for LambdaSearchResult {
    fn text(&self) -> String {
        let mut s = String::new();
        let g = &self.grid;
        let _ = writeln!(
            s,
            "search: {}{}, q={}, A in {{{}}}, B={}, M={}",
            g.condition,
            if g.corrected_c4 { " (corrected)" } else { "" },
            g.q,
            join(&g.a_grid),
            g.b,
            g.m
        );
        let _ = writeln!(s, "{}", range_line(&self.range));
        let _ = writeln!(s, "best A: {}", self.best_a);
        let _ = writeln!(s, "best lambda: {}", self.best_lambda);
        let _ = writeln!(
            s,
            "coverage: {} ({} of {} pairs)",
            self.coverage, self.covered_pairs, self.pairs_considered
        );
        for r in &self.per_case {
            let _ = writeln!(
                s,
                "  {:<10} lambda={:<6} {} of {}",
                r.case.label(),
                r.lambda,
                r.covered,
                r.pairs
            );
        }
        let _ = writeln!(
            s,
            "irreducibly failing: {}",
            join(self.irreducibly_failing.iter().map(|c| c.label()))
        );
        let _ = writeln!(s, "evaluations: {}", self.evaluations);
        if self.budget_exhausted {
            let _ = writeln!(
                s,
                "partial result: budget exhausted, unsearched cases {}",
                join(self.unsearched_cases.iter().map(|c| c.label()))
            );
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms} ms");
        }
        s
    }

    fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["record", "case", "lambda", "pairs", "covered"])?;
        for r in &self.per_case {
            w.write_record([
                "case".into(),
                r.case.label().to_string(),
                r.lambda.to_string(),
                r.pairs.to_string(),
                r.covered.to_string(),
            ])?;
        }
        w.write_record([
            "total".into(),
            String::new(),
            format!("A={}", self.best_a),
            self.pairs_considered.to_string(),
            self.covered_pairs.to_string(),
        ])?;
        finish_csv(w)
    }
}

impl Render for TrajectoryRecord {
    fn text(&self) -> String {
        let mut s = String::new();
        let steps = self.steps.map_or_else(|| "cap exceeded".into(), |n| n.to_string());
        let _ = writeln!(s, "seed: {}, map: {}", self.seed.0, self.map);
        let _ = writeln!(s, "steps: {steps}");
        let _ = writeln!(s, "peak: {}", self.peak.0);
        if let Some(path) = &self.path {
            let _ = writeln!(
                s,
                "path: {}",
                path.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
            );
        }
        s
    }

    fn csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["seed", "map", "steps", "peak", "path"])?;
        w.write_record([
            self.seed.0.to_string(),
            self.map.to_string(),
            opt(self.steps),
            self.peak.0.to_string(),
            self.path
                .as_ref()
                .map_or_else(String::new, |p| join(p.iter().map(|v| v.0))),
        ])?;
        finish_csv(w)
    }
}
