//! Summary statistics and figures from a run directory's tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use jabberwock_core::analysis::{mean, ols, paired_t, pearson_r, welch_t, within_ci, StatResult, StatsError, WithinCI};
use serde::{Deserialize, Serialize};

use crate::incremental::INCREMENTAL_CSV;
use crate::sweep::SCORES_CSV;
use crate::tables::{read_csv, IncrementalPoint, ScoreRow};

pub const SUMMARY_JSON: &str = "summary.json";
pub const SUMMARY_MD: &str = "summary.md";
pub const FIGURE_DIR: &str = "figures";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Test {
    pub label: String,
    pub result: Option<StatResult>,
    pub error: Option<String>,
}

impl Test {
    fn new(label: impl Into<String>, r: Result<StatResult, StatsError>) -> Self {
        match r {
            Ok(r) => Test { label: label.into(), result: Some(r), error: None },
            Err(e) => Test { label: label.into(), result: None, error: Some(e.to_string()) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: String,
    pub n: usize,
    pub mean_sim_translation: f64,
    pub mean_sim_baseline: f64,
    pub mean_specificity: f64,
    /// Paired t of sim_translation against sim_baseline.
    pub translation_vs_baseline: Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementalSummary {
    pub points: usize,
    pub passages: usize,
    /// OLS of sim_prefix on prefix_content_words.
    pub slope_content_words: Test,
    pub slope_sentences: Test,
    pub correlation: Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    /// Condition the genre and provenance contrasts use.
    pub primary_condition: Option<String>,
    pub conditions: Vec<ConditionSummary>,
    pub within_ci: Option<WithinCI>,
    pub within_ci_error: Option<String>,
    /// Passages left out of the within-passage CI for missing cells.
    pub within_ci_dropped: Vec<String>,
    /// Each condition against standard, paired by passage.
    pub vs_standard: Vec<Test>,
    /// Welch t on sim_translation between every pair of genres.
    pub genre_contrasts: Vec<Test>,
    pub provenance_contrast: Option<Test>,
    pub incremental: Option<IncrementalSummary>,
}

fn order_conditions(names: BTreeSet<&str>) -> Vec<String> {
    use jabberwock_core::ConditionName;
    let mut known: Vec<String> =
        ConditionName::ALL.iter().map(|c| c.as_str()).filter(|c| names.contains(c)).map(String::from).collect();
    known.extend(names.iter().filter(|n| n.parse::<ConditionName>().is_err()).map(|n| n.to_string()));
    known
}

fn by_passage<'a>(rows: &'a [ScoreRow], condition: &str) -> BTreeMap<&'a str, &'a ScoreRow> {
    rows.iter().filter(|r| r.condition == condition).map(|r| (r.passage_id.as_str(), r)).collect()
}

pub fn summarize(rows: &[ScoreRow], incremental: Option<&[IncrementalPoint]>) -> Summary {
    let conditions = order_conditions(rows.iter().map(|r| r.condition.as_str()).collect());
    let primary = conditions.first().cloned();

    let condition_summaries = conditions
        .iter()
        .map(|c| {
            let rs: Vec<&ScoreRow> = rows.iter().filter(|r| &r.condition == c).collect();
            let st: Vec<f64> = rs.iter().map(|r| r.sim_translation).collect();
            let sb: Vec<f64> = rs.iter().map(|r| r.sim_baseline).collect();
            let sp: Vec<f64> = rs.iter().map(|r| r.specificity).collect();
            ConditionSummary {
                condition: c.clone(),
                n: rs.len(),
                mean_sim_translation: mean(&st),
                mean_sim_baseline: mean(&sb),
                mean_specificity: mean(&sp),
                translation_vs_baseline: Test::new(format!("{c}: translation vs baseline"), paired_t(&st, &sb)),
            }
        })
        .collect();

    let passages: BTreeSet<&str> = rows.iter().map(|r| r.passage_id.as_str()).collect();
    let cells: Vec<BTreeMap<&str, &ScoreRow>> = conditions.iter().map(|c| by_passage(rows, c)).collect();
    let (mut complete, mut dropped) = (Vec::new(), Vec::new());
    for p in &passages {
        let scores: Vec<Option<f64>> = cells.iter().map(|m| m.get(p).map(|r| r.sim_translation)).collect();
        if scores.iter().all(Option::is_some) {
            complete.push((p.to_string(), scores));
        } else {
            dropped.push(p.to_string());
        }
    }
    let (within, within_error) = if conditions.len() < 2 {
        (None, Some("within-passage CI needs at least two conditions".to_string()))
    } else {
        match within_ci(&complete, &conditions) {
            Ok(w) => (Some(w), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };

    let mut vs_standard = Vec::new();
    if let Some(std_cells) = conditions.iter().position(|c| c == "standard").map(|i| &cells[i]) {
        for (c, m) in conditions.iter().zip(&cells).filter(|(c, _)| *c != "standard") {
            let (x, y): (Vec<f64>, Vec<f64>) =
                m.iter().filter_map(|(p, r)| std_cells.get(p).map(|s| (r.sim_translation, s.sim_translation))).unzip();
            vs_standard.push(Test::new(format!("{c} - standard"), paired_t(&x, &y)));
        }
    }

    let mut genre_contrasts = Vec::new();
    let mut provenance_contrast = None;
    if let Some(pc) = &primary {
        let prim: Vec<&ScoreRow> = rows.iter().filter(|r| &r.condition == pc).collect();
        let mut genres: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for r in &prim {
            genres.entry(r.genre.as_str()).or_default().push(r.sim_translation);
        }
        let names: Vec<&str> = genres.keys().copied().collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                genre_contrasts.push(Test::new(format!("{a} - {b}"), welch_t(&genres[a], &genres[b])));
            }
        }
        let prov = |k: &str| prim.iter().filter(|r| r.provenance == k).map(|r| r.sim_translation).collect::<Vec<_>>();
        let (seen, novel) = (prov("in_pretraining"), prov("novel"));
        if !seen.is_empty() || !novel.is_empty() {
            provenance_contrast = Some(Test::new("in_pretraining - novel", welch_t(&seen, &novel)));
        }
    }

    let incremental = incremental.filter(|p| !p.is_empty()).map(|pts| {
        let y: Vec<f64> = pts.iter().map(|p| p.sim_prefix).collect();
        let words: Vec<f64> = pts.iter().map(|p| p.prefix_content_words as f64).collect();
        let sentences: Vec<f64> = pts.iter().map(|p| p.prefix_len_sentences as f64).collect();
        let slope = |x: Vec<f64>, name: &str| {
            let fit = ols(&y, &[x], &[name], false).map(|f| f.coefficient(name).cloned().expect("term present"));
            Test::new(format!("sim_prefix ~ {name}"), fit)
        };
        IncrementalSummary {
            points: pts.len(),
            passages: pts.iter().map(|p| p.passage_id.as_str()).collect::<BTreeSet<_>>().len(),
            correlation: Test::new("r(prefix_content_words, sim_prefix)", pearson_r(&words, &y)),
            slope_content_words: slope(words, "prefix_content_words"),
            slope_sentences: slope(sentences, "prefix_len_sentences"),
        }
    });

    Summary {
        rows: rows.len(),
        primary_condition: primary,
        conditions: condition_summaries,
        within_ci: within,
        within_ci_error: within_error,
        within_ci_dropped: dropped,
        vs_standard,
        genre_contrasts,
        provenance_contrast,
        incremental,
    }
}

fn test_row(out: &mut String, t: &Test) {
    match (&t.result, &t.error) {
        (Some(r), _) => {
            let _ = writeln!(
                out,
                "| {} | {:.4} | {:.3} | {:.1} | {:.3e} | {} |",
                t.label, r.estimate, r.t, r.df, r.p, r.n
            );
        }
        (None, e) => {
            let _ = writeln!(out, "| {} | | | | | {} |", t.label, e.as_deref().unwrap_or("n/a"));
        }
    }
}

const TEST_HEAD: &str = "| test | estimate | t | df | p | n |\n|---|---|---|---|---|---|\n";

pub fn render_markdown(s: &Summary) -> String {
    let mut out = String::from("# Run summary\n\n");
    let _ = writeln!(out, "{} scored row(s).\n", s.rows);
    out.push_str("## Conditions\n\n| condition | n | sim_translation | sim_baseline | specificity | 95% within-CI ± |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for c in &s.conditions {
        let hw = s.within_ci.as_ref().and_then(|w| w.half_widths.get(&c.condition)).map(|h| format!("{h:.4}"));
        let _ = writeln!(
            out,
            "| {} | {} | {:.4} | {:.4} | {:.4} | {} |",
            c.condition,
            c.n,
            c.mean_sim_translation,
            c.mean_sim_baseline,
            c.mean_specificity,
            hw.unwrap_or_else(|| "n/a".into())
        );
    }
    if let Some(e) = &s.within_ci_error {
        let _ = writeln!(out, "\nWithin-passage CI not computed: {e}");
    }
    if !s.within_ci_dropped.is_empty() {
        let _ = writeln!(out, "\nLeft out of the within-passage CI (missing cells): {}", s.within_ci_dropped.join(", "));
    }
    out.push_str("\n## Translation vs baseline\n\n");
    out.push_str(TEST_HEAD);
    for c in &s.conditions {
        test_row(&mut out, &c.translation_vs_baseline);
    }
    if !s.vs_standard.is_empty() {
        out.push_str("\n## Conditions vs standard (paired)\n\n");
        out.push_str(TEST_HEAD);
        s.vs_standard.iter().for_each(|t| test_row(&mut out, t));
    }
    if !s.genre_contrasts.is_empty() {
        let _ = writeln!(out, "\n## Genre contrasts ({}, Welch)\n", s.primary_condition.as_deref().unwrap_or(""));
        out.push_str(TEST_HEAD);
        s.genre_contrasts.iter().for_each(|t| test_row(&mut out, t));
    }
    if let Some(t) = &s.provenance_contrast {
        out.push_str("\n## Provenance contrast (Welch)\n\n");
        out.push_str(TEST_HEAD);
        test_row(&mut out, t);
    }
    if let Some(inc) = &s.incremental {
        let _ = writeln!(out, "\n## Incremental context\n\n{} point(s) over {} passage(s).\n", inc.points, inc.passages);
        out.push_str(TEST_HEAD);
        for t in [&inc.slope_content_words, &inc.slope_sentences, &inc.correlation] {
            test_row(&mut out, t);
        }
    }
    out
}

// ---- SVG ----

const W: f64 = 720.0;
const H: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Stable horizontal offset in [-1, 1] from a key.
fn jitter(key: &str) -> f64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    (h % 10_000) as f64 / 5_000.0 - 1.0
}

struct Frame {
    lo: f64,
    hi: f64,
    body: String,
}

impl Frame {
    fn new(title: &str, y_label: &str, values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(body, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(body, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, esc(title));
        let f = Frame { lo, hi, body };
        let (y0, y1) = (f.y(lo), f.y(hi));
        let mut body = f.body;
        let _ = writeln!(body, r#"<line class="axis" x1="{LEFT}" y1="{y0}" x2="{LEFT}" y2="{y1}" stroke="black"/>"#);
        let _ = writeln!(body, r#"<line class="axis" x1="{LEFT}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#, W - RIGHT);
        for i in 0..=4 {
            let v = lo + (hi - lo) * f64::from(i) / 4.0;
            let y = lo_hi_y(lo, hi, v);
            let _ = writeln!(body, r#"<text x="{}" y="{:.1}" text-anchor="end">{v:.2}</text>"#, LEFT - 6.0, y + 4.0);
        }
        let _ = writeln!(
            body,
            r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
            (TOP + H - BOTTOM) / 2.0,
            esc(y_label)
        );
        Frame { lo, hi, body }
    }

    fn y(&self, v: f64) -> f64 {
        lo_hi_y(self.lo, self.hi, v)
    }

    fn point(&mut self, x: f64, v: f64, class: &str, fill: &str, title: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{x:.2}" cy="{:.2}" r="3" fill="{fill}" fill-opacity="0.75"><title>{}</title></circle>"#,
            self.y(v),
            esc(title)
        );
    }

    fn x_label(&mut self, x: f64, label: &str) {
        let _ = writeln!(self.body, r#"<text x="{x:.1}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 18.0, esc(label));
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn lo_hi_y(lo: f64, hi: f64, v: f64) -> f64 {
    let span = if hi > lo { hi - lo } else { 1.0 };
    H - BOTTOM - (v - lo) / span * (H - TOP - BOTTOM)
}

fn band(i: usize, n: usize) -> (f64, f64) {
    let width = (W - LEFT - RIGHT) / n.max(1) as f64;
    (LEFT + width * (i as f64 + 0.5), width)
}

/// Strip chart of sim_translation per group, with each row's sim_baseline
/// as a gray point beside it.
pub fn strip_svg(title: &str, rows: &[&ScoreRow], group: impl Fn(&ScoreRow) -> String) -> String {
    let mut groups: BTreeMap<String, Vec<&ScoreRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(group(r)).or_default().push(r);
    }
    let values = rows.iter().flat_map(|r| [r.sim_translation, r.sim_baseline]);
    let mut f = Frame::new(title, "cosine similarity to original", values);
    let n = groups.len();
    for (i, (name, rs)) in groups.iter().enumerate() {
        let (cx, width) = band(i, n);
        f.x_label(cx, &format!("{name} (n={})", rs.len()));
        for r in rs {
            let j = jitter(&r.passage_id) * width * 0.12;
            f.point(cx - width * 0.15 + j, r.sim_translation, "point translation", "#1f77b4", &r.passage_id);
            f.point(cx + width * 0.15 + j, r.sim_baseline, "point baseline", "#999999", &format!("{} baseline", r.passage_id));
        }
    }
    f.finish()
}

/// Mean per condition with within-passage CI whiskers, plus every row.
pub fn condition_svg(rows: &[ScoreRow], summary: &Summary) -> String {
    let conditions: Vec<&str> = summary.conditions.iter().map(|c| c.condition.as_str()).collect();
    let hw = |c: &str| summary.within_ci.as_ref().and_then(|w| w.half_widths.get(c).copied());
    let values = rows.iter().map(|r| r.sim_translation);
    let mut f = Frame::new("Similarity by condition", "sim_translation", values);
    for (i, c) in conditions.iter().enumerate() {
        let (cx, width) = band(i, conditions.len());
        let m = summary.conditions[i].mean_sim_translation;
        let (y0, ym) = (f.y(f.lo.max(0.0)), f.y(m));
        let _ = writeln!(
            f.body,
            r##"<rect class="bar" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#cfd8e3"/>"##,
            cx - width * 0.3,
            ym.min(y0),
            width * 0.6,
            (y0 - ym).abs()
        );
        if let Some(h) = hw(c) {
            let _ = writeln!(
                f.body,
                r#"<line class="ci" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
                f.y(m - h),
                f.y(m + h)
            );
        }
        f.x_label(cx, c);
        for r in rows.iter().filter(|r| r.condition == *c) {
            let x = cx + jitter(&r.passage_id) * width * 0.25;
            f.point(x, r.sim_translation, "point", "#1f77b4", &r.passage_id);
        }
    }
    f.finish()
}

/// sim_prefix against content words in the prefix, one line per passage.
pub fn incremental_svg(points: &[IncrementalPoint]) -> String {
    let mut f = Frame::new("Similarity with growing context", "sim_prefix", points.iter().map(|p| p.sim_prefix));
    let max_x = points.iter().map(|p| p.prefix_content_words).max().unwrap_or(1).max(1) as f64;
    let x = |w: usize| LEFT + 10.0 + w as f64 / max_x * (W - LEFT - RIGHT - 20.0);
    let mut by: BTreeMap<&str, Vec<&IncrementalPoint>> = BTreeMap::new();
    for p in points {
        by.entry(p.passage_id.as_str()).or_default().push(p);
    }
    for (id, pts) in &by {
        let coords: Vec<String> =
            pts.iter().map(|p| format!("{:.2},{:.2}", x(p.prefix_content_words), f.y(p.sim_prefix))).collect();
        let _ = writeln!(
            f.body,
            r##"<polyline class="curve" points="{}" fill="none" stroke="#1f77b4" stroke-opacity="0.4"><title>{}</title></polyline>"##,
            coords.join(" "),
            esc(id)
        );
    }
    for p in points {
        f.point(x(p.prefix_content_words), p.sim_prefix, "point", "#1f77b4", &format!("{} k={}", p.passage_id, p.prefix_len_sentences));
    }
    for i in 0..=4 {
        let w = (max_x * f64::from(i) / 4.0).round() as usize;
        f.x_label(x(w), &w.to_string());
    }
    let _ = writeln!(f.body, r#"<text x="{}" y="{}" text-anchor="middle">content words in prefix</text>"#, W / 2.0, H - 12.0);
    f.finish()
}

/// Reads `scores.csv` (and `incremental.csv` when present) from `dir` and
/// writes the summary and figures next to them.
pub fn emit_report(dir: &Path) -> Result<Summary> {
    let rows: Vec<ScoreRow> = read_csv(&dir.join(SCORES_CSV))?;
    let inc_path = dir.join(INCREMENTAL_CSV);
    let incremental: Option<Vec<IncrementalPoint>> = if inc_path.exists() { Some(read_csv(&inc_path)?) } else { None };
    let summary = summarize(&rows, incremental.as_deref());
    fs::write(dir.join(SUMMARY_JSON), serde_json::to_string_pretty(&summary)? + "\n")?;
    fs::write(dir.join(SUMMARY_MD), render_markdown(&summary))?;

    let figs = dir.join(FIGURE_DIR);
    fs::create_dir_all(&figs).with_context(|| format!("creating {}", figs.display()))?;
    let primary: Vec<&ScoreRow> = match &summary.primary_condition {
        Some(c) => rows.iter().filter(|r| &r.condition == c).collect(),
        None => Vec::new(),
    };
    let title = |what: &str| match &summary.primary_condition {
        Some(c) => format!("Similarity by {what} ({c})"),
        None => format!("Similarity by {what}"),
    };
    fs::write(figs.join("by_genre.svg"), strip_svg(&title("genre"), &primary, |r| r.genre.clone()))?;
    fs::write(figs.join("by_provenance.svg"), strip_svg(&title("provenance"), &primary, |r| r.provenance.clone()))?;
    fs::write(figs.join("by_condition.svg"), condition_svg(&rows, &summary))?;
    if let Some(pts) = &incremental {
        fs::write(figs.join("incremental.svg"), incremental_svg(pts))?;
    }
    Ok(summary)
}
