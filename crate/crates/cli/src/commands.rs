use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use framescale::cones::{cone_violation_r2, cone_violation_search, export_cone_samples, perturbed_frame, SearchOptions};
use framescale::diagram::{diagram_gramian, diagram_vectors, DiagramData};
use framescale::io::{emit_frame, input_digest, parse_coefficients, parse_frame, ResultDocument};
use framescale::planar::planar_scaling;
use framescale::scaling::solution_region;
use framescale::{decide_scaling, gramian, verify_scaling, Config, Error, Field, Frame, Verdict};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};

pub const AFFIRMATIVE: i32 = 0;
pub const NEGATIVE: i32 = 1;
pub const BORDERLINE: i32 = 2;
pub const INPUT_ERROR: i32 = 3;

#[derive(Debug)]
pub struct CliError(pub String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

pub struct Context {
    pub cfg: Config,
    pub json: bool,
    pub quiet: bool,
    pub renormalize: bool,
}

pub struct Outcome {
    pub doc: ResultDocument,
    pub text: String,
    /// `text` is the command's product and is printed even with `--quiet`.
    pub product: bool,
}

impl Context {
    pub fn emit(&self, outcome: Outcome) -> i32 {
        if outcome.product && !self.json {
            print!("{}", outcome.text);
        } else if self.json {
            print!("{}", outcome.doc.to_json());
        } else if !self.quiet {
            print!("{}", outcome.text);
        }
        outcome.doc.exit_code
    }

    fn doc(&self, command: &str, verdict: &str, exit_code: i32, digest: Option<String>) -> ResultDocument {
        let mut doc = ResultDocument::new(command, verdict, exit_code, self.cfg);
        doc.input_digest = digest;
        doc
    }

    fn load(&self, path: &Path) -> Result<(Frame, String), CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        let frame = parse_frame(text, &self.cfg, self.renormalize)
            .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
        Ok((frame, input_digest(&bytes)))
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn real_matrix_json(m: &DMatrix<f64>) -> Value {
    Value::from(
        (0..m.nrows())
            .map(|i| m.row(i).iter().copied().collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

pub fn diagram(ctx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for d in diagram_vectors(&frame) {
        match d.data() {
            DiagramData::Real(v) => {
                let _ = writeln!(text, "{}", join(v));
                rows.push(json!(v));
            }
            DiagramData::Complex(v) => {
                let entries: Vec<String> = v.iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect();
                let _ = writeln!(text, "{}", entries.join(" "));
                rows.push(json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()));
            }
        }
    }
    let mut doc = ctx.doc("diagram", "ok", AFFIRMATIVE, Some(digest));
    doc.details = Some(json!({ "diagram_vectors": rows }));
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

pub fn gram(ctx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    let g = gramian(&frame).matrix;
    let mut text = String::from("G\n");
    let mut g_json = Vec::new();
    for i in 0..g.nrows() {
        let row: Vec<_> = g.row(i).iter().copied().collect();
        match frame.field() {
            Field::Real => {
                let re: Vec<f64> = row.iter().map(|z| z.re).collect();
                let _ = writeln!(text, "{}", join(&re));
                g_json.push(json!(re));
            }
            Field::Complex => {
                let entries: Vec<String> = row.iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect();
                let _ = writeln!(text, "{}", entries.join(" "));
                g_json.push(json!(row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()));
            }
        }
    }
    let mut details = json!({ "gramian": g_json });
    if frame.is_unit_norm() {
        let gt = diagram_gramian(&frame)?.matrix;
        text.push_str("diagram G\n");
        for i in 0..gt.nrows() {
            let row: Vec<f64> = gt.row(i).iter().copied().collect();
            let _ = writeln!(text, "{}", join(&row));
        }
        details["diagram_gramian"] = real_matrix_json(&gt);
    } else {
        text.push_str("diagram G skipped: frame is not flagged unit-norm\n");
    }
    let mut doc = ctx.doc("gram", "ok", AFFIRMATIVE, Some(digest));
    doc.details = Some(details);
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

pub fn check_tight(ctx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    let report = framescale::check_tight(&frame, &ctx.cfg)?;
    let tight = report.is_frame && report.is_tight;
    let code = if tight { AFFIRMATIVE } else { NEGATIVE };
    let verdict = if tight { "tight" } else { "not tight" };
    let text = format!(
        "verdict: {verdict}\nframe: {}\nlambda: {:?}\nresidual: {:?}\n",
        report.is_frame, report.lambda, report.residual
    );
    let mut doc = ctx.doc("check-tight", verdict, code, Some(digest));
    doc.lambda = Some(report.lambda);
    doc.residuals = Some(json!({ "frame_operator": report.residual }));
    doc.details = Some(serde_json::to_value(report).expect("plain data"));
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

fn verdict_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::StrictlyScalable => AFFIRMATIVE,
        Verdict::SubsetScalable | Verdict::NotScalable => NEGATIVE,
        Verdict::Borderline => BORDERLINE,
    }
}

fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::StrictlyScalable => "strictly scalable",
        Verdict::SubsetScalable => "subset scalable",
        Verdict::NotScalable => "not scalable",
        Verdict::Borderline => "borderline",
    }
}

fn scale_frame_document(ctx: &Context, frame: &Frame, digest: String) -> Result<Outcome, CliError> {
    let result = decide_scaling(frame, &ctx.cfg)?;
    let code = verdict_code(result.verdict);
    let name = verdict_name(result.verdict);
    let mut diagnostics = result.diagnostics.clone();
    diagnostics.zero_indices = one_based(&diagnostics.zero_indices);
    let certificate = serde_json::to_value(&result.certificate).expect("plain data");

    let mut text = format!("verdict: {name}\n");
    if let Some(c) = &result.coefficients {
        let _ = writeln!(text, "coefficients: {}", join(c));
    }
    if let Some(l) = result.lambda {
        let _ = writeln!(text, "lambda: {l:?}");
    }
    let _ = writeln!(text, "certificate: {}", certificate["kind"].as_str().unwrap_or("?"));
    let _ = writeln!(text, "nullity: {}", diagnostics.nullity);
    if !diagnostics.zero_indices.is_empty() {
        let _ = writeln!(text, "zero indices: {:?}", diagnostics.zero_indices);
    }
    for reason in &diagnostics.borderline_reasons {
        let _ = writeln!(text, "borderline: {reason}");
    }

    let mut doc = ctx.doc("scale", name, code, Some(digest));
    doc.coefficients = result.coefficients;
    doc.lambda = result.lambda;
    doc.certificate = Some(certificate);
    doc.residuals = diagnostics.verification.map(|v| serde_json::to_value(v).expect("plain data"));
    doc.details = Some(serde_json::to_value(&diagnostics).expect("plain data"));
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

pub fn scale(ctx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    scale_frame_document(ctx, &frame, digest)
}

pub fn scale_batch(ctx: &Context, dir: &Path) -> Result<i32, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let results: Vec<Result<Outcome, CliError>> = files
        .par_iter()
        .map(|path| {
            let (frame, digest) = ctx.load(path)?;
            scale_frame_document(ctx, &frame, digest)
        })
        .collect();

    let mut counts = [0usize; 4];
    let mut text = String::new();
    let mut items = Vec::new();
    for (path, result) in files.iter().zip(results) {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match result {
            Ok(outcome) => {
                counts[outcome.doc.exit_code as usize] += 1;
                let _ = writeln!(text, "{name}: {}", outcome.doc.verdict);
                items.push(json!({ "file": name, "result": outcome.doc }));
            }
            Err(CliError(message)) => {
                counts[INPUT_ERROR as usize] += 1;
                let _ = writeln!(text, "{name}: error: {message}");
                items.push(json!({ "file": name, "error": message }));
            }
        }
    }
    let _ = writeln!(
        text,
        "summary: {} files, {} scalable, {} negative, {} borderline, {} errors",
        files.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );
    let code = (0..4).rev().find(|&c| counts[c] > 0).unwrap_or(0) as i32;

    if ctx.json {
        let doc = json!({
            "tool": "framescale",
            "version": env!("CARGO_PKG_VERSION"),
            "command": "scale --batch",
            "exit_code": code,
            "files": items,
            "summary": {
                "files": files.len(),
                "scalable": counts[0],
                "negative": counts[1],
                "borderline": counts[2],
                "errors": counts[3],
            },
            "tolerances": ctx.cfg,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("plain data"));
    } else if !ctx.quiet {
        print!("{text}");
    }
    Ok(code)
}

pub fn scale2d(ctx: &Context, file: &Path, require_q: bool) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    match planar_scaling(&frame, require_q) {
        Ok(d) => {
            let coefficients = d.normalized_coefficients();
            let report = verify_scaling(&frame, &coefficients, 1.0, &ctx.cfg)?;
            let code = if report.pass { AFFIRMATIVE } else { NEGATIVE };
            let verdict = if report.pass { "strictly scalable" } else { "verification failed" };
            let pairs: Vec<[usize; 2]> = d.pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect();
            let triples: Vec<Value> = d
                .triples
                .iter()
                .map(|t| json!({ "indices": one_based(&t.indices), "coefficients": t.coefficients }))
                .collect();
            let mut text = format!("verdict: {verdict}\ncoefficients: {}\nlambda: 1\n", join(&coefficients));
            let _ = writeln!(text, "pairs: {pairs:?}");
            let _ = writeln!(text, "triples: {}", d.triples.len());
            let mut doc = ctx.doc("scale2d", verdict, code, Some(digest));
            doc.coefficients = Some(coefficients);
            doc.lambda = Some(1.0);
            doc.residuals = Some(serde_json::to_value(report).expect("plain data"));
            doc.details = Some(json!({
                "pairs": pairs,
                "triples": triples,
                "accumulated": d.accumulated,
                "accumulation_residual": d.residual,
            }));
            Ok(Outcome {
                doc,
                text,
                product: false,
            })
        }
        Err(Error::PropertyQViolated) => {
            let violation = cone_violation_r2(&frame)?;
            let verdict = "not scalable";
            let mut doc = ctx.doc("scale2d", verdict, NEGATIVE, Some(digest));
            doc.certificate = Some(json!({
                "kind": "necessary_condition_violation",
                "f": violation.f,
                "margins": violation.margins,
            }));
            Ok(Outcome {
                doc,
                text: format!("verdict: {verdict}\nproperty (Q) fails at f = {:?}\n", violation.f.unwrap_or_default()),
                product: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn verify(ctx: &Context, file: &Path, coeffs: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    let text = std::fs::read_to_string(coeffs).map_err(|e| CliError(format!("{}: {e}", coeffs.display())))?;
    let supplied = parse_coefficients(&text).map_err(|e| CliError(format!("{}: {e}", coeffs.display())))?;
    let lambda = supplied
        .lambda
        .unwrap_or_else(|| supplied.coefficients.iter().map(|c| c * c).sum::<f64>() / frame.n() as f64);
    let report = verify_scaling(&frame, &supplied.coefficients, lambda, &ctx.cfg)?;
    let (code, verdict) = if report.pass {
        (AFFIRMATIVE, "pass")
    } else {
        (NEGATIVE, "fail")
    };
    let text = format!(
        "verdict: {verdict}\nlambda: {lambda:?}\ngramian residual: {:?}\nframe operator residual: {:?}\ntrace residual: {:?}\n",
        report.gramian_residual, report.frame_operator_residual, report.trace_residual
    );
    let mut doc = ctx.doc("verify", verdict, code, Some(digest));
    doc.coefficients = Some(supplied.coefficients);
    doc.lambda = Some(lambda);
    doc.residuals = Some(serde_json::to_value(report).expect("plain data"));
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

pub fn cones(
    ctx: &Context,
    file: &Path,
    subset: Option<Vec<usize>>,
    grid: Option<usize>,
    seed: u64,
    budget: usize,
) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    if subset.is_some() || grid.is_some() {
        let subset = subset.unwrap_or_default();
        if let Some(&bad) = subset.iter().find(|&&i| i == 0 || i > frame.k()) {
            return Err(CliError(format!("subset index {bad} outside 1..={}", frame.k())));
        }
        let zero_based: Vec<usize> = subset.iter().map(|i| i - 1).collect();
        let samples = export_cone_samples(&frame, &zero_based, grid.unwrap_or(90))?;
        let mut doc = ctx.doc("cones", "samples", AFFIRMATIVE, Some(digest));
        doc.details = Some(json!({
            "n": samples.n,
            "subset": subset,
            "spacing": samples.spacing,
            "points": samples.points,
        }));
        return Ok(Outcome {
            doc,
            text: samples.to_text(),
            product: true,
        });
    }

    frame_requires_unit(&frame)?;
    let report = if frame.n() == 2 {
        cone_violation_r2(&frame)?
    } else {
        let options = SearchOptions {
            seed,
            restarts: budget,
            ..SearchOptions::default()
        };
        cone_violation_search(&frame, &options)?
    };
    let (code, verdict) = if report.found {
        (NEGATIVE, "violation found")
    } else {
        (AFFIRMATIVE, "no violation found")
    };
    let mut text = format!("verdict: {verdict}\n");
    if let Some(f) = &report.f {
        let _ = writeln!(text, "f: {}", join(f));
    }
    if let Some(g) = &report.boundary_contact {
        let _ = writeln!(text, "boundary contact: {}", join(g));
    }
    if !report.margins.is_empty() {
        let _ = writeln!(text, "margins: {}", join(&report.margins));
    }
    let mut doc = ctx.doc("cones", verdict, code, Some(digest));
    if report.found {
        doc.certificate = Some(json!({
            "kind": "necessary_condition_violation",
            "f": report.f,
            "margins": report.margins,
        }));
    }
    doc.details = Some(serde_json::to_value(&report).expect("plain data"));
    Ok(Outcome {
        doc,
        text,
        product: false,
    })
}

fn frame_requires_unit(frame: &Frame) -> Result<(), CliError> {
    if frame.is_unit_norm() {
        Ok(())
    } else {
        Err(Error::NotUnitNorm.into())
    }
}

pub fn region(ctx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let (frame, digest) = ctx.load(file)?;
    match solution_region(&frame, &ctx.cfg) {
        Ok(r) => {
            let interior = r.interior_point.is_some();
            let (code, verdict) = if interior {
                (AFFIRMATIVE, "nonempty interior")
            } else {
                (NEGATIVE, "empty interior")
            };
            let mut text = format!("verdict: {verdict}\ndimension: {}\nnormals:\n", r.dimension());
            for row in &r.normals {
                let _ = writeln!(text, "{}", join(row));
            }
            if let Some(y) = &r.interior_point {
                let _ = writeln!(text, "interior point: {}", join(y));
            }
            let mut doc = ctx.doc("region", verdict, code, Some(digest));
            doc.coefficients = r.interior_point.as_ref().and_then(|y| r.coefficients(y));
            doc.details = Some(json!({
                "dimension": r.dimension(),
                "basis": real_matrix_json(&r.basis),
                "normals": r.normals,
                "interior_point": r.interior_point,
            }));
            Ok(Outcome {
                doc,
                text,
                product: false,
            })
        }
        Err(Error::EmptyNullSpace) => {
            let verdict = "empty";
            Ok(Outcome {
                doc: ctx.doc("region", verdict, NEGATIVE, Some(digest)),
                text: "verdict: empty\nthe diagram Gramian is invertible\n".into(),
                product: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn perturbed(ctx: &Context, v: f64) -> Result<Outcome, CliError> {
    let frame = perturbed_frame(v)?;
    let text = emit_frame(&frame);
    let mut doc = ctx.doc("perturbed", "ok", AFFIRMATIVE, None);
    doc.details = Some(serde_json::from_str(&text).expect("emitted JSON"));
    Ok(Outcome {
        doc,
        text,
        product: true,
    })
}
