//! Command implementations. Each returns a [`Report`] and whether the
//! verification it performs (if any) passed.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ob_core::combinatorics::{character_std, paths_to, Bipartition, Step};
use ob_core::diagrams::enumerate_basis;
use ob_core::ground::{FieldElem, Params};
use ob_core::hecke::check_hecke_relations;
use ob_core::ktheory::{apply_op, commutator_check, orbit_decomposition, residue_window, semisimple_check, KVector, Op, Sector};
use ob_core::straighten::{relation_catalog, whisker_contexts, Engine, LayerWord, Morphism, MorphismJson};
use ob_core::towers::{eigen_profile, std_dim, CornerAlgebra};
use ob_core::words::{Dir, Word};

use crate::config::Config;
use crate::report::{Report, Table};
use crate::{Command, OpArg, SectorArg};

/// A rendered result and its verification status.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, pass: true }
    }
}

fn word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e| format!("malformed word {s:?}: {e}"))
}

fn hom_words(src: &str, dst: &str, c: &Config) -> Result<(Word, Word), String> {
    let (a, b) = (word(src)?, word(dst)?);
    if a.len() + b.len() > c.size_limit {
        return Err(format!("{} endpoints exceed the size limit {}", a.len() + b.len(), c.size_limit));
    }
    Ok((a, b))
}

fn shape(s: &str, params: &Params) -> Result<Bipartition, String> {
    Bipartition::parse(s, params.level()).map_err(|e| format!("malformed shape {s:?}: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed JSON in {}: {e}", path.display()))
}

fn list(xs: &[FieldElem]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn morphism_report(m: &Morphism) -> Report {
    let j = m.to_json();
    let mut t = Table::new(&["coeff", "diagram"]);
    for term in &j.terms {
        t.push(vec![term.coeff.clone(), serde_json::to_string(&term.diagram).expect("diagrams serialize")]);
    }
    Report::new(serde_json::to_value(&j).expect("morphisms serialize"), t)
}

fn step_label(s: &Step) -> String {
    let side = match s.cell.side {
        Dir::Up => 'u',
        Dir::Down => 'd',
    };
    let sign = if s.add { '+' } else { '-' };
    format!("{sign}{side}[{},{},{}]", s.cell.component, s.cell.row, s.cell.column)
}

pub fn run(cmd: &Command, c: &Config) -> Result<Outcome, String> {
    let params = c.params().map_err(|e| e.to_string())?;
    let engine = || Engine::new(params.clone());
    match cmd {
        Command::Normalize { file } => {
            let lw: LayerWord = read_json(file)?;
            let m = engine().eval(&lw).map_err(|e| e.to_string())?;
            Ok(morphism_report(&m).into())
        }
        Command::HomBasis(h) => {
            let (a, b) = hom_words(&h.src, &h.dst, c)?;
            let basis = enumerate_basis(&a, &b, params.level());
            let mut t = Table::new(&["index", "diagram"]);
            let mut out = Vec::new();
            for (k, d) in basis.iter().enumerate() {
                let j = d.to_json();
                t.push(vec![k.to_string(), serde_json::to_string(&j).expect("diagrams serialize")]);
                out.push(serde_json::to_value(&j).expect("diagrams serialize"));
            }
            Ok(Report::new(Value::Array(out), t).into())
        }
        Command::HomDim(h) => {
            let (a, b) = hom_words(&h.src, &h.dst, c)?;
            Ok(Report::scalar(enumerate_basis(&a, &b, params.level()).len()).into())
        }
        Command::Compose { outer, inner } => {
            let e = engine();
            let load = |p: &Path| -> Result<Morphism, String> {
                let j: MorphismJson = read_json(p)?;
                Morphism::from_json(&j, params.field(), params.level()).map_err(|e| e.to_string())
            };
            let m = e.compose(&load(outer)?, &load(inner)?).map_err(|e| e.to_string())?;
            Ok(morphism_report(&m).into())
        }
        Command::VerifyRelations { max_context, sample, seed } => {
            let e = engine();
            let mut contexts: Vec<(usize, (Word, Word))> = whisker_contexts(*max_context).into_iter().enumerate().collect();
            if let Some(n) = sample {
                contexts.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                contexts.truncate(*n);
                contexts.sort_by_key(|(k, _)| *k);
            }
            let mut t = Table::new(&["relation", "left", "right", "pass"]);
            let mut rows = Vec::new();
            let mut all = true;
            for rel in relation_catalog() {
                for (_, (l, r)) in &contexts {
                    let pass = e.verify_relation(rel.id, l, r).unwrap_or(false);
                    all &= pass;
                    t.push(vec![rel.id.to_string(), l.to_string(), r.to_string(), pass.to_string()]);
                    rows.push(json!({ "relation": rel.id, "left": l, "right": r, "pass": pass }));
                }
            }
            let json = json!({ "pass": all, "checks": rows });
            Ok(Outcome { report: Report::new(json, t), pass: all })
        }
        Command::Corner { dst, structure } => {
            let a = word(dst)?;
            let e = engine();
            let corner = CornerAlgebra::new(&e, &a, c.size_limit).map_err(|e| e.to_string())?;
            let basis: Vec<_> = corner.basis().iter().map(|d| d.to_json()).collect();
            let mut t = Table::new(&["index", "diagram"]);
            for (k, d) in basis.iter().enumerate() {
                t.push(vec![k.to_string(), serde_json::to_string(d).expect("diagrams serialize")]);
            }
            let mut json = json!({ "word": a, "dim": corner.dim(), "basis": basis });
            if *structure {
                let sc = corner.structure_constants(&e);
                let strings: Vec<Vec<Vec<String>>> =
                    sc.iter().map(|row| row.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect()).collect();
                json["structure_constants"] = json!(strings);
            }
            Ok(Report::new(json, t).into())
        }
        Command::HeckeCheck { r, s } => {
            if r + s > c.size_limit {
                return Err(format!("{} strands exceed the size limit {}", r + s, c.size_limit));
            }
            let checks = check_hecke_relations(&engine(), *r, *s);
            let all = checks.iter().all(|h| h.pass);
            let mut t = Table::new(&["relation", "context", "pass"]);
            for h in &checks {
                t.push(vec![h.relation.clone(), h.context.clone(), h.pass.to_string()]);
            }
            let json = json!({ "pass": all, "checks": checks });
            Ok(Outcome { report: Report::new(json, t), pass: all })
        }
        Command::Bubble { dots, counterclockwise } => {
            Ok(Report::scalar(engine().bubble_value(!counterclockwise, *dots)).into())
        }
        Command::Eigenprofile(h) => {
            let (b, a) = hom_words(&h.src, &h.dst, c)?;
            let profile = eigen_profile(&engine(), &a, &b).map_err(|e| e.to_string())?;
            let mut t = Table::new(&["eigenvalues", "dim"]);
            let mut rows = Vec::new();
            for (key, dim) in &profile.table {
                t.push(vec![list(key), dim.to_string()]);
                rows.push(json!({ "eigenvalues": key, "dim": dim }));
            }
            Ok(Report::new(Value::Array(rows), t).into())
        }
        Command::Character { shape: s, max_len } => {
            let lambda = shape(s, &params)?;
            let ch = character_std(&lambda, max_len.unwrap_or(c.truncation), &params);
            let mut t = Table::new(&["word", "colors", "count"]);
            let mut rows = Vec::new();
            for ((w, colors), n) in &ch {
                t.push(vec![w.to_string(), list(colors), n.to_string()]);
                rows.push(json!({ "word": w, "colors": colors, "count": n }));
            }
            Ok(Report::new(Value::Array(rows), t).into())
        }
        Command::StdDim { shape: s, dst } => {
            let lambda = shape(s, &params)?;
            let (_, a) = hom_words("", dst, c)?;
            let d = std_dim(&lambda, &a, params.level()).map_err(|e| e.to_string())?;
            Ok(Report::scalar(d).into())
        }
        Command::Paths { shape: s, max_len, dst } => {
            let lambda = shape(s, &params)?;
            let filter = dst.as_deref().map(word).transpose()?;
            let mut t = Table::new(&["word", "colors", "steps"]);
            let mut rows = Vec::new();
            for p in paths_to(&lambda, *max_len, &params) {
                if filter.as_ref().is_some_and(|w| w != &p.word) {
                    continue;
                }
                let steps: Vec<String> = p.steps.iter().map(step_label).collect();
                t.push(vec![p.word.to_string(), list(&p.colors), steps.join(" ")]);
                rows.push(json!({ "word": p.word, "colors": p.colors, "steps": steps }));
            }
            Ok(Report::new(Value::Array(rows), t).into())
        }
        Command::KApply { op, sector, residue, shape: s } => {
            let lambda = shape(s, &params)?;
            let i = params.field().parse(residue).map_err(|e| e.to_string())?;
            let op = match op {
                OpArg::E => Op::E,
                OpArg::F => Op::F,
            };
            let sector = match sector {
                SectorArg::Total => Sector::Total,
                SectorArg::Up => Sector::Up,
                SectorArg::Down => Sector::Down,
            };
            let v = apply_op(op, sector, &i, &KVector::basis(lambda), &params, c.truncation);
            let mut t = Table::new(&["shape", "coeff"]);
            for (k, coeff) in &v.terms {
                t.push(vec![k.to_json().to_string(), coeff.to_string()]);
            }
            let json = json!({ "terms": v.to_json(), "truncated": v.truncated });
            Ok(Report::new(json, t).into())
        }
        Command::CommutatorCheck => {
            let n = c.truncation;
            let window = residue_window(&params, n + 1);
            let mut t = Table::new(&["i", "j", "shape", "expected", "got"]);
            let mut rows = Vec::new();
            for i in &window {
                for j in &window {
                    for f in commutator_check(i, j, n, &params) {
                        let got = f.got.to_json();
                        t.push(vec![f.i.to_string(), f.j.to_string(), f.lambda.to_json().to_string(), f.expected.to_string(), got.to_string()]);
                        rows.push(json!({ "i": f.i, "j": f.j, "shape": f.lambda.to_json(), "expected": f.expected, "got": got }));
                    }
                }
            }
            let pass = rows.is_empty();
            let json = json!({
                "pass": pass,
                "residues": window,
                "max_boxes": n,
                "failures": rows,
            });
            Ok(Outcome { report: Report::new(json, t), pass })
        }
        Command::SemisimpleCheck => {
            let v = semisimple_check(&params);
            let mut t = Table::new(&["semisimple", "reason"]);
            if v.reasons.is_empty() {
                t.push(vec![v.semisimple.to_string(), String::new()]);
            }
            for r in &v.reasons {
                t.push(vec![v.semisimple.to_string(), r.clone()]);
            }
            Ok(Report::new(serde_json::to_value(&v).expect("verdicts serialize"), t).into())
        }
        Command::Orbits => {
            let o = orbit_decomposition(&params);
            let mut t = Table::new(&["orbit", "members"]);
            for (k, m) in o.orbits.iter().enumerate() {
                t.push(vec![(k + 1).to_string(), m.join(" ")]);
            }
            Ok(Report::new(serde_json::to_value(&o).expect("orbits serialize"), t).into())
        }
    }
}
