//! Acceptance run: one PASS/FAIL line per criterion, tolerances and time
//! budgets pinned here. Exits non-zero on any failure not listed in
//! `KNOWN_RED`.

#[path = "../../core/tests/oracle/reward.rs"]
mod reward_oracle;
#[path = "../../core/tests/oracle/rollouts.rs"]
mod rollouts;
#[path = "../../core/tests/oracle/spearman.rs"]
mod spearman_oracle;
#[path = "../../collapse/tests/oracle/trap.rs"]
mod trap;
#[path = "../../datagen/tests/oracle/draws.rs"]
mod draws;
#[path = "../../datagen/tests/oracle/fixture.rs"]
mod pocket_fixture;
#[path = "../../datagen/tests/oracle/kabsch.rs"]
mod kabsch_oracle;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use molbench_collapse::coverage::{coverage_bound, expected_coverage, mc_coverage};
use molbench_collapse::dynamics::predicted_entropy_step;
use molbench_collapse::experiment::run_rng;
use molbench_collapse::{cluster_mass, run_collapse, simulate_grpo_group, FinitePolicy, Partition, RewardLandscape};
use molbench_core::chem::parse_smiles;
use molbench_core::descriptors::{compute, ParameterTables, PropertyId};
use molbench_core::metrics::{diversity_top_k, normalized_spearman, top_k_score, RolloutSet};
use molbench_core::scoring::{score_completion, Evaluators, Validity};
use molbench_core::simfp::Fingerprint;
use molbench_datagen::pockets::{kabsch_rmsd, run_pipeline, Point, PocketConfig};
use molbench_datagen::prompts::{audit_shard, generate_shard, GeneratorConfig, RuleSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure is understood and recorded; they still print FAIL.
const KNOWN_RED: &[u32] = &[];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<String> {
    include_str!("../../core/tests/fixtures/corpus.smi").lines().filter(|l| !l.is_empty()).map(str::to_string).collect()
}

// 1. reward formulas against direct evaluation
const REWARD_TOL: f64 = 1e-12;

fn reward_oracle_equivalence() -> Outcome {
    let tables = ParameterTables::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let world = reward_oracle::World::new(corpus(), &mut rng);
    let (dock, labels) = world.tables();
    let eval = Evaluators::new(tables).with_docking(&dock).with_labels(&labels);
    let (mut worst, mut zero_aggs) = (0.0f64, 0);
    for i in 0..1000 {
        let (prompt, text, intended) = reward_oracle::random_case(&world, i, &mut rng);
        let report = score_completion(&prompt, &text, &eval);
        let want: Vec<f64> = prompt.objectives.iter().map(|o| reward_oracle::reward(&world, tables, o, &intended)).collect();
        for (g, w) in report.per_property.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
        worst = worst.max((report.aggregate - reward_oracle::aggregate(&want)).abs());
        if report.per_property.contains(&0.0) {
            ensure(report.aggregate == 0.0, || format!("case {i}: zero per-property reward but aggregate {}", report.aggregate))?;
            zero_aggs += 1;
        }
        let invalid = matches!(intended, reward_oracle::Intended::Invalid);
        ensure(invalid == (report.validity != Validity::Valid), || format!("case {i}: validity {:?}", report.validity))?;
    }
    ensure(worst <= REWARD_TOL, || format!("max |diff| {worst:.3e} > {REWARD_TOL:e}"))?;
    Ok(format!("1000 cases, max |diff| {worst:.1e} (tol {REWARD_TOL:e}), {zero_aggs} zero aggregates all exactly 0"))
}

// 2. metric dominance, threshold monotonicity, collapsed sets
const S_GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

fn metric_dominance_and_limits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut dominance, mut monotone, mut checked) = (0, 0, 0);
    for id in 0..200 {
        let rs = rollouts::random_set(id, &mut rng);
        for k in [1, 3, 5, 10] {
            let top = top_k_score(&rs, k);
            let scores: Vec<f64> = S_GRID.iter().map(|&s| diversity_top_k(&rs, k, s).score).collect();
            dominance += scores.iter().filter(|&&d| d > top + 1e-12).count();
            monotone += scores.windows(2).filter(|w| w[1] < w[0] - 1e-12).count();
            checked += scores.len();
        }
    }
    let mut collapsed = 0;
    for (i, r) in [0.64, 0.8, 0.123].into_iter().enumerate() {
        let rs = rollouts::collapsed_set(i, 10, r);
        if top_k_score(&rs, 10) != top_k_score(&rs, 1) / 10.0 || diversity_top_k(&rs, 10, 0.7).score != r / 10.0 {
            collapsed += 1;
        }
    }
    let detail = format!(
        "200 sets x k in {{1,3,5,10}} x {} thresholds: dominance violations {dominance}/{checked}, \
         s_max monotonicity violations {monotone}, collapsed top-10 = top-1/10 failures {collapsed}/3; \
         [info: constructed 4-molecule set, k=3: s_max 0.5 -> {:.4}, 0.7 -> {:.4}]",
        S_GRID.len(),
        counterexample(0.5),
        counterexample(0.7)
    );
    if dominance == 0 && monotone == 0 && collapsed == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Greedy selection can lose score when the threshold loosens: b enters at
/// 0.7 and then blocks c and d, which are dissimilar to each other.
fn counterexample(s_max: f64) -> f64 {
    let fp = |bits: Vec<usize>| Fingerprint::from_bits(256, &bits).unwrap();
    let items = vec![
        rollouts::molecule_item(fp((0..160).collect()), 1.0),
        rollouts::molecule_item(fp((0..100).collect()), 0.9),
        rollouts::molecule_item(fp((30..100).collect()), 0.8),
        rollouts::molecule_item(fp((0..30).chain(60..100).collect()), 0.8),
    ];
    diversity_top_k(&RolloutSet { prompt_id: "x".into(), items }, 3, s_max).score
}

// 3. ratio identity and entropy collapse
const RATIO_TOL: f64 = 1e-9;

fn ratio_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for eta in [0.1, 0.5, 1.0] {
        let mut r: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..0.9)).collect();
        r[rng.gen_range(0..10)] = 1.0;
        for l in [RewardLandscape::unstructured(vec![1.0, 0.0]).unwrap(), RewardLandscape::unstructured(r.clone()).unwrap()] {
            let w: Vec<f64> = (0..l.len()).map(|_| rng.gen_range(0.2..1.0)).collect();
            let pi0 = FinitePolicy::from_weights(&w).unwrap();
            let (_, run) = run_collapse(&pi0, &l, &Partition::singletons(l.len()), eta, 100).map_err(|e| e.to_string())?;
            for rec in &run.trajectory.steps {
                for o in (0..l.len()).filter(|&o| o != run.best) {
                    let want = pi0.probs[run.best] / pi0.probs[o] * (eta * rec.step as f64 * (l.reward[run.best] - l.reward[o])).exp();
                    worst = worst.max((rec.probs[run.best] / rec.probs[o] / want - 1.0).abs());
                }
            }
        }
        let l = RewardLandscape::unstructured(r).unwrap();
        let pi0 = FinitePolicy::uniform(10);
        let t = predicted_entropy_step(&pi0, &l, eta, 1e-3, 1_000_000).ok_or_else(|| format!("eta {eta}: no predicted step"))?;
        let (end, _) = run_collapse(&pi0, &l, &Partition::singletons(10), eta, t).map_err(|e| e.to_string())?;
        ensure(end.entropy() < 1e-3, || format!("eta {eta}: entropy {} at predicted step {t}", end.entropy()))?;
    }
    ensure(worst <= RATIO_TOL, || format!("max relative error {worst:.3e} > {RATIO_TOL:e}"))?;
    Ok(format!("eta in {{0.1,0.5,1}}, 2- and 10-point, T=100: max rel err {worst:.1e} (tol {RATIO_TOL:e}); entropy < 1e-3 by predicted step"))
}

// 4. expected distinct clusters
fn distinct_cluster_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let est = mc_coverage(&FinitePolicy::uniform(4), &Partition::singletons(4), 4, 10_000, &mut rng).map_err(|e| e.to_string())?;
    let exact = 4.0 * (1.0 - 0.75f64.powi(4));
    ensure((exact - 2.7344).abs() < 1e-4, || format!("closed form {exact}"))?;
    ensure((est.mean - exact).abs() <= 3.0 * est.stderr, || format!("MC {} +- {} vs {exact}", est.mean, est.stderr))?;
    let mut worst_z = f64::NEG_INFINITY;
    for _ in 0..50 {
        let m = rng.gen_range(2..7);
        let p_min = rng.gen_range(0.01..1.0 / m as f64);
        let spare: Vec<f64> = (0..m).map(|_| rng.gen()).collect();
        let total: f64 = spare.iter().sum();
        let masses: Vec<f64> = spare.iter().map(|s| p_min + (1.0 - m as f64 * p_min) * s / total).collect();
        let n_r = rng.gen_range(1..9);
        let bound = coverage_bound(m, p_min, n_r).map_err(|e| e.to_string())?;
        let pi = FinitePolicy::from_weights(&masses).unwrap();
        let mc = mc_coverage(&pi, &Partition::singletons(m), n_r, 10_000, &mut rng).map_err(|e| e.to_string())?;
        ensure(mc.mean >= bound - 3.0 * mc.stderr, || format!("{masses:?} n_r {n_r}: MC {} below bound {bound}", mc.mean))?;
        ensure(expected_coverage(&masses, n_r) >= bound - 1e-12, || format!("{masses:?}: exact expectation below bound"))?;
        worst_z = worst_z.max((bound - mc.mean) / mc.stderr.max(1e-300));
    }
    Ok(format!("uniform 4x4: MC {:.4} +- {:.4} vs {exact:.6}; 50 floors: worst (bound - MC)/se = {worst_z:.2} (limit 3)", est.mean, est.stderr))
}

// 5. two-cluster trap
fn coverage_bonus_effect() -> Outcome {
    let (l, part, pi) = trap::landscape();
    let (mut min_collapse, mut min_kept) = (f64::INFINITY, f64::INFINITY);
    for seed in 0..4 {
        let (end, _) = simulate_grpo_group(&pi, &l, &part, &trap::params(0.0), trap::GROUP, &mut run_rng(seed, 0)).map_err(|e| e.to_string())?;
        min_collapse = min_collapse.min(cluster_mass(&end, &part).into_iter().fold(0.0, f64::max));
        let (end, _) = simulate_grpo_group(&pi, &l, &part, &trap::params(0.1), trap::GROUP, &mut run_rng(seed, 0)).map_err(|e| e.to_string())?;
        min_kept = min_kept.min(cluster_mass(&end, &part).into_iter().fold(1.0, f64::min));
    }
    let detail = format!("{} steps, G={}, seeds 0-3: alpha=0 max mass >= {min_collapse:.4} (need > 0.99); alpha=0.1 min mass >= {min_kept:.4} (need > 0.2)", trap::STEPS, trap::GROUP);
    if min_collapse > 0.99 && min_kept > 0.2 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 6. descriptor panel
const EXACT_TOL: f64 = 1e-3;
const MODEL_TOL: f64 = 0.02;

fn descriptor_panel() -> Outcome {
    let panel: serde_json::Value = serde_json::from_str(include_str!("../../core/tests/fixtures/descriptor_panel.json")).unwrap();
    let tables = ParameterTables::bundled();
    let props = [
        (PropertyId::ExactMolWt, EXACT_TOL),
        (PropertyId::NumHBA, EXACT_TOL),
        (PropertyId::NumHBD, EXACT_TOL),
        (PropertyId::NumRotatableBonds, EXACT_TOL),
        (PropertyId::NumAromaticRings, EXACT_TOL),
        (PropertyId::FractionCSP3, EXACT_TOL),
        (PropertyId::TPSA, EXACT_TOL),
        (PropertyId::LogP, MODEL_TOL),
        (PropertyId::QED, MODEL_TOL),
        (PropertyId::SA, MODEL_TOL),
    ];
    let rows = panel["molecules"].as_array().unwrap();
    ensure(rows.len() == 10, || format!("{} molecules in panel", rows.len()))?;
    let mut worst = (0.0f64, 0.0f64);
    for row in rows {
        let smiles = row["smiles"].as_str().unwrap();
        let mol = parse_smiles(smiles).map_err(|e| format!("{smiles}: {e}"))?;
        for (p, tol) in props {
            let got = compute(&mol, p, tables).map_err(|e| format!("{smiles} {p}: {e}"))?;
            let diff = (got - row[p.name()].as_f64().unwrap()).abs();
            ensure(diff <= tol, || format!("{smiles} {p}: off by {diff}"))?;
            if tol == EXACT_TOL {
                worst.0 = worst.0.max(diff);
            } else {
                worst.1 = worst.1.max(diff);
            }
        }
    }
    Ok(format!("10 molecules: counts/mass/TPSA max diff {:.1e} (tol {EXACT_TOL:e}), logP/QED/SA max diff {:.1e} (tol {MODEL_TOL})", worst.0, worst.1))
}

// 7. rank correlation
const SPEARMAN_TOL: f64 = 1e-12;

fn spearman_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..40);
        let levels = rng.gen_range(2..12);
        let preds: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 * 0.5).collect();
        let labels: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..levels) as f64 } else { rng.gen() }).collect();
        let n_total = n + rng.gen_range(0..n);
        worst = worst.max((normalized_spearman(&preds, &labels, n_total) - spearman_oracle::normalized(&preds, &labels, n_total)).abs());
    }
    let mut worst_mask = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(4..30);
        let mut p = Vec::new();
        let mut l = Vec::new();
        for _ in 0..n {
            if rng.gen_bool(0.7) {
                p.push(rng.gen::<f64>());
                l.push(rng.gen::<f64>());
            }
        }
        if p.len() < 2 {
            continue;
        }
        let full = normalized_spearman(&p, &l, p.len());
        worst_mask = worst_mask.max((normalized_spearman(&p, &l, n) - full * p.len() as f64 / n as f64).abs());
    }
    ensure(worst <= SPEARMAN_TOL && worst_mask <= SPEARMAN_TOL, || format!("max diff {worst:.3e}, masked {worst_mask:.3e}"))?;
    Ok(format!("1000 tied vectors: max diff {worst:.1e} (tol {SPEARMAN_TOL:e}); valid-fraction multiplier max diff {worst_mask:.1e}"))
}

// 8. prompt generator statistics
const N_PROPS_TOL: f64 = 0.01;
const MARGINAL_REL_TOL: f64 = 0.05;
/// Caps of 4 exhaust the standard catalog somewhere past 35 prompts.
const CAPPED_SHARD: usize = 20;

fn prompt_statistics() -> Outcome {
    let cfg = GeneratorConfig::standard(RuleSet { max_occurrences: None, allow_duplicates: false, docking_required: false });
    let shard = generate_shard(&cfg, "s", 100_000, &mut ChaCha8Rng::seed_from_u64(31)).map_err(|e| e.to_string())?;
    let names: Vec<&str> = cfg.catalog.properties.iter().map(|p| p.property.as_str()).collect();
    let weights: Vec<f64> = cfg.catalog.properties.iter().map(|p| p.frequency).collect();
    let (mut slot, mut first, mut sizes) = (vec![0usize; names.len()], vec![0usize; names.len()], [0usize; 3]);
    for s in &shard {
        sizes[s.properties.len() - 1] += 1;
        first[names.iter().position(|n| *n == s.properties[0]).unwrap()] += 1;
        for p in &s.properties {
            slot[names.iter().position(|n| n == p).unwrap()] += 1;
        }
    }
    let mut worst_n = 0.0f64;
    for (got, want) in sizes.iter().zip([0.29, 0.36, 0.35]) {
        worst_n = worst_n.max((*got as f64 / 1e5 - want).abs());
    }
    let total_slots: usize = slot.iter().sum();
    let rel = |got: f64, want: f64| (got / want - 1.0).abs();
    let worst_first =
        first.iter().zip(draws::first_draw(&weights)).map(|(n, w)| rel(*n as f64 / 1e5, w)).fold(0.0, f64::max);
    let worst_slot = slot
        .iter()
        .zip(draws::slot_shares(&weights, [0.29, 0.36, 0.35]))
        .map(|(n, w)| rel(*n as f64 / total_slots as f64, w))
        .fold(0.0, f64::max);
    let raw_vs_weight =
        slot.iter().zip(draws::first_draw(&weights)).map(|(n, w)| rel(*n as f64 / total_slots as f64, w)).fold(0.0, f64::max);

    let capped = GeneratorConfig::standard(RuleSet::default());
    let mut max_count = 0;
    for i in 0..20 {
        let shard = generate_shard(&capped, &format!("c{i}"), CAPPED_SHARD, &mut run_rng(99, i)).map_err(|e| e.to_string())?;
        audit_shard(&capped.ruleset, &shard).map_err(|(at, v)| format!("capped shard {i} prompt {at}: {v:?}"))?;
        let mut counts = std::collections::BTreeMap::new();
        for p in shard.iter().flat_map(|s| &s.properties) {
            *counts.entry(p.as_str()).or_insert(0) += 1;
        }
        max_count = max_count.max(counts.values().copied().max().unwrap_or(0));
    }
    let detail = format!(
        "1e5 prompts: n_props max |diff| {worst_n:.4} (tol {N_PROPS_TOL}); first-draw vs table weights max rel {worst_first:.4}, \
         slot shares vs exact draw oracle max rel {worst_slot:.4} (tol {MARGINAL_REL_TOL}); [info: slot shares vs raw weights max rel {raw_vs_weight:.3}]; \
         capped: max per-property count {max_count} over 20 shards of {CAPPED_SHARD} (cap 4)"
    );
    if worst_n <= N_PROPS_TOL && worst_first <= MARGINAL_REL_TOL && worst_slot <= MARGINAL_REL_TOL && max_count <= 4 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 9. pocket pipeline
const RMSD_TOL: f64 = 1e-9;

fn pocket_pipeline() -> Outcome {
    let records = pocket_fixture::records();
    let config = PocketConfig { k: 3, iou_cutoff: pocket_fixture::IOU_CUTOFF, consensus: 0.7 };
    let manifest = run_pipeline(&records, &config).map_err(|e| e.to_string())?;
    let got: Vec<(Vec<&str>, Vec<&str>, &str)> = manifest
        .pockets
        .iter()
        .map(|e| (e.members.iter().map(String::as_str).collect(), e.consensus_residues.iter().map(String::as_str).collect(), e.representative.as_str()))
        .collect();
    ensure(got == pocket_fixture::expected_clusters(), || format!("manifest {got:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(3..30);
        let a: Vec<Point> = (0..n).map(|_| [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)]).collect();
        let ang = [rng.gen_range(0.0..6.3), rng.gen_range(0.0..3.2), rng.gen_range(0.0..6.3)];
        let b = kabsch_oracle::rotate(&a, ang, [rng.gen(), 5.0, -3.0]);
        worst = worst.max(kabsch_rmsd(&a, &b).map_err(|e| e.to_string())?);
    }
    ensure(worst < RMSD_TOL, || format!("rotated cloud RMSD {worst:.3e}"))?;
    Ok(format!("{} clusters, consensus sets and representatives as planted; rotated-cloud RMSD max {worst:.1e} (tol {RMSD_TOL:e})", got.len()))
}

// 10. end-to-end throughput and determinism
const SCORE_BUDGET_S: f64 = 10.0;

fn write_corpus(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let cfg = GeneratorConfig::standard(RuleSet { max_occurrences: None, allow_duplicates: false, docking_required: false });
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shard = generate_shard(&cfg, "t", 1000, &mut rng).unwrap();
    let smiles = corpus();
    let (mut prompts, mut completions) = (String::new(), String::new());
    for s in &shard {
        prompts.push_str(&serde_json::to_string(&s.prompt).unwrap());
        prompts.push('\n');
        for i in 0..10 {
            let text = if rng.gen_bool(0.1) {
                "I could not decide.".to_string()
            } else {
                format!("Thinking about {}. <answer>{}</answer>", s.properties.join(", "), smiles.choose(&mut rng).unwrap())
            };
            let line = serde_json::json!({"prompt_id": s.prompt.id, "rollout_index": i, "text": text});
            completions.push_str(&line.to_string());
            completions.push('\n');
        }
    }
    let (p, c) = (dir.join("prompts.jsonl"), dir.join("completions.jsonl"));
    std::fs::write(&p, prompts).unwrap();
    std::fs::write(&c, completions).unwrap();
    (p, c)
}

fn throughput_and_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (prompts, completions) = write_corpus(dir.path());
    let mut times = Vec::new();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        let start = Instant::now();
        let o = Command::new(env!("CARGO_BIN_EXE_molbench"))
            .args(["score", "--prompts"])
            .arg(&prompts)
            .arg("--completions")
            .arg(&completions)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        times.push(start.elapsed().as_secs_f64());
        ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).to_string())?;
        outputs.push(
            ["rewards.jsonl", "report.json", "sweep.csv"].map(|f| std::fs::read(out.join(f)).unwrap_or_default()),
        );
    }
    let lines = outputs[0][0].iter().filter(|&&b| b == b'\n').count();
    ensure(lines == 10_000, || format!("{lines} reward lines"))?;
    ensure(outputs[0] == outputs[1], || "outputs differ between runs".into())?;
    let slowest = times.iter().copied().fold(0.0, f64::max);
    ensure(slowest < SCORE_BUDGET_S, || format!("scoring took {slowest:.2} s"))?;
    Ok(format!("1000 prompts x 10 completions: {:.2} s / {:.2} s (budget {SCORE_BUDGET_S} s), outputs byte-identical", times[0], times[1]))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget_s: f64,
    check: fn() -> Outcome,
}

fn main() {
    // cargo passes harness flags such as --nocapture or a filter; run everything regardless
    let criteria = [
        Criterion { id: 1, name: "reward oracle equivalence", budget_s: 5.0, check: reward_oracle_equivalence },
        Criterion { id: 2, name: "metric dominance and limits", budget_s: 10.0, check: metric_dominance_and_limits },
        Criterion { id: 3, name: "probability ratio identity", budget_s: 1.0, check: ratio_identity },
        Criterion { id: 4, name: "expected distinct clusters", budget_s: 10.0, check: distinct_cluster_coverage },
        Criterion { id: 5, name: "coverage bonus on the trap landscape", budget_s: 30.0, check: coverage_bonus_effect },
        Criterion { id: 6, name: "descriptor panel", budget_s: 1.0, check: descriptor_panel },
        Criterion { id: 7, name: "rank correlation oracle", budget_s: 5.0, check: spearman_oracle },
        Criterion { id: 8, name: "prompt generator statistics", budget_s: 30.0, check: prompt_statistics },
        Criterion { id: 9, name: "pocket pipeline golden run", budget_s: 1.0, check: pocket_pipeline },
        Criterion { id: 10, name: "throughput and determinism", budget_s: 20.0, check: throughput_and_determinism },
    ];
    let mut unexpected = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(d) if secs > c.budget_s => Err(format!("{d}; over time budget")),
            o => o,
        };
        let known = KNOWN_RED.contains(&c.id);
        match &outcome {
            Ok(d) => println!("PASS {:>2} {} ({secs:.2} s / {} s): {d}{}", c.id, c.name, c.budget_s, if known { " [listed as known red]" } else { "" }),
            Err(d) => {
                println!("FAIL {:>2} {} ({secs:.2} s / {} s): {d}{}", c.id, c.name, c.budget_s, if known { " [known red]" } else { "" });
                if !known {
                    unexpected.push(c.id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
