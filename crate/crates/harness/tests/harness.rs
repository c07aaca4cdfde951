use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use toxcliff_core::dataset::{ingest_dataset, ingest_reader, Ingested};
use toxcliff_core::metrics::Scores;
use toxcliff_core::qa::{PromptBundle, TaskId, Variant};
use toxcliff_harness::config::{CommandConfig, PredictorConfig};
use toxcliff_harness::evaluate::load_completed;
use toxcliff_harness::pipeline::Layout;
use toxcliff_harness::predictor::{build_predictor, CommandPredictor, Predictor, PredictorError};
use toxcliff_harness::{run_evaluation, run_pipeline, BenchmarkArtifacts, HarnessConfig};

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn demo_data() -> Ingested {
    ingest_dataset(&repo("data/demo.csv")).unwrap()
}

fn config(dir: &std::path::Path) -> HarnessConfig {
    HarnessConfig {
        output_dir: dir.to_path_buf(),
        assets_dir: Some(repo("data")),
        ..HarnessConfig::default()
    }
}

fn pipeline(cfg: &HarnessConfig) -> BenchmarkArtifacts {
    run_pipeline(cfg, &demo_data()).unwrap()
}

#[test]
fn every_stage_is_written_and_counts_shrink() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let art = pipeline(&cfg);
    let layout = Layout::new(dir.path());
    for p in [
        layout.pairs(),
        layout.rejections(),
        layout.cuts(),
        layout.split(),
        layout.instances(),
        layout.prompts(),
        layout.stage_counts(),
        layout.run_meta(),
    ] {
        assert!(p.is_file(), "{} missing", p.display());
    }
    let chain = art.summary.chain();
    assert_eq!(chain.len(), 5);
    assert!(chain.windows(2).all(|w| w[0] >= w[1]), "{chain:?}");
    assert_eq!(art.instances.len(), 3 * art.pairs.len());
    assert_eq!(
        art.summary.train_pairs.unwrap() + art.summary.test_pairs.unwrap(),
        art.pairs.len()
    );
}

#[test]
fn no_pairs_is_a_clean_exit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let csv = "smiles,label,endpoint,source\nCCO,1,ames,x\nc1ccccc1,0,ames,x\n";
    let art = run_pipeline(&cfg, &ingest_reader(csv.as_bytes()).unwrap()).unwrap();
    assert_eq!((art.pairs.len(), art.instances.len(), art.prompts.len()), (0, 0, 0));
}

#[test]
fn pipeline_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    pipeline(&config(a.path()));
    pipeline(&config(b.path()));
    for name in ["pairs.jsonl", "split.json", "instances.jsonl", "prompts.jsonl"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn four_shot_prompts_carry_training_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = HarnessConfig {
        variant: Variant::FourShot,
        shots: 4,
        ..config(dir.path())
    };
    let art = pipeline(&cfg);
    let train_ids: std::collections::HashSet<_> =
        art.split.train.iter().map(|p| p.id.as_str()).collect();
    assert!(art.prompts.iter().all(|p| p.shot_examples.len() <= 4));
    // endpoints with a training side get full shot sets
    let with_train = art
        .prompts
        .iter()
        .filter(|p| p.shot_examples.len() == 4)
        .count();
    assert!(with_train > 0);
    assert!(!train_ids.is_empty());
}

#[test]
fn resumed_evaluation_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let art = pipeline(&cfg);
    let predictor = build_predictor(&cfg, &art.instances).unwrap();
    let full_path = dir.path().join("full.jsonl");
    let full = run_evaluation(&cfg, &art.instances, &art.prompts, predictor.as_ref(), Some(&full_path)).unwrap();
    assert_eq!(full.len(), 3 * art.prompts.len());
    let text = std::fs::read_to_string(&full_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    for keep in [0, 1, lines.len() / 3, lines.len() - 1] {
        let path = dir.path().join(format!("resume-{keep}.jsonl"));
        let mut partial: String = lines[..keep].iter().map(|l| format!("{l}\n")).collect();
        // a torn write from the interrupted run
        partial.push_str(&lines[keep][..lines[keep].len() / 2]);
        std::fs::write(&path, partial).unwrap();
        let resumed =
            run_evaluation(&cfg, &art.instances, &art.prompts, predictor.as_ref(), Some(&path)).unwrap();
        assert_eq!(resumed, full, "resumed after {keep} records");
        let on_disk = load_completed(&path).unwrap();
        assert_eq!(on_disk.len(), full.len());
    }
}

struct AlwaysFails(AtomicUsize);

impl Predictor for AlwaysFails {
    fn name(&self) -> &str {
        "fails"
    }

    fn answer(&self, _: &PromptBundle) -> Result<String, PredictorError> {
        self.0.fetch_add(1, Ordering::SeqCst);
        Err(PredictorError("service unavailable".into()))
    }

    fn max_attempts(&self) -> u32 {
        3
    }

    fn backoff(&self) -> Duration {
        Duration::from_millis(1)
    }
}

#[test]
fn failures_become_no_answer_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = HarnessConfig {
        runs: 2,
        ..config(dir.path())
    };
    let art = pipeline(&cfg);
    let prompts = &art.prompts[..12];
    let p = AlwaysFails(AtomicUsize::new(0));
    let recs = run_evaluation(&cfg, &art.instances, prompts, &p, None).unwrap();
    assert_eq!(recs.len(), 2 * prompts.len());
    assert_eq!(p.0.load(Ordering::SeqCst), 3 * recs.len());
    for r in &recs {
        assert!(r.parsed.is_none() && r.error.is_some() && r.raw_output.is_empty());
        assert!(!r.scores.correct());
    }
}

#[test]
fn echo_predictor_is_valid_but_wrong_on_task3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = HarnessConfig {
        runs: 1,
        predictor: PredictorConfig::Echo,
        ..config(dir.path())
    };
    let art = pipeline(&cfg);
    let predictor = build_predictor(&cfg, &art.instances).unwrap();
    let recs = run_evaluation(&cfg, &art.instances, &art.prompts, predictor.as_ref(), None).unwrap();
    let t3: Vec<_> = recs.iter().filter(|r| r.task == TaskId::T3).collect();
    assert!(!t3.is_empty());
    for r in t3 {
        let Scores::T3(s) = r.scores else { unreachable!() };
        assert_eq!((s.em, s.validity), (0, 1), "{}", r.instance_id);
    }
}

#[test]
fn fixed_garbage_is_no_answer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = HarnessConfig {
        runs: 1,
        predictor: PredictorConfig::Fixed {
            text: "I cannot help with that.".into(),
        },
        ..config(dir.path())
    };
    let art = pipeline(&cfg);
    let predictor = build_predictor(&cfg, &art.instances).unwrap();
    let recs = run_evaluation(&cfg, &art.instances, &art.prompts, predictor.as_ref(), None).unwrap();
    assert!(recs
        .iter()
        .all(|r| r.parsed.is_none() && r.error.is_none() && r.raw_output == "I cannot help with that."));
}

fn bundle() -> PromptBundle {
    PromptBundle {
        instance_id: "x-T1".into(),
        system_text: "sys".into(),
        user_text: "question".into(),
        shot_examples: Vec::new(),
        variant: Variant::Plain,
    }
}

fn sh(script: &str, timeout_secs: u64) -> CommandPredictor {
    CommandPredictor::new(
        CommandConfig {
            program: "sh".into(),
            args: vec!["-c".into(), script.into()],
            timeout_secs,
            backoff_ms: 1,
            ..CommandConfig::default()
        },
        7,
    )
    .unwrap()
}

#[test]
fn command_predictor_round_trip() {
    // the request reaches stdin; echo back its temperature
    let p = sh(r#"grep -o '"temperature":0.7' >/dev/null && printf '{"answer": "C1"}'"#, 10);
    assert_eq!(p.answer(&bundle()).unwrap(), r#"{"answer": "C1"}"#);
}

#[test]
fn command_predictor_errors() {
    let failing = sh("cat >/dev/null; echo boom >&2; exit 3", 10);
    let e = failing.answer(&bundle()).unwrap_err();
    assert!(e.0.contains("boom"), "{e}");
    let slow = sh("sleep 5", 1);
    assert!(slow.answer(&bundle()).unwrap_err().0.contains("timed out"));
    let missing = CommandPredictor::new(
        CommandConfig {
            program: "sh".into(),
            api_key_env: Some("TOXCLIFF_TEST_UNSET_KEY".into()),
            ..CommandConfig::default()
        },
        0,
    );
    assert!(missing.is_err());
}
