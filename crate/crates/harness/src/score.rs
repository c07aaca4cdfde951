use toxcliff_core::metrics::{eval_task1, eval_task2, eval_task3, MetricConfig, Scores};
use toxcliff_core::qa::{parse_model_answer, ParsedAnswer, QAInstance, TaskId, Variant};
use toxcliff_core::CoreError;

/// Parses and scores one raw output. `None` (predictor failure) and
/// unrecoverable text both score as an empty answer.
pub fn score_answer(
    inst: &QAInstance,
    raw: Option<&str>,
    variant: Variant,
    cfg: &MetricConfig,
) -> Result<(Option<ParsedAnswer>, Scores), CoreError> {
    let parsed = raw.and_then(|r| parse_model_answer(r, variant).ok());
    let pred = parsed.as_ref().map_or("", |p| p.answer.as_str());
    let scores = match inst.task {
        TaskId::T1 => Scores::T1(eval_task1(pred, &inst.gold)),
        TaskId::T2 => Scores::T2(eval_task2(pred, &inst.gold)),
        TaskId::T3 => {
            let gold = inst
                .gold_smiles
                .as_ref()
                .ok_or_else(|| CoreError::Schema(format!("{} lacks gold_smiles", inst.id)))?;
            Scores::T3(eval_task3(
                pred,
                gold,
                &inst.gold,
                &inst.toxic_smiles,
                inst.generation_mode.unwrap_or_default(),
                cfg,
            ))
        }
    };
    Ok((parsed, scores))
}
