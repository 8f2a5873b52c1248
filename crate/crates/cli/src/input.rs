use std::path::Path;
use std::sync::Arc;

use fislab::model::{Classifier, ExplanationProblem, InstanceDoc, Label, Point};

use crate::{Failure, ModelArgs};

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn has_model(args: &ModelArgs) -> bool {
    args.model.is_some() || args.expr.is_some()
}

pub fn classifier(args: &ModelArgs) -> Result<Classifier, Failure> {
    match (&args.model, &args.expr) {
        (Some(path), None) => Ok(Classifier::parse_document(&read(path)?)?),
        (None, Some(text)) => Ok(Classifier::from_expression(text, args.features)?),
        _ => Err(Failure::Usage(
            "give a model with --model PATH or --expr TEXT".into(),
        )),
    }
}

/// A comma-separated point, or a path to a JSON instance document.
fn instance(text: &str) -> Result<(Point, Option<Label>), Failure> {
    let path = Path::new(text);
    if path.is_file() {
        let doc = InstanceDoc::parse(&read(path)?)?;
        return Ok((doc.point, doc.label));
    }
    let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
    let point = trimmed
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("invalid instance value `{}`", v.trim())))
        })
        .collect::<Result<Point, _>>()?;
    Ok((point, None))
}

pub fn problem(args: &ModelArgs) -> Result<ExplanationProblem, Failure> {
    let classifier = Arc::new(classifier(args)?);
    let text = args
        .instance
        .as_deref()
        .ok_or_else(|| Failure::Usage("give an instance with --instance".into()))?;
    let (point, doc_label) = instance(text)?;
    let label = args.label.or(doc_label);
    Ok(ExplanationProblem::new(classifier, point, label)?)
}

pub fn list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}
