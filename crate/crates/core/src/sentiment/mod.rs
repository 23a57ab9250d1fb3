//! Bag-of-words sentiment classifiers, evaluation, pseudo-labelling and
//! adapters for externally produced predictions.

pub mod eval;
pub mod io;
pub mod label;
pub mod model;
pub mod pseudo;
pub mod transform;

pub use eval::{evaluate, evaluate_holdout, train_test_split, EvalReport, HoldoutReport};
pub use io::{
    import_external_predictions, load_training_csv, write_predictions, ImportedPredictions,
    TrainingRecord,
};
pub use label::{positive_share, LabeledExample, SentimentLabel};
pub use model::{LogisticProblem, ModelKind, Params, Prediction, SentimentModel, TrainConfig};
pub use pseudo::{augment, pseudo_label, self_train, PseudoLabelConfig, SelfTrained};
pub use transform::{Identity, TextTransform};
