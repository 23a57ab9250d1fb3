use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use anyhow::Result;
use geosent::corpus::{self, Gazetteer, PostFormat, RawPost, RegionTable};
use geosent::explain::{region_design, SENTIMENT_FEATURE};
use geosent::preprocess::{self, CleanConfig, Lexicons, Polarity, RejectReason, Removed};
use geosent::regional::{self, AggregateConfig, ClassifiedPost, RegionSentiment};
use geosent::sentiment::{
    self, EvalReport, Identity, LabeledExample, PseudoLabelConfig, SentimentLabel, SentimentModel,
    TextTransform, TrainConfig,
};
use geosent::stats::{self, DesignMatrix};
use serde::Serialize;

use crate::artifacts::*;
use crate::config::PipelineConfig;

pub struct Context {
    pub cfg: PipelineConfig,
    pub out: OutDir,
    transform: Box<dyn TextTransform>,
}

#[derive(Debug, Default, Serialize)]
struct Distribution {
    negative: usize,
    neutral: usize,
    positive: usize,
}

impl Distribution {
    fn add(&mut self, l: SentimentLabel) {
        match l {
            SentimentLabel::Negative => self.negative += 1,
            SentimentLabel::Neutral => self.neutral += 1,
            SentimentLabel::Positive => self.positive += 1,
        }
    }
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    loaded: usize,
    skipped: corpus::SkipCounts,
    located: usize,
    resolved: usize,
    unresolved: usize,
    tied: usize,
    regions: usize,
}

#[derive(Debug, Serialize)]
struct CleanSummary {
    posts: usize,
    accepted: usize,
    rejected_too_short: usize,
    rejected_misspelled: usize,
    removed: Removed,
    emoji_whitelist: Vec<String>,
}

#[derive(Debug, Serialize)]
struct TrainingSummary {
    kind: sentiment::ModelKind,
    classes: Vec<SentimentLabel>,
    records: usize,
    empty_after_cleaning: usize,
    train: usize,
    held_out: usize,
    pool: usize,
    pseudo_labeled: usize,
    base: Evaluation,
    model: Evaluation,
}

#[derive(Debug, Serialize)]
struct Evaluation {
    train: EvalReport,
    held_out: Option<EvalReport>,
}

#[derive(Debug, Serialize)]
struct ClassifySummary {
    accepted_posts: usize,
    classified: usize,
    fallback_skipped: usize,
    distribution: Distribution,
}

#[derive(Debug, Serialize)]
struct ImportSummary {
    imported: usize,
    unknown_ids: usize,
    distribution: Distribution,
}

#[derive(Debug, Serialize)]
struct AggregateSummary {
    labeled_posts: usize,
    neutral_skipped: usize,
    unresolved: usize,
    regions: usize,
    included: usize,
    min_region_posts: usize,
}

#[derive(Debug, Serialize)]
struct ShiftRegressionSummary {
    regions: usize,
    empty_periods: usize,
    flag_coefficient: f64,
    flag_p: f64,
}

#[derive(Debug, Serialize)]
struct ShiftSummaryFile {
    alpha: f64,
    global: regional::ShiftTestResult,
    regions: regional::ShiftSummary,
    regression: Option<ShiftRegressionSummary>,
}

impl Context {
    pub fn new(cfg: PipelineConfig, out: &Path) -> Result<Self> {
        Ok(Self {
            cfg,
            out: OutDir::new(out)?,
            transform: Box::new(Identity),
        })
    }

    fn lexicons(&self) -> Result<Lexicons> {
        Ok(Lexicons::load(&self.cfg.paths.lexicons())?)
    }

    fn raw_posts(&self) -> Result<corpus::LoadedPosts> {
        let path = self.cfg.require(&self.cfg.paths.posts, "posts")?;
        Ok(corpus::load_posts(path, PostFormat::from_path(path))?)
    }

    fn region_table(&self) -> Result<RegionTable> {
        let path = self
            .cfg
            .require(&self.cfg.paths.region_table, "region_table")?;
        Ok(RegionTable::load(path, None)?)
    }

    pub fn ingest(&self) -> Result<()> {
        let loaded = self.raw_posts()?;
        let gazetteer = Gazetteer::load(self.cfg.require(&self.cfg.paths.gazetteer, "gazetteer")?)?;
        let populations = match &self.cfg.paths.region_table {
            Some(_) => self.region_table()?.populations(),
            None => Default::default(),
        };
        let located = corpus::filter_located(&loaded.posts, &self.cfg.language);
        let mut tied = 0;
        let resolved: Vec<ResolvedPost> = located
            .into_iter()
            .map(|post| {
                let region_id = post
                    .place_name
                    .as_deref()
                    .and_then(|n| gazetteer.resolve(n))
                    .map(|r| {
                        tied += r.tied as usize;
                        r.region_id.to_string()
                    });
                ResolvedPost { post, region_id }
            })
            .collect();
        let counts = corpus::region_counts(
            resolved.iter().map(|p| p.region_id.as_deref()),
            &populations,
        );

        self.out.write_jsonl(RESOLVED_POSTS, &resolved)?;
        self.out.write_with(REGION_COUNTS, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["region_id", "count", "weighted"])?;
            for (id, c) in &counts.regions {
                csv.write_record([
                    id.clone(),
                    c.count.to_string(),
                    c.weighted.map(|x| x.to_string()).unwrap_or_default(),
                ])?;
            }
            csv.flush()?;
            Ok(())
        })?;
        self.out.write_json(
            INGEST_SUMMARY,
            &IngestSummary {
                loaded: loaded.posts.len(),
                skipped: loaded.skipped,
                located: resolved.len(),
                resolved: counts.resolved(),
                unresolved: counts.unresolved,
                tied,
                regions: counts.regions.len(),
            },
        )
    }

    pub fn clean(&self) -> Result<()> {
        let resolved: Vec<ResolvedPost> = read_jsonl(&self.out.input(RESOLVED_POSTS, "ingest")?)?;
        let lex = self.lexicons()?;
        let steps = self.cfg.clean;
        let posts: Vec<RawPost> = resolved
            .iter()
            .map(|r| RawPost {
                text: self.transform.transform(&r.post.text),
                ..r.post.clone()
            })
            .collect();
        let whitelist = if steps.emojis {
            preprocess::select_emoji_whitelist(
                &posts,
                &lex.emoji_polarity,
                self.cfg.thresholds.emoji_min_share,
            )
        } else {
            Default::default()
        };
        let mut cc = CleanConfig::new(steps, lex, whitelist.iter().cloned().collect());
        cc.max_short_words = self.cfg.thresholds.max_short_words;
        cc.validate()?;
        let cleaned = preprocess::clean_corpus(&posts, &cc);

        let mut removed = Removed::default();
        let (mut short, mut misspelled) = (0, 0);
        let records: Vec<CleanRecord> = cleaned
            .into_iter()
            .zip(&resolved)
            .map(|(c, r)| {
                removed += c.removed;
                match c.rejected {
                    Some(RejectReason::TooShort) => short += 1,
                    Some(RejectReason::Misspelled) => misspelled += 1,
                    None => {}
                }
                CleanRecord {
                    id: c.id,
                    region_id: r.region_id.clone(),
                    timestamp: r.post.timestamp,
                    tokens: c.tokens,
                    kept_emojis: c.kept_emojis,
                    removed: c.removed,
                    rejected: c.rejected,
                }
            })
            .collect();

        self.out.write_jsonl(CLEAN_POSTS, &records)?;
        self.out.write_with(EMOJI_WHITELIST, |w| {
            for e in &whitelist {
                writeln!(w, "{e}")?;
            }
            Ok(())
        })?;
        self.out.write_json(
            CLEAN_SUMMARY,
            &CleanSummary {
                posts: records.len(),
                accepted: records.len() - short - misspelled,
                rejected_too_short: short,
                rejected_misspelled: misspelled,
                removed,
                emoji_whitelist: whitelist.into_iter().collect(),
            },
        )
    }

    pub fn report_hashtags(&self, top: usize) -> Result<()> {
        let loaded = self.raw_posts()?;
        let report = preprocess::hashtag_report(&loaded.posts).top(top);
        self.out.write_with(HASHTAGS, |w| Ok(report.write_csv(w)?))
    }

    pub fn report_emojis(&self, top: usize) -> Result<()> {
        let loaded = self.raw_posts()?;
        let report = preprocess::emoji_report(&loaded.posts).top(top);
        self.out.write_with(EMOJIS, |w| Ok(report.write_csv(w)?))
    }

    /// Training texts go through the same cleaning chain with the rejection
    /// gates off; emojis with a known polarity are kept.
    fn training_examples(&self) -> Result<(Vec<LabeledExample>, usize, usize)> {
        let records =
            sentiment::load_training_csv(self.cfg.require(&self.cfg.paths.training, "training")?)?;
        let lex = self.lexicons()?;
        let whitelist: HashSet<String> = lex
            .emoji_polarity
            .iter()
            .filter(|(_, p)| matches!(p, Polarity::Positive | Polarity::Negative))
            .map(|(e, _)| e.clone())
            .collect();
        let mut steps = self.cfg.clean;
        steps.short_posts = false;
        steps.misspellings = false;
        let cc = CleanConfig::new(steps, lex, whitelist);
        let mut empty = 0;
        let mut examples = Vec::new();
        for r in &records {
            let c = preprocess::clean_text(&r.id, &self.transform.transform(&r.text), &cc);
            let features: Vec<String> = c.tokens.into_iter().chain(c.kept_emojis).collect();
            if features.is_empty() {
                empty += 1;
            } else {
                examples.push(LabeledExample::new(features, r.label));
            }
        }
        Ok((examples, records.len(), empty))
    }

    pub fn train(&self) -> Result<()> {
        let s = &self.cfg.classifier;
        let (examples, records, empty) = self.training_examples()?;
        let (labeled, pool): (Vec<_>, Vec<_>) = if s.binary {
            examples
                .into_iter()
                .partition(|e| e.label != SentimentLabel::Neutral)
        } else {
            (examples, Vec::new())
        };
        let classes: &[SentimentLabel] = if s.binary {
            &SentimentLabel::BINARY
        } else {
            &SentimentLabel::ALL
        };
        let (train, held_out) =
            sentiment::train_test_split(&labeled, s.test_fraction, self.cfg.seed);
        let tc = TrainConfig {
            kind: s.kind,
            smoothing: s.smoothing,
            learning_rate: s.learning_rate,
            epochs: s.epochs,
            l2: s.l2,
        };
        let pool: Vec<Vec<String>> = if s.pseudo_label {
            pool.into_iter().map(|e| e.tokens).collect()
        } else {
            Vec::new()
        };
        let trained = sentiment::self_train(
            &train,
            &pool,
            classes,
            &tc,
            &PseudoLabelConfig {
                fraction: s.pseudo_fraction,
                min_confidence: s.min_confidence,
                seed: self.cfg.seed,
            },
        )?;
        let eval = |m: &SentimentModel| -> Result<Evaluation> {
            Ok(Evaluation {
                train: sentiment::evaluate(m, &train)?,
                held_out: if held_out.is_empty() {
                    None
                } else {
                    Some(sentiment::evaluate(m, &held_out)?)
                },
            })
        };
        let summary = TrainingSummary {
            kind: s.kind,
            classes: classes.to_vec(),
            records,
            empty_after_cleaning: empty,
            train: train.len(),
            held_out: held_out.len(),
            pool: pool.len(),
            pseudo_labeled: trained.pseudo.len(),
            base: eval(&trained.base)?,
            model: eval(&trained.model)?,
        };
        self.out
            .write_with(MODEL, |w| Ok(trained.model.write_json(w)?))?;
        self.out.write_json(TRAINING_SUMMARY, &summary)
    }

    fn model(&self) -> Result<SentimentModel> {
        let path = match &self.cfg.paths.model {
            Some(p) => p.clone(),
            None => self.out.input(MODEL, "train")?,
        };
        let f = std::fs::File::open(&path).map_err(|e| geosent::Error::Io {
            path: path.clone(),
            source: e,
        })?;
        Ok(SentimentModel::read_json(std::io::BufReader::new(f))?)
    }

    fn clean_records(&self) -> Result<Vec<CleanRecord>> {
        read_jsonl(&self.out.input(CLEAN_POSTS, "clean")?)
    }

    pub fn classify(&self) -> Result<()> {
        let model = self.model()?;
        let records: Vec<CleanRecord> = self
            .clean_records()?
            .into_iter()
            .filter(|r| r.rejected.is_none())
            .collect();
        let predictions = geosent::par::map(&records, |r| model.predict(&r.features()));
        let mut dist = Distribution::default();
        let mut rows = Vec::new();
        let mut fallback = 0;
        for (r, p) in records.iter().zip(&predictions) {
            if p.fallback {
                fallback += 1;
                continue;
            }
            dist.add(p.label);
            rows.push((r.id.as_str(), p.label));
        }
        self.out.write_with(PREDICTIONS, |w| {
            Ok(sentiment::write_predictions(rows.iter().copied(), w)?)
        })?;
        self.out.write_json(
            CLASSIFY_SUMMARY,
            &ClassifySummary {
                accepted_posts: records.len(),
                classified: rows.len(),
                fallback_skipped: fallback,
                distribution: dist,
            },
        )
    }

    pub fn import_predictions(&self, file: Option<&Path>) -> Result<()> {
        let path = match file {
            Some(p) => p,
            None => self
                .cfg
                .require(&self.cfg.paths.predictions, "predictions")?,
        };
        let known: Option<HashSet<String>> = if self.out.path(CLEAN_POSTS).is_file() {
            Some(
                self.clean_records()?
                    .into_iter()
                    .filter(|r| r.rejected.is_none())
                    .map(|r| r.id)
                    .collect(),
            )
        } else {
            None
        };
        let imported = sentiment::import_external_predictions(path, known.as_ref())?;
        let mut dist = Distribution::default();
        for l in imported.labels.values() {
            dist.add(*l);
        }
        self.out.write_with(PREDICTIONS, |w| {
            Ok(sentiment::write_predictions(
                imported.labels.iter().map(|(id, l)| (id.as_str(), *l)),
                w,
            )?)
        })?;
        self.out.write_json(
            IMPORT_SUMMARY,
            &ImportSummary {
                imported: imported.labels.len(),
                unknown_ids: imported.unknown_ids,
                distribution: dist,
            },
        )
    }

    pub fn aggregate(&self) -> Result<()> {
        let records = self.clean_records()?;
        let labels = sentiment::import_external_predictions(
            &self.out.input(PREDICTIONS, "classify")?,
            None,
        )?
        .labels;
        let mut neutral = 0;
        let posts: Vec<ClassifiedPost> = records
            .iter()
            .filter(|r| r.rejected.is_none())
            .filter_map(|r| {
                let label = *labels.get(&r.id)?;
                if label == SentimentLabel::Neutral {
                    neutral += 1;
                    return None;
                }
                Some(ClassifiedPost {
                    region_id: r.region_id.clone(),
                    timestamp: r.timestamp,
                    label,
                })
            })
            .collect();
        let acfg = AggregateConfig {
            event_date: self.cfg.event_date,
            min_posts: self.cfg.thresholds.min_region_posts,
            event_day: self.cfg.regression.event_day,
        };
        let agg = regional::aggregate(&posts, &acfg)?;
        let tests = regional::region_shift_tests(&agg.regions, self.cfg.thresholds.alpha);
        self.out.write_with(REGION_SENTIMENT, |w| {
            Ok(regional::write_region_csv(&agg.regions, &tests, w)?)
        })?;
        self.out.write_json(
            AGGREGATE_SUMMARY,
            &AggregateSummary {
                labeled_posts: posts.len(),
                neutral_skipped: neutral,
                unresolved: agg.unresolved,
                regions: agg.regions.len(),
                included: agg.included().count(),
                min_region_posts: acfg.min_posts,
            },
        )
    }

    fn region_sentiment(&self) -> Result<Vec<RegionSentiment>> {
        Ok(regional::read_region_csv(
            &self.out.input(REGION_SENTIMENT, "aggregate")?,
            self.cfg.thresholds.min_region_posts,
        )?)
    }

    pub fn shift_test(&self) -> Result<()> {
        let alpha = self.cfg.thresholds.alpha;
        let regions = self.region_sentiment()?;
        let global = regional::global_shift_test(&regions, alpha);
        let per_region = regional::region_shift_tests(&regions, alpha);
        let included = regions.iter().filter(|r| r.included).count();
        let regression = if included >= 2 {
            Some(regional::shift_regression(&regions)?)
        } else {
            log::warn!("shift regression skipped: {included} included region(s)");
            None
        };

        self.out.write_with(SHIFT_TESTS, |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["scope", "chi2", "df", "p", "degenerate", "significant"])?;
            for t in std::iter::once(&global).chain(&per_region) {
                csv.write_record([
                    t.scope.to_string(),
                    t.chi2.to_string(),
                    t.df.to_string(),
                    t.p_value.to_string(),
                    t.degenerate.to_string(),
                    t.significant().to_string(),
                ])?;
            }
            csv.flush()?;
            Ok(())
        })?;
        if let Some(r) = &regression {
            self.out.write_with(SHIFT_REGRESSION, |w| {
                Ok(stats::report::write_fit_csv(&r.fit, w)?)
            })?;
        }
        let regression = regression.map(|r| {
            let i = r.fit.index(regional::FLAG_NAME).unwrap();
            ShiftRegressionSummary {
                regions: r.regions,
                empty_periods: r.empty_periods,
                flag_coefficient: r.fit.beta[i],
                flag_p: r.fit.p[i],
            }
        });
        self.out.write_json(
            SHIFT_SUMMARY,
            &ShiftSummaryFile {
                alpha,
                regions: regional::shift_summary(&per_region, alpha),
                global,
                regression,
            },
        )
    }

    /// Regional design: the table's features, joined with aggregated
    /// sentiment when it exists and the table has no sentiment column.
    fn design(&self) -> Result<DesignMatrix> {
        let table = self.region_table()?;
        let sentiment = if table.feature_index(SENTIMENT_FEATURE).is_none()
            && self.out.path(REGION_SENTIMENT).is_file()
        {
            Some(self.region_sentiment()?)
        } else {
            None
        };
        let d = region_design(
            &table,
            sentiment.as_deref(),
            self.cfg.regression.features.as_deref(),
        )?;
        Ok(if self.cfg.regression.standardize {
            stats::standardize(&d)?.0
        } else {
            d
        })
    }

    pub fn regress(&self) -> Result<()> {
        let fit = stats::ols(&self.design()?)?;
        self.out
            .write_with(REGRESSION, |w| Ok(stats::report::write_fit_csv(&fit, w)?))?;
        self.out.write_text(
            REGRESSION_TABLE,
            &stats::report::coefficient_table(&[("Model", &fit)]),
        )
    }

    pub fn stepwise(&self) -> Result<()> {
        let d = self.design()?;
        let full = stats::ols(&d)?;
        let r = &self.cfg.regression;
        let res = stats::stepwise(&d, r.direction, r.start)?;
        self.out
            .write_with(STEPWISE, |w| Ok(stats::report::write_fit_csv(&res.fit, w)?))?;
        self.out.write_with(STEPWISE_TRACE, |w| {
            Ok(stats::report::write_trace_csv(&res, w)?)
        })?;
        self.out.write_text(
            STEPWISE_TABLE,
            &stats::report::coefficient_table(&[("General", &full), ("Selected", &res.fit)]),
        )
    }

    /// Every stage in order, then `summary.md`. Trains a model unless one
    /// is configured, and imports predictions instead of classifying when
    /// an external file is configured.
    pub fn pipeline(&self) -> Result<()> {
        self.ingest()?;
        self.clean()?;
        self.report_hashtags(10)?;
        self.report_emojis(10)?;
        if self.cfg.paths.predictions.is_some() {
            self.import_predictions(None)?;
        } else {
            if self.cfg.paths.model.is_none() {
                self.train()?;
            }
            self.classify()?;
        }
        self.aggregate()?;
        self.shift_test()?;
        if self.cfg.paths.region_table.is_some() {
            self.regress()?;
            self.stepwise()?;
        }
        let md = crate::summary::render(&self.out)?;
        self.out.write_text(SUMMARY, &md)
    }
}
