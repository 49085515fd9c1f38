//! Acceptance suite. One test per criterion; each prints a pass line when
//! it completes (visible with `--nocapture`), and the per-test ok/FAILED
//! output serves as the criterion checklist.

mod oracle;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use generator::random_bundle;
use storyref::fixtures;
use storyref::ingest::{
    parse_conll_coref, parse_conll_coref_lenient, read_jsonl, write_conll, write_jsonl,
    StoryBundle,
};
use storyref::labeling::{match_character_chains, PronounLexicon};
use storyref::metrics::text::transitions;
use storyref::model::{sentence_chain_index, validate_story, Chain, ChainId, Mention, Story};
use storyref::report::{compute_report, pairwise_metric_correlation, Metric, MetricReport};
use storyref::stats::{cohens_d, pearson, welch_t_test};
use storyref::synth::{planted_correlation, SplitMix64};

fn close(a: Option<f64>, b: Option<f64>, what: &str, context: &str) {
    match (a, b) {
        (None, None) => {}
        (Some(x), Some(y)) => {
            assert!((x - y).abs() <= 1e-12, "{what}: {x} vs {y} ({context})")
        }
        _ => panic!("{what}: definedness mismatch {a:?} vs {b:?} ({context})"),
    }
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence on 10,000 seeded random stories.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_01_oracle_equivalence() {
    let lexicon = PronounLexicon::default();
    let started = Instant::now();
    for seed in 0..10_000u64 {
        let bundle = random_bundle(seed);
        let report = compute_report(&bundle, &lexicon);
        let expected = oracle::evaluate(&bundle);
        let id = &bundle.story.story_id;
        assert_eq!(report.sentences, expected.sentences, "{id}");
        assert_eq!(report.words, expected.words, "{id}");
        assert_eq!(report.words_as_mentions, expected.words_as_mentions, "{id}");
        assert_eq!(report.num_chains, expected.num_chains, "{id}");
        assert_eq!(report.num_character_chains, expected.num_character_chains, "{id}");
        close(report.mean_chain_size, expected.mean_chain_size, "mean_chain_size", id);
        close(report.cci, expected.cci, "cci", id);
        close(report.char_tr, expected.char_tr, "char_tr", id);
        close(report.char_tr_count, expected.char_tr_count, "char_tr_count", id);
        close(report.char_dr, expected.char_dr, "char_dr", id);
        close(report.char_ad, expected.char_ad, "char_ad", id);
        close(report.char_ch, expected.char_ch, "char_ch", id);
        close(report.char_re, expected.char_re, "char_re", id);
        close(report.mcc, expected.mcc, "mcc", id);
        close(report.rec, expected.rec, "rec", id);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "oracle sweep took {elapsed:?}");
    println!("acceptance 1 oracle equivalence on 10000 random stories: ok ({elapsed:?})");
}

// ---------------------------------------------------------------------------
// 2. Hand-transcribed fixture stories reproduce their printed values.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_02_fixture_values() {
    let lexicon = PronounLexicon::default();

    let reconciliation = compute_report(&fixtures::two_character_reconciliation(), &lexicon);
    assert_eq!(reconciliation.mcc, Some(1.0), "dense two-character story scores MCC 1");

    let caption = compute_report(&fixtures::terse_caption(), &lexicon);
    assert_eq!(caption.char_tr, None, "single-sentence story has no transition value");
    assert_eq!(caption.char_dr, None);
    assert_eq!(caption.mcc, None);

    // The fixtures also agree with the brute-force oracle.
    for bundle in fixtures::all() {
        let report = compute_report(&bundle, &lexicon);
        let expected = oracle::evaluate(&bundle);
        close(report.mcc, expected.mcc, "mcc", &bundle.story.story_id);
        close(report.char_tr, expected.char_tr, "char_tr", &bundle.story.story_id);
        close(report.rec, expected.rec, "rec", &bundle.story.story_id);
    }
    println!("acceptance 2 fixture stories reproduce printed values: ok");
}

// ---------------------------------------------------------------------------
// 3. Invariant suite, 1000 random instances per property.
// ---------------------------------------------------------------------------

fn reversed(bundle: &StoryBundle) -> StoryBundle {
    let mut out = bundle.clone();
    let n = out.story.sentences.len();
    out.story.sentences.reverse();
    for chain in &mut out.story.chains {
        for m in &mut chain.mentions {
            m.sentence = n - 1 - m.sentence;
        }
        chain.mentions.sort();
    }
    out
}

fn relabeled(bundle: &StoryBundle, offset: u32) -> StoryBundle {
    let mut out = bundle.clone();
    let mut ids: Vec<ChainId> = out.story.chains.iter().map(|c| c.id).collect();
    ids.sort();
    // New id: reversed rank order, shifted; chain order in the vec is kept.
    for chain in &mut out.story.chains {
        let rank = ids.iter().position(|i| *i == chain.id).unwrap();
        chain.id = ChainId(offset + ((ids.len() - 1 - rank) as u32) * 3);
    }
    out
}

#[test]
fn acceptance_03_invariant_suite() {
    let lexicon = PronounLexicon::default();

    // Range bounds, per-pair complement, change duality.
    for seed in 20_000..21_000u64 {
        let bundle = random_bundle(seed);
        let report = compute_report(&bundle, &lexicon);
        for (name, value) in [
            ("char_tr", report.char_tr),
            ("char_dr", report.char_dr),
            ("char_ad", report.char_ad),
            ("char_ch", report.char_ch),
            ("char_re", report.char_re),
            ("mcc", report.mcc),
            ("rec", report.rec),
        ] {
            if let Some(v) = value {
                assert!((0.0..=1.0).contains(&v), "{name}={v} out of range");
            }
        }
        if let Some(cci) = report.cci {
            assert!(cci >= 0.0);
        }
        assert!(report.words_as_mentions <= report.words);

        let assignments = match_character_chains(&bundle.story, &bundle.story.roster);
        assert_eq!(
            assignments.assignments.len() + assignments.unlabeled.len(),
            bundle.story.chains.len(),
            "labeling partitions the chains"
        );
        let index =
            sentence_chain_index(&bundle.story, &assignments.character_chain_ids()).unwrap();
        for record in transitions(&index) {
            let cast = index.per_sentence[record.pair].len();
            let next = index.per_sentence[record.pair + 1].len();
            if let Some(drop) = record.drop_ratio {
                assert!((record.shared as f64 / cast as f64 + drop - 1.0).abs() <= 1e-12);
            }
            match record.complete_change {
                Some(change) => {
                    assert!(cast > 0 && next > 0);
                    assert_eq!(change, !record.shares_character);
                }
                None => assert!(cast == 0 || next == 0),
            }
        }
    }

    // Reversal duality: drop and add swap, the rest are unchanged.
    for seed in 21_000..22_000u64 {
        let bundle = random_bundle(seed);
        let forward = compute_report(&bundle, &lexicon);
        let backward = compute_report(&reversed(&bundle), &lexicon);
        close(forward.char_dr, backward.char_ad, "reversal drop<->add", &bundle.story.story_id);
        close(forward.char_ad, backward.char_dr, "reversal add<->drop", &bundle.story.story_id);
        close(forward.char_tr, backward.char_tr, "reversal char_tr", &bundle.story.story_id);
        close(forward.char_ch, backward.char_ch, "reversal char_ch", &bundle.story.story_id);
        close(forward.char_re, backward.char_re, "reversal char_re", &bundle.story.story_id);
    }

    // Relabeling invariance.
    for seed in 22_000..23_000u64 {
        let bundle = random_bundle(seed);
        let original = compute_report(&bundle, &lexicon);
        let renamed = compute_report(&relabeled(&bundle, 500), &lexicon);
        close(original.char_tr, renamed.char_tr, "relabel char_tr", &bundle.story.story_id);
        close(original.char_dr, renamed.char_dr, "relabel char_dr", &bundle.story.story_id);
        close(original.char_re, renamed.char_re, "relabel char_re", &bundle.story.story_id);
        close(original.cci, renamed.cci, "relabel cci", &bundle.story.story_id);
        close(original.mcc, renamed.mcc, "relabel mcc", &bundle.story.story_id);
        close(original.rec, renamed.rec, "relabel rec", &bundle.story.story_id);
        assert_eq!(original.num_chains, renamed.num_chains);
    }

    // REC is invariant under sequence reversal and run-length encoding.
    {
        use storyref::labeling::{Realization, RealizationSequence};
        use storyref::metrics::rec::rec_chain;
        let kinds =
            [Realization::Name, Realization::Pronoun, Realization::Both, Realization::Other];
        let mut rng = SplitMix64::new(4242);
        for _ in 0..1_000 {
            let len = 1 + rng.next_below(8) as usize;
            let sequence: Vec<Realization> =
                (0..len).map(|_| kinds[rng.next_below(4) as usize]).collect();
            let seq = |s: Vec<Realization>| RealizationSequence { chain_id: ChainId(0), sequence: s };
            let base = rec_chain(&seq(sequence.clone())).unwrap();
            let mut rev = sequence.clone();
            rev.reverse();
            assert_eq!(base, rec_chain(&seq(rev)).unwrap());
            let mut rle = sequence.clone();
            rle.dedup();
            assert_eq!(base, rec_chain(&seq(rle)).unwrap());
        }
    }

    // MCC symmetry: swapping the text and image presence patterns of the
    // character leaves its consistency unchanged.
    {
        use storyref::metrics::multimodal::mcc;
        let mut rng = SplitMix64::new(777);
        for _ in 0..1_000 {
            let slots = 1 + rng.next_below(10) as usize;
            let text: Vec<usize> = (0..slots).filter(|_| rng.chance(0.5)).collect();
            let image: Vec<usize> = (0..slots).filter(|_| rng.chance(0.5)).collect();
            let a = presence_story(slots, &text, &image);
            let b = presence_story(slots, &image, &text);
            let set_a = match_character_chains(&a.story, &a.story.roster);
            let set_b = match_character_chains(&b.story, &b.story.roster);
            let mcc_a = mcc(&a.story, &set_a, a.story.images.as_ref(), &a.story.roster);
            let mcc_b = mcc(&b.story, &set_b, b.story.images.as_ref(), &b.story.roster);
            assert_eq!(mcc_a.mcc, mcc_b.mcc);
        }
    }

    // Pearson scale invariance.
    {
        let mut rng = SplitMix64::new(31337);
        for _ in 0..1_000 {
            let n = 3 + rng.next_below(20) as usize;
            let x: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
            let Ok(base) = pearson(&x, &y) else { continue };
            let a = if rng.chance(0.5) { 2.5 } else { -1.75 };
            let c = if rng.chance(0.5) { 0.5 } else { -3.0 };
            let xs: Vec<f64> = x.iter().map(|v| a * v + 0.7).collect();
            let ys: Vec<f64> = y.iter().map(|v| c * v - 2.2).collect();
            let scaled = pearson(&xs, &ys).unwrap();
            let sign = (a * c).signum();
            assert!((scaled.statistic - sign * base.statistic).abs() <= 1e-9);
            assert!((scaled.p_value - base.p_value).abs() <= 1e-9);
        }
    }

    println!("acceptance 3 invariant suite (1000 instances per property): ok");
}

/// One-character story with the given text presence plus an image sequence
/// with the given image presence.
fn presence_story(slots: usize, text: &[usize], image: &[usize]) -> StoryBundle {
    use storyref::model::{CharacterName, ImageAppearance, ImageSequence};
    let sentences: Vec<Vec<String>> = (0..slots)
        .map(|s| {
            if text.contains(&s) {
                vec!["Ana".to_string(), ".".to_string()]
            } else {
                vec!["nothing".to_string(), ".".to_string()]
            }
        })
        .collect();
    let mentions: Vec<Mention> = text.iter().map(|&s| Mention::new(s, 0, 0)).collect();
    let chains = if mentions.is_empty() {
        vec![]
    } else {
        vec![Chain::new(ChainId(0), mentions)]
    };
    let images = ImageSequence::new(
        (0..slots)
            .map(|j| {
                if image.contains(&j) {
                    ImageAppearance::new(format!("i{j}"), ["Ana"])
                } else {
                    ImageAppearance::new(format!("i{j}"), Vec::<String>::new())
                }
            })
            .collect(),
    );
    let story = Story {
        story_id: "presence".into(),
        sentences,
        chains,
        roster: vec![CharacterName::new("Ana")],
        images: Some(images),
    };
    StoryBundle::new(story, "test")
}

// ---------------------------------------------------------------------------
// 4. Statistics accuracy against hand and integration oracles.
// ---------------------------------------------------------------------------

/// Lanczos approximation of ln Gamma (g = 7, 9 coefficients).
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn t_density(x: f64, df: f64) -> f64 {
    let log_norm = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (log_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp()
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let x = a + h * i as f64;
        total += f(x) * if i % 2 == 0 { 2.0 } else { 4.0 };
    }
    total * h / 3.0
}

/// Two-sided t-distribution p-value by numerical integration of the density
/// over the central interval.
fn integrated_two_sided_p(t: f64, df: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return 1.0;
    }
    let central = simpson(&|x| t_density(x, df), -t, t, 20_000);
    (1.0 - central).clamp(0.0, 1.0)
}

#[test]
fn acceptance_04_statistics_accuracy() {
    // Frozen hand computations.
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let b = [2.0, 3.0, 4.0, 5.0, 6.0];
    let welch = welch_t_test(&a, &b).unwrap();
    assert!((welch.statistic - (-1.0)).abs() <= 1e-9);
    assert!((welch.p_value - 0.3465935070873342).abs() <= 1e-6);
    assert!((welch.effect_size - (-0.6324555320336759)).abs() <= 1e-9);
    assert!((cohens_d(&a, &b).unwrap() - (-0.6324555320336759)).abs() <= 1e-9);

    let c = [1.1, 2.3, 3.1, 4.8, 5.2, 6.9];
    let d = [2.0, 2.1, 2.2, 2.05];
    let welch2 = welch_t_test(&c, &d).unwrap();
    assert!((welch2.statistic - 2.088504777419167).abs() <= 1e-9);
    assert!((welch2.p_value - 0.09080317204822656).abs() <= 1e-6);
    assert!((welch2.effect_size - 1.0792831935931509).abs() <= 1e-9);

    let x = [1.0, 2.0, 3.0, 4.0];
    let y = [1.0, 3.0, 2.0, 4.0];
    let corr = pearson(&x, &y).unwrap();
    assert!((corr.statistic - 0.8).abs() <= 1e-9);
    assert!((corr.p_value - 0.2).abs() <= 1e-6);

    // Identities hold exactly.
    let same = welch_t_test(&a, &a).unwrap();
    assert_eq!(same.statistic, 0.0);
    assert_eq!(same.p_value, 1.0);
    let ab = welch_t_test(&a, &b).unwrap();
    let ba = welch_t_test(&b, &a).unwrap();
    assert_eq!(ab.statistic, -ba.statistic);
    assert_eq!(ab.p_value, ba.p_value);

    // p-values agree with numerical integration of the t density for
    // random Welch and Pearson inputs.
    let mut rng = SplitMix64::new(55);
    for round in 0..60 {
        let na = 3 + rng.next_below(20) as usize;
        let nb = 3 + rng.next_below(20) as usize;
        let shift = rng.next_f64() * 2.0;
        let xs: Vec<f64> = (0..na).map(|_| rng.next_f64() * 3.0).collect();
        let ys: Vec<f64> = (0..nb).map(|_| rng.next_f64() * 2.0 + shift).collect();
        let Ok(result) = welch_t_test(&xs, &ys) else { continue };
        // Welch-Satterthwaite degrees of freedom, recomputed for the oracle.
        let va = xs.iter().map(|v| (v - mean(&xs)).powi(2)).sum::<f64>() / (na as f64 - 1.0);
        let vb = ys.iter().map(|v| (v - mean(&ys)).powi(2)).sum::<f64>() / (nb as f64 - 1.0);
        let (sa, sb) = (va / na as f64, vb / nb as f64);
        let df = (sa + sb).powi(2) / (sa * sa / (na as f64 - 1.0) + sb * sb / (nb as f64 - 1.0));
        let reference = integrated_two_sided_p(result.statistic, df);
        assert!(
            (result.p_value - reference).abs() <= 1e-6,
            "round {round}: p={} vs integral {reference}",
            result.p_value
        );

        let n = 4 + rng.next_below(16) as usize;
        let px: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let py: Vec<f64> = px.iter().map(|v| v * 0.5 + rng.next_f64()).collect();
        let Ok(rho) = pearson(&px, &py) else { continue };
        let r = rho.statistic;
        let dfp = (n - 2) as f64;
        let t = r * (dfp / (1.0 - r * r)).sqrt();
        let reference = integrated_two_sided_p(t, dfp);
        assert!((rho.p_value - reference).abs() <= 1e-6, "round {round}: pearson p");
    }

    println!("acceptance 4 statistics accuracy vs hand and integration oracles: ok");
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

// ---------------------------------------------------------------------------
// 5. Format robustness.
// ---------------------------------------------------------------------------

#[test]
fn acceptance_05_format_robustness() {
    use storyref::synth::{generate, PresencePattern, RealizationPattern, SynthParams};

    // Fifty varied documents.
    let mut bundles: Vec<StoryBundle> = Vec::new();
    for i in 0..50u64 {
        let presence = match i % 4 {
            0 => PresencePattern::Dense,
            1 => PresencePattern::Alternating,
            2 => PresencePattern::Block,
            _ => PresencePattern::Random(0.4 + (i % 5) as f64 * 0.1),
        };
        let (mut bundle, _) = generate(&SynthParams {
            seed: 9_000 + i,
            n_sentences: 1 + (i as usize % 9),
            n_characters: (i as usize % 5),
            presence,
            realization: RealizationPattern::Alternating,
            images: PresencePattern::Random(0.5),
        })
        .unwrap();
        bundle.story.story_id = format!("doc-{i:03}");
        bundles.push(bundle);
    }

    // CoNLL round trip preserves bracket structure.
    let mut conll = Vec::new();
    write_conll(&bundles, &mut conll).unwrap();
    let reparsed = parse_conll_coref(std::io::BufReader::new(conll.as_slice()), "test").unwrap();
    assert_eq!(reparsed.len(), bundles.len());
    for (original, parsed) in bundles.iter().zip(&reparsed) {
        assert_eq!(original.story.sentences, parsed.story.sentences);
        assert_eq!(original.story.chains, parsed.story.chains);
    }
    let mut conll_again = Vec::new();
    write_conll(&reparsed, &mut conll_again).unwrap();
    assert_eq!(conll, conll_again, "second serialization is byte-identical");

    // JSONL round trip is the identity.
    let mut jsonl = Vec::new();
    write_jsonl(&bundles, &mut jsonl).unwrap();
    let parsed = read_jsonl(std::io::BufReader::new(jsonl.as_slice())).unwrap();
    assert_eq!(parsed, bundles);
    let mut jsonl_again = Vec::new();
    write_jsonl(&parsed, &mut jsonl_again).unwrap();
    assert_eq!(jsonl, jsonl_again);

    // Planted malformed documents yield diagnostics, not crashes.
    let broken = std::fs::read(fixture_path("corpus_broken.conll")).unwrap();
    let (good, errors) =
        parse_conll_coref_lenient(std::io::BufReader::new(broken.as_slice()), "test").unwrap();
    assert_eq!(good.len(), 8);
    assert_eq!(errors.len(), 2);
    for bundle in &good {
        assert_eq!(validate_story(&bundle.story), vec![]);
    }

    println!("acceptance 5 format robustness on 50-document fixture: ok");
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

// ---------------------------------------------------------------------------
// 6. End-to-end determinism across worker counts.
// ---------------------------------------------------------------------------

fn storyref_bin(args: &[&str]) {
    let output = Command::new(env!("CARGO_BIN_EXE_storyref"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "storyref {args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn path_str(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

#[test]
fn acceptance_06_end_to_end_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs: Vec<Vec<u8>> = Vec::new();
    for (round, jobs) in [(0, "1"), (1, "8"), (2, "1"), (3, "8")] {
        let canonical = dir.path().join(format!("c{round}.jsonl"));
        let metrics = dir.path().join(format!("m{round}.jsonl"));
        let compare = dir.path().join(format!("cmp{round}.json"));
        storyref_bin(&[
            "ingest",
            &path_str(&fixture_path("human.conll")),
            &path_str(&fixture_path("model-a.conll")),
            "--sidecar",
            &path_str(&fixture_path("sidecar.jsonl")),
            "--out",
            &path_str(&canonical),
        ]);
        storyref_bin(&["compute", &path_str(&canonical), "--jobs", jobs, "--out", &path_str(&metrics)]);
        storyref_bin(&[
            "compare",
            &path_str(&metrics),
            "--format",
            "json",
            "--out",
            &path_str(&compare),
        ]);
        let mut blob = std::fs::read(&canonical).unwrap();
        blob.extend(std::fs::read(&metrics).unwrap());
        blob.extend(std::fs::read(&compare).unwrap());
        outputs.push(blob);
    }
    assert!(
        outputs.windows(2).all(|w| w[0] == w[1]),
        "pipeline outputs differ across runs or worker counts"
    );
    println!("acceptance 6 end-to-end determinism (jobs 1 vs 8): ok");
}

// ---------------------------------------------------------------------------
// 7. Sensitivity: switch rate vs multimodal continuity.
// ---------------------------------------------------------------------------

/// Story with one active character per sentence; the active character
/// switches between two names with the given probability. Images show each
/// character that appears in the text, in every image.
fn switch_story(seed: u64, rate: f64, sentences: usize) -> StoryBundle {
    use storyref::model::{CharacterName, ImageAppearance, ImageSequence};
    let mut rng = SplitMix64::new(seed);
    let names = ["Ana", "Bo"];
    let mut active = rng.next_below(2) as usize;
    let mut presence: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    let mut sentence_tokens: Vec<Vec<String>> = Vec::new();
    for s in 0..sentences {
        if s > 0 && rng.chance(rate) {
            active = 1 - active;
        }
        presence[active].push(s);
        sentence_tokens.push(vec![names[active].to_string(), "pauses".into(), ".".into()]);
    }
    let chains: Vec<Chain> = presence
        .iter()
        .enumerate()
        .filter(|(_, ss)| !ss.is_empty())
        .map(|(c, ss)| {
            Chain::new(ChainId(c as u32), ss.iter().map(|&s| Mention::new(s, 0, 0)).collect())
        })
        .collect();
    let appearing: Vec<String> = presence
        .iter()
        .enumerate()
        .filter(|(_, ss)| !ss.is_empty())
        .map(|(c, _)| names[c].to_string())
        .collect();
    let images = ImageSequence::new(
        (0..sentences)
            .map(|j| ImageAppearance::new(format!("i{j}"), appearing.iter().cloned()))
            .collect(),
    );
    let story = Story {
        story_id: format!("switch-{seed}"),
        sentences: sentence_tokens,
        chains,
        roster: names.iter().map(|n| CharacterName::new(*n)).collect(),
        images: Some(images),
    };
    StoryBundle::new(story, "synthetic")
}

#[test]
fn acceptance_07_sensitivity() {
    let lexicon = PronounLexicon::default();

    // Mean MCC strictly decreases as the character-switch rate grows, and
    // pooled per-story CharCh correlates negatively with MCC.
    let rates = [0.05, 0.25, 0.5, 0.75, 0.95];
    let mut mean_mcc = Vec::new();
    let mut pooled: Vec<MetricReport> = Vec::new();
    for (i, rate) in rates.iter().enumerate() {
        let mut values = Vec::new();
        for k in 0..400u64 {
            let bundle = switch_story(100_000 + (i as u64) * 1_000 + k, *rate, 9);
            let report = compute_report(&bundle, &lexicon);
            values.push(report.mcc.expect("images present"));
            pooled.push(report);
        }
        mean_mcc.push(values.iter().sum::<f64>() / values.len() as f64);
    }
    for pair in mean_mcc.windows(2) {
        assert!(
            pair[1] < pair[0],
            "mean MCC should fall as switching rises: {mean_mcc:?}"
        );
    }
    let (correlation, n, _) =
        pairwise_metric_correlation(&pooled, Metric::CharCh, Metric::Mcc).unwrap();
    assert!(n >= 1_000);
    assert!(
        correlation.statistic < 0.0 && correlation.significant_05,
        "pooled CharCh~MCC correlation should be negative, got {}",
        correlation.statistic
    );

    // Planted correlation is recovered within +/- 0.05 at n = 1000.
    let pairs = planted_correlation(90_210, 1_000, -0.25);
    let planted: Vec<MetricReport> = pairs
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let mut report = compute_report(&switch_story(1, 0.5, 3), &lexicon);
            report.story_id = format!("planted-{i}");
            report.char_ch = Some(*a);
            report.mcc = Some(*b);
            report
        })
        .collect();
    let (recovered, n, excluded) =
        pairwise_metric_correlation(&planted, Metric::CharCh, Metric::Mcc).unwrap();
    assert_eq!((n, excluded), (1_000, 0));
    assert!(
        (recovered.statistic + 0.25).abs() <= 0.05,
        "planted rho -0.25, recovered {}",
        recovered.statistic
    );

    println!(
        "acceptance 7 sensitivity: mean MCC by switch rate {mean_mcc:?}, pooled rho {:.3}, planted rho recovered {:.3}: ok",
        correlation.statistic, recovered.statistic
    );
}
