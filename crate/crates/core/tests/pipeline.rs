use adaptqp::dataio::{gen_toy_two_class, read_features, save_features};
use adaptqp::harness::{run_setting, run_setting_on, DataSource};
use adaptqp::{alternate, AdaptOptions, Domain, ExperimentConfig, FeatureFormat, HyperParams, Method, Setting};

#[test]
fn toy_alternation_objective_never_increases() {
    let (s, t) = gen_toy_two_class(4).unwrap();
    for method in [Method::Mmdt, Method::Mmdtl2] {
        let out = alternate(&s, &t, &HyperParams::default(), &AdaptOptions::new(method)).unwrap();
        for pair in out.trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-6 * (1.0 + pair[0].abs()), "{method:?}: {:?}", out.trace);
        }
        let correct = t
            .features()
            .row_iter()
            .zip(t.labels())
            .filter(|(x, &y)| out.model.predict(&out.transform.apply(x).unwrap()).unwrap() == y)
            .count();
        assert!(correct as f64 >= 0.9 * t.len() as f64, "{method:?}: {correct}/{}", t.len());
    }
}

#[test]
fn file_round_trip_gives_identical_folds() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = gen_toy_two_class(9).unwrap();
    for format in [FeatureFormat::Csv, FeatureFormat::SvmLight] {
        let ext = if format == FeatureFormat::Csv { "csv" } else { "svm" };
        let (sp, tp) = (dir.path().join(format!("s.{ext}")), dir.path().join(format!("t.{ext}")));
        save_features(&s, &sp, format).unwrap();
        save_features(&t, &tp, format).unwrap();
        let s2 = read_features(&sp, format, Domain::Source).unwrap();
        assert_eq!(s2.labels(), s.labels());

        let from_files = ExperimentConfig::new(
            Setting::Mmdtl2,
            DataSource::Files {
                source: sp,
                target: tp,
                format: None,
            },
            9,
        );
        let a = run_setting(&from_files).unwrap();
        let b = run_setting(&ExperimentConfig::new(Setting::Mmdtl2, DataSource::Toy, 9)).unwrap();
        let acc = |rows: &[adaptqp::ReportRow]| rows.iter().map(|r| r.accuracy).collect::<Vec<_>>();
        assert_eq!(acc(&a), acc(&b));
    }
}

#[test]
fn source_only_on_identical_domains_matches_baseline() {
    let (s, _) = gen_toy_two_class(2).unwrap();
    let t = adaptqp::Dataset::new(s.features().clone(), s.labels().to_vec(), s.n_classes(), Domain::Target).unwrap();
    let cfg = |setting| ExperimentConfig::new(setting, DataSource::Toy, 2);
    let only = run_setting_on(&cfg(Setting::SourceOnly), &s, &t).unwrap();
    let base = run_setting_on(&cfg(Setting::Baseline), &s, &t).unwrap();
    for (a, b) in only.iter().zip(&base) {
        assert_eq!(a.accuracy, b.accuracy);
    }
}
