use ppst_core::catalog::model_catalog;
use ppst_core::*;

#[test]
fn catalog_expectations() {
    for e in model_catalog() {
        let s = &e.structure;
        let report = s.validate();
        assert_eq!(report.passed(), e.expected.axioms_pass, "{}: {report}", e.name);
        if !report.passed() {
            assert!(e.is_known_inconsistent());
            continue;
        }
        let c = classify(s).unwrap();
        if let Some(f) = e.expected.classification {
            assert!(c.has(f), "{}: {:?}", e.name, c);
        }
        if let Some(r) = &e.expected.scalar_curvature {
            assert_eq!(&s.curvature().unwrap().scalar, r, "{}", e.name);
        }
        let o = detect_homothetic_origin(s).unwrap();
        assert_eq!(o.as_ref().map(|o| o.lambda.clone()), e.expected.lambda, "{}", e.name);
        if let Some(k) = &e.expected.constant_curvature {
            assert_eq!(&constant_curvature_of(s).unwrap(), k, "{}", e.name);
        }
        let ids = run_suite(s).unwrap();
        assert!(ids.passed(), "{}: {ids}", e.name);
        let th = check_constant_curvature_theorem(s).unwrap();
        assert!(th.passed(), "{}: {th}", e.name);
    }
}
