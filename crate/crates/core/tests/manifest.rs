mod common;

use compar::manifest::{manifest_parse, manifest_serialize, InterfaceManifest};
use compar::model::ProgramModel;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn round_trip(model in common::gen::model(), digest in common::gen::digest()) {
        let manifest = InterfaceManifest::from_model(&model, digest.clone());
        let text = manifest_serialize(&manifest);
        let parsed = manifest_parse(&text).unwrap();
        prop_assert_eq!(&parsed, &manifest);
        prop_assert_eq!(&parsed.source_digest, &digest);
        prop_assert_eq!(parsed.to_model().interfaces, model.interfaces);
        prop_assert_eq!(manifest_serialize(&manifest_parse(&text).unwrap()), text);
    }

    #[test]
    fn truncation_is_rejected(model in common::gen::model(), digest in common::gen::digest()) {
        let text = manifest_serialize(&InterfaceManifest::from_model(&model, digest));
        let without_digest: String = text.lines().filter(|l| !l.starts_with("digest")).map(|l| format!("{l}\n")).collect();
        prop_assert!(manifest_parse(&without_digest).is_err());
    }
}

#[test]
fn empty_model() {
    let manifest = InterfaceManifest::from_model(&ProgramModel::default(), "00");
    let text = manifest_serialize(&manifest);
    assert_eq!(text, "compar-manifest v1\ndigest 00\n");
    assert_eq!(manifest_parse(&text).unwrap(), manifest);
}

#[test]
fn errors_carry_line_numbers() {
    let good =
        "compar-manifest v1\ninterface f\nparam x float n read\nvariant f_seq SEQ\ndigest ab\n";
    assert!(manifest_parse(good).is_ok());
    let cases = [
        ("compar-manifest v2\ndigest ab\n", 1),
        (&good.replace("n read", "a,b,c,d,e read"), 3),
        (&good.replace("float", "quad"), 3),
        (&good.replace("SEQ", "FPGA"), 4),
        (&good.replace("read", "modify"), 3),
        ("compar-manifest v1\ninterface f\ndigest ab\n", 3),
        (&format!("{good}interface g\n"), 6),
        (&good.replace("param x", "param  x"), 3),
        (
            &good.replace(
                "variant f_seq SEQ\n",
                "variant f_seq SEQ\nvariant f_seq SEQ\n",
            ),
            5,
        ),
    ];
    for (text, line) in cases {
        let e = manifest_parse(text).unwrap_err();
        assert_eq!(e.line, line, "{text}: {e}");
    }
}
