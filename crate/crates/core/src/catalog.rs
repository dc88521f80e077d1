//! Built-in models.

use ppst_expr::{parse_expr, BigRational, DomainConstraint, RationalExpr};

use crate::deformation::{apply_deformation, DeformationParams};
use crate::error::GeometryError;
use crate::model::ManifoldModel;
use crate::paracontact::{Flag, ParacontactStructure, ReferenceFrame};
use crate::tensor::vec::Vector;
use crate::tensor::Tensor;

pub const KNOWN_INCONSISTENT: &str = "known-inconsistent";

/// What a catalog entry is expected to satisfy.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Expectations {
    pub axioms_pass: bool,
    pub classification: Option<Flag>,
    pub scalar_curvature: Option<RationalExpr>,
    pub lambda: Option<BigRational>,
    /// `Some(None)` means "not of constant curvature".
    pub constant_curvature: Option<Option<BigRational>>,
}

#[derive(Clone, Debug)]
pub struct ModelEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub tags: Vec<&'static str>,
    /// Field name and where its data comes from.
    pub provenance: Vec<(&'static str, &'static str)>,
    pub structure: ParacontactStructure,
    pub expected: Expectations,
}

impl ModelEntry {
    pub fn is_known_inconsistent(&self) -> bool {
        self.tags.contains(&KNOWN_INCONSISTENT)
    }
}

pub const MODEL_NAMES: [&str; 6] = [
    "flat-paracosymplectic",
    "example-frame",
    "example-chart-printed",
    "example-chart-corrected",
    "parasasakian-deformed",
    "constant-negative-curvature",
];

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn r(n: i64) -> RationalExpr {
    RationalExpr::from_int(n)
}

fn xyz(s: &str) -> RationalExpr {
    parse_expr(s, &["x", "y", "z"]).expect("catalog expression")
}

fn rows(m: &[[&str; 3]; 3]) -> Vec<Vec<RationalExpr>> {
    m.iter().map(|row| row.iter().map(|s| xyz(s)).collect()).collect()
}

fn split_metric() -> Tensor {
    Tensor::bilinear(&[
        vec![r(1), r(0), r(0)],
        vec![r(0), r(-1), r(0)],
        vec![r(0), r(0), r(1)],
    ])
}

fn swap_phi() -> Tensor {
    Tensor::endomorphism(&[
        vec![r(0), r(1), r(0)],
        vec![r(1), r(0), r(0)],
        vec![r(0), r(0), r(0)],
    ])
}

fn frame_labels() -> Vec<String> {
    vec!["e1".into(), "e2".into(), "xi".into()]
}

fn frame_structure(brackets: &[((usize, usize), Vector)]) -> ParacontactStructure {
    let m = ManifoldModel::frame(frame_labels(), brackets).expect("catalog frame");
    ParacontactStructure::new(m, swap_phi(), vec![r(0), r(0), r(1)], None, split_metric())
        .expect("catalog structure")
}

pub fn flat_paracosymplectic() -> ParacontactStructure {
    let m = ManifoldModel::chart(vec!["x".into(), "y".into(), "z".into()], vec![]).expect("chart");
    ParacontactStructure::new(
        m,
        swap_phi(),
        vec![r(0), r(0), r(1)],
        Some(Tensor::covector(vec![r(0), r(0), r(1)])),
        split_metric(),
    )
    .expect("flat structure")
}

pub fn example_frame() -> ParacontactStructure {
    frame_structure(&[((0, 1), vec![r(0), r(0), r(4)])])
}

fn example_chart(metric: &[[&str; 3]; 3]) -> ParacontactStructure {
    let m = ManifoldModel::chart(
        vec!["x".into(), "y".into(), "z".into()],
        vec![DomainConstraint::nonzero(xyz("z"))],
    )
    .expect("chart");
    let phi = Tensor::endomorphism(&rows(&[["0", "4*y", "0"], ["0", "0", "1/z"], ["0", "z", "0"]]));
    let g = Tensor::bilinear(&rows(metric));
    let eta = Tensor::covector(vec![xyz("1"), xyz("0"), xyz("-4*y/z")]);
    let frame = ReferenceFrame {
        labels: frame_labels(),
        vectors: vec![
            vec![xyz("4*y"), xyz("0"), xyz("z")],
            vec![xyz("0"), xyz("1"), xyz("0")],
            vec![xyz("1"), xyz("0"), xyz("0")],
        ],
        signature: vec![1, -1, 1],
    };
    ParacontactStructure::new(m, phi, vec![r(1), r(0), r(0)], Some(eta), g)
        .and_then(|s| s.with_reference_frame(frame))
        .expect("chart structure")
}

pub fn example_chart_printed() -> ParacontactStructure {
    example_chart(&[
        ["1", "0", "-2*y/z"],
        ["0", "-1", "0"],
        ["-2*y/z", "0", "(1+28*y^2)/z^2"],
    ])
}

pub fn example_chart_corrected() -> ParacontactStructure {
    example_chart(&[
        ["1", "0", "-4*y/z"],
        ["0", "-1", "0"],
        ["-4*y/z", "0", "(1+16*y^2)/z^2"],
    ])
}

/// Homothetic parameters taking `example-frame` (`A = 2 phi`) to `A = -phi`.
pub fn parasasakian_params() -> DeformationParams {
    DeformationParams::from_ints(-2, 4).expect("valid params")
}

pub fn parasasakian_deformed() -> ParacontactStructure {
    apply_deformation(&example_frame(), &parasasakian_params()).expect("deformation")
}

/// `[e1,e2] = -xi`, `[xi,e1] = e2`, `[xi,e2] = e1`: a bi-invariant metric
/// on a three-dimensional simple Lie algebra, with `A = -phi/2`, `K = -1/4`.
pub fn constant_negative_curvature() -> ParacontactStructure {
    frame_structure(&[
        ((0, 1), vec![r(0), r(0), r(-1)]),
        ((2, 0), vec![r(0), r(1), r(0)]),
        ((2, 1), vec![r(1), r(0), r(0)]),
    ])
}

pub fn model_catalog() -> Vec<ModelEntry> {
    vec![
        ModelEntry {
            name: "flat-paracosymplectic",
            description: "R^3 with xi = d_z, eta = dz, phi swapping d_x and d_y, g = dx^2 - dy^2 + dz^2",
            tags: vec![],
            provenance: vec![("all", "direct construction")],
            structure: flat_paracosymplectic(),
            expected: Expectations {
                axioms_pass: true,
                classification: Some(Flag::Paracosymplectic),
                scalar_curvature: Some(r(0)),
                lambda: None,
                constant_curvature: Some(Some(q(0))),
            },
        },
        ModelEntry {
            name: "example-frame",
            description: "orthonormal frame e1, e2, xi of signature (+,-,+), phi e1 = e2, [e1,e2] = 4 xi",
            tags: vec![],
            provenance: vec![
                ("brackets", "published example"),
                ("g", "published example"),
                ("phi", "published example"),
            ],
            structure: example_frame(),
            expected: Expectations {
                axioms_pass: true,
                classification: Some(Flag::ProperQuasiParaSasakian),
                scalar_curvature: Some(r(8)),
                lambda: Some(q(2)),
                constant_curvature: Some(None),
            },
        },
        ModelEntry {
            name: "example-chart-printed",
            description: "published chart data on z != 0, reproduced verbatim",
            tags: vec![KNOWN_INCONSISTENT],
            provenance: vec![
                ("g", "published example, verbatim"),
                ("phi", "published example, verbatim"),
                ("eta", "published example, verbatim"),
                ("frame", "published example, verbatim"),
            ],
            structure: example_chart_printed(),
            expected: Expectations {
                axioms_pass: false,
                ..Expectations::default()
            },
        },
        ModelEntry {
            name: "example-chart-corrected",
            description: "published chart data with g = th1^2 - th2^2 + eta^2 for th1 = dz/z, th2 = dy",
            tags: vec![],
            provenance: vec![
                ("phi", "published example"),
                ("eta", "published example"),
                ("g", "derived from the dual coframe of e1, e2, xi"),
            ],
            structure: example_chart_corrected(),
            expected: Expectations {
                axioms_pass: true,
                classification: Some(Flag::ProperQuasiParaSasakian),
                scalar_curvature: Some(r(8)),
                lambda: Some(q(-2)),
                constant_curvature: Some(None),
            },
        },
        ModelEntry {
            name: "parasasakian-deformed",
            description: "example-frame under the homothetic deformation alpha = -2, beta = 4",
            tags: vec![],
            provenance: vec![("all", "derived by deformation of example-frame")],
            structure: parasasakian_deformed(),
            expected: Expectations {
                axioms_pass: true,
                classification: Some(Flag::ParaSasakian),
                scalar_curvature: None,
                lambda: Some(q(-1)),
                constant_curvature: Some(None),
            },
        },
        ModelEntry {
            name: "constant-negative-curvature",
            description: "frame with [e1,e2] = -xi, [xi,e1] = e2, [xi,e2] = e1; constant curvature -1/4",
            tags: vec![],
            provenance: vec![("brackets", "found by exhaustive search over small structure constants")],
            structure: constant_negative_curvature(),
            expected: Expectations {
                axioms_pass: true,
                classification: Some(Flag::ProperQuasiParaSasakian),
                scalar_curvature: Some(RationalExpr::from_ratio(-3, 2)),
                lambda: Some(BigRational::new((-1).into(), 2.into())),
                constant_curvature: Some(Some(BigRational::new((-1).into(), 4.into()))),
            },
        },
    ]
}

pub fn find_model(name: &str) -> Result<ModelEntry, GeometryError> {
    model_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| GeometryError::UnknownModel(name.to_string()))
}
