//! The shipped example documents parse, round-trip and give the values
//! worked out by hand.

use std::fs;

use eternalbar::acceptance::fixtures;
use eternalbar::complex::{Chain, FilteredComplex};
use eternalbar::persistence::{Bar, Barcode, ColimitClass, Presentation};
use eternalbar::real::Real;
use eternalbar::spectral::PersistenceAlgebra;
use eternalbar::torus::{build_algebra, SphereHamiltonian, SphereValue};
use eternalbar::{Exponent, Level};

fn data(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn fixture_files_match_the_library_constants() {
    assert_eq!(data("three_eternal.json").trim_end(), fixtures::THREE_ETERNAL);
    assert_eq!(data("odd_euler.json").trim_end(), fixtures::ODD_EULER);
    assert_eq!(data("ideal_violation.json").trim_end(), fixtures::IDEAL_VIOLATION);
    assert_eq!(data("shift_violation.json").trim_end(), fixtures::SHIFT_VIOLATION);
}

#[test]
fn presentation_document() {
    let p = Presentation::from_json(&data("presentation.json")).unwrap();
    let b = p.barcode().unwrap();
    assert_eq!(
        b.bars,
        vec![
            Bar::full(),
            Bar::from(0),
            Bar::finite(1, 3),
            Bar::finite(Exponent::new(5, 2), 4)
        ]
    );
    assert_eq!(b.eternal_subspace(), vec![0]);
    assert_eq!(Barcode::from_json(&b.to_json()).unwrap(), b);
}

#[test]
fn complex_document() {
    let c = FilteredComplex::from_json(&data("complex.json")).unwrap();
    c.verify().unwrap();
    assert_eq!(FilteredComplex::from_json(&c.to_json()).unwrap(), c);
    assert_eq!(c.homology().unwrap().rank, 2);
    // x1 ~ τ^1 x2, so the class of x1 can be pushed down to level −1.
    let m = c.min_filtration(&Chain::parse_spec("x1").unwrap()).unwrap();
    assert_eq!(m.level, Exponent::from_integer(-1));
    let h = c.min_filtration(&Chain::parse_spec("h").unwrap()).unwrap();
    assert_eq!(h.level, Exponent::new(-1, 2));
}

#[test]
fn algebra_documents_round_trip() {
    for text in [fixtures::ODD_EULER, fixtures::IDEAL_VIOLATION] {
        let a = PersistenceAlgebra::load(text).unwrap();
        let again = PersistenceAlgebra::load(&a.to_json()).unwrap();
        assert_eq!(again.doc(), a.doc());
    }
    let hams = vec![
        ("0".to_string(), SphereHamiltonian::zero(1)),
        ("p".to_string(), SphereHamiltonian::linear(vec![Exponent::one()])),
        ("-p".to_string(), SphereHamiltonian::linear(vec![-Exponent::one()])),
    ];
    let a = build_algebra(&hams, &[vec![-1], vec![0], vec![1]]).unwrap();
    let again = PersistenceAlgebra::load(&a.to_json()).unwrap();
    assert_eq!(again.spectral("p", &ColimitClass::basis(1)), Ok(Level::finite(1)));
}

#[test]
fn mesh_document() {
    let h = SphereHamiltonian::from_mesh_json("circle.json", &data("circle.json")).unwrap();
    // On the arc from e1 to (3/5,4/5) the cells are g·u with g = (1, 7/4).
    // Adding the linear part gives (3/2, 7/4), which points into the arc, so
    // the maximum is its norm √85/4. It beats the vertex value 2 + 3/10.
    let expected = Real::sqrt(&Exponent::new(85, 16).into_big()).unwrap();
    assert_eq!(h.shape_spectral(), SphereValue::Exact(expected));
    let err = SphereHamiltonian::from_mesh_json("broken.json", "{\"vertices\": [}").unwrap_err();
    assert!(err.to_string().starts_with("broken.json:1:"), "{err}");
}

#[test]
fn samples_document() {
    let h = SphereHamiltonian::from_samples_csv(&data("circle_samples.csv")).unwrap();
    let c = h.shape_spectral();
    assert!((c.to_f64() - 2f64.sqrt()).abs() <= c.tolerance(), "{}", c.render(None));
    assert!(c.tolerance() < 0.05);
    let err = SphereHamiltonian::from_samples_csv("1,0,1\n0,x,2\n").unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
}
