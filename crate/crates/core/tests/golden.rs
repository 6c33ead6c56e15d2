use cosets_core::complex::{order_complex, SimplicialComplex};
use cosets_core::families::{cosets_of_family, family_normal_proper};
use cosets_core::homology::homology;
use cosets_core::wedge::{predict_normal_wedge, WedgeDescriptor};
use cosets_core::{group, Caps};

const KLEIN_NORMAL_ORDER: &str = include_str!("data/klein-normal-order.txt");

#[test]
fn klein_normal_order_complex_text_is_stable() {
    let g = group("product:cyclic:2,cyclic:2").unwrap();
    let k = order_complex(
        &cosets_of_family(&family_normal_proper(&g).unwrap()),
        Caps::default().simplices,
    )
    .unwrap();
    assert_eq!(k.to_text(), KLEIN_NORMAL_ORDER);
}

#[test]
fn golden_text_round_trips() {
    let k = SimplicialComplex::from_text(KLEIN_NORMAL_ORDER).unwrap();
    assert_eq!(k.f_vector(), vec![10, 12]);
    assert_eq!(k.to_text(), KLEIN_NORMAL_ORDER);
    let h = homology(&k).unwrap();
    assert_eq!(h, WedgeDescriptor::spheres(1, 3).homology());
}

#[test]
fn elementary_abelian_rank_three_wedge() {
    // 7 suspended copies of the rank-two wedge of 3 circles
    let g = group("product:cyclic:2,cyclic:2,cyclic:2").unwrap();
    let (desc, trace) = predict_normal_wedge(&g).unwrap();
    assert_eq!(desc, WedgeDescriptor::spheres(2, 21));
    assert_eq!(trace.replay(), desc);
}
