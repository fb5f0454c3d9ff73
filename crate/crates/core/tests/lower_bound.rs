use sqchroma::coloring::{color_square_convex, verify_coloring, ColorOptions};
use sqchroma::generators::gen_lower_bound_h;
use sqchroma::oracle::{exact_stats, is_perfect_small, DEFAULT_BUDGET};
use sqchroma::{half_square, recognize_convex, square, ConvexLayout, Side};

fn closed_form(q: usize) -> (usize, usize) {
    (2 * q + 3, 5 * q / 2 + 2)
}

#[test]
fn exact_values_match_closed_forms() {
    for q in [2, 4] {
        let h = gen_lower_bound_h(q).unwrap();
        let s = exact_stats(&square(&h), DEFAULT_BUDGET).unwrap();
        assert_eq!((s.omega, s.chi), closed_form(q), "q = {q}");
        assert!(4 * s.chi + 8 >= 5 * s.omega);
    }
    assert_eq!(closed_form(2), (7, 7));
    assert_eq!(closed_form(4), (11, 12));
}

#[test]
fn stated_order_is_convex_and_coloring_fits() {
    for q in [2, 4, 6] {
        let h = gen_lower_bound_h(q).unwrap();
        let stated = ConvexLayout::from_b_order(&h, (0..h.n_b()).collect()).unwrap();
        let found = recognize_convex(&h).unwrap();
        for layout in [stated, found] {
            let r = color_square_convex(&h, &layout, &ColorOptions::default()).unwrap();
            assert_eq!(r.omega, 2 * q + 3);
            assert!(verify_coloring(&square(&h), &r.coloring));
            assert!(r.coloring.palette <= 3 * r.omega / 2);
        }
    }
}

#[test]
fn half_squares_are_perfect() {
    let h = gen_lower_bound_h(2).unwrap();
    assert!(is_perfect_small(&half_square(&h, Side::A)));
    assert!(is_perfect_small(&half_square(&h, Side::B)));
}
