mod common;

use acldpc::construction::{build_array_exponents, shorten, ArrayCodeSpec};
use acldpc::gf2::ExponentMatrix;
use acldpc::unwrap::{
    circulant_of_blocks_orders, terminate, to_circulant_of_blocks, unwrap_exponents, unwrap_tanner,
    Termination,
};
use common::{FIG_A, FIG_B, FIG_C, FIG_D};

fn h_prime() -> ExponentMatrix {
    build_array_exponents(&ArrayCodeSpec::proper(5, 3, 5).unwrap()).unwrap()
}

fn h_double_prime() -> ExponentMatrix {
    build_array_exponents(&ArrayCodeSpec::proper(7, 3, 5).unwrap()).unwrap()
}

#[test]
fn circulant_unwrapping_matches_figures() {
    let a = unwrap_exponents(&h_prime()).unwrap();
    let c = unwrap_exponents(&h_double_prime()).unwrap();
    assert_eq!(a.render_figure(), FIG_A);
    assert_eq!(c.render_figure(), FIG_C);
    assert_eq!((a.memory(), a.constraint_length()), (5, 25));
    assert_eq!((c.memory(), c.constraint_length()), (7, 35));
}

#[test]
fn polynomial_unwrapping_matches_figures() {
    assert_eq!(unwrap_tanner(&h_prime()).unwrap().render_figure(), FIG_B);
    assert_eq!(
        unwrap_tanner(&h_double_prime()).unwrap().render_figure(),
        FIG_D
    );
}

#[test]
fn both_unwrappings_have_the_same_rows() {
    for e in [h_prime(), h_double_prime()] {
        let mut a = unwrap_exponents(&e).unwrap().figure_rows();
        let mut b = unwrap_tanner(&e).unwrap().figure_rows();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn closed_form_blocks_for_array_codes() {
    for (q, n0, delta) in [
        (5, 5, vec![0, 1, 2]),
        (11, 8, vec![0, 3, 7]),
        (13, 13, vec![0, 1, 5, 9]),
    ] {
        let spec = ArrayCodeSpec::new(q, n0, delta.clone()).unwrap();
        let e = build_array_exponents(&spec).unwrap();
        let blocks = to_circulant_of_blocks(&e.expand(), q, delta.len(), n0).unwrap();
        for (u, b) in blocks.iter().enumerate() {
            for (l, &d) in delta.iter().enumerate() {
                for j in 0..n0 {
                    assert_eq!(b.get(l, j), j * d % q == u, "q={q} u={u} l={l} j={j}");
                }
            }
        }
    }
}

#[test]
fn permuted_expansion_is_block_circulant() {
    let e = h_double_prime();
    let (q, r0, n0) = (7, 3, 5);
    let (rows, cols) = circulant_of_blocks_orders(q, r0, n0);
    let p = e.expand().permute(&rows, &cols).unwrap();
    let block = |s: usize, t: usize| -> Vec<Vec<bool>> {
        (0..r0)
            .map(|l| (0..n0).map(|j| p.get(s * r0 + l, t * n0 + j)).collect())
            .collect()
    };
    for s in 0..q {
        for t in 0..q {
            assert_eq!(block(s, t), block(0, (t + q - s) % q));
        }
    }
}

#[test]
fn tail_biting_over_q_periods_is_the_permuted_block_code() {
    for e in [h_prime(), h_double_prime()] {
        let q = e.modulus();
        let sf = unwrap_exponents(&e).unwrap();
        let tb = terminate(&sf, q, Termination::TailBiting).unwrap();
        let (rows, cols) = circulant_of_blocks_orders(q, e.r0(), e.n0());
        assert_eq!(tb.h(), &e.expand().permute(&rows, &cols).unwrap());
    }
}

#[test]
fn zero_terminated_c1_has_sixty_thousand_bits() {
    let e = shorten(
        &build_array_exponents(&ArrayCodeSpec::proper(43, 3, 43).unwrap()).unwrap(),
        &(0..30).collect::<Vec<_>>(),
    )
    .unwrap();
    let sf = unwrap_exponents(&e).unwrap();
    let tc = terminate(&sf, 2000, Termination::Zero).unwrap();
    assert_eq!(tc.n(), 60000);
    assert_eq!(tc.h().rows(), (2000 + 43 - 1) * 3);
    assert!(tc.h().col_weights().all(|w| w == 3));
    assert_eq!(tc.h().nnz(), 2000 * 30 * 3);
    // Interior checks see every column once; the first period only sees H_0.
    assert_eq!(tc.h().row(43 * 3).len(), 30);
    assert!(tc.h().row(1).len() < 30);
    assert!(tc.k() >= 60000 - tc.h().rows());
}

#[test]
fn figure_rows_transpose() {
    let sf = unwrap_exponents(&h_prime()).unwrap();
    let t = sf.render_transposed();
    assert_eq!(t.lines().count(), 5);
    assert!(t.lines().all(|l| l.split(' ').count() == 15));
    assert!(t.starts_with("1 1 1 0 0 0 0 0 0 0 0 0 0 0 0\n"));
}
