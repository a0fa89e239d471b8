//! Random-instance validation of the general-cone localization formula and
//! the grid supports against a definition-chasing oracle.
//!
//! The oracle never uses the piece-filter formula: a point belongs to the
//! localization along a face iff pushing it forever along an interior
//! direction of the face stays inside the union.  Because the union is a
//! downset and the push direction is in the cone, a point survives forever
//! iff one piece contains it and has the direction in its recession cone,
//! so the oracle is exact without any truncation depth.

use podec::cone::{enumerate_faces, ConePresentation, FaceLattice};
use podec::geometry::{
    grid_global_support_general, grid_local_support_general, interior_point,
    localize_general, piece_member, recession_contains, tabulate, GeneralPiece,
};
use podec::oracle::{GridBox, GridSet};
use podec::sample::rng;
use rand::Rng;

fn lattices() -> Vec<(FaceLattice, GridBox)> {
    let acute =
        ConePresentation::cone_from_generators(2, vec![vec![2, 1], vec![1, 2]]).unwrap();
    let obtuse =
        ConePresentation::cone_from_generators(2, vec![vec![1, 0], vec![-1, 2]]).unwrap();
    let square = ConePresentation::cone_from_generators(
        3,
        vec![vec![1, 1, 1], vec![-1, 1, 1], vec![-1, -1, 1], vec![1, -1, 1]],
    )
    .unwrap();
    let g2 = GridBox::new(vec![-5, -5], vec![5, 5]).unwrap();
    let g3 = GridBox::new(vec![-4, -4, -4], vec![4, 4, 4]).unwrap();
    vec![
        (enumerate_faces(&acute).unwrap(), g2.clone()),
        (enumerate_faces(&obtuse).unwrap(), g2),
        (enumerate_faces(&square).unwrap(), g3),
    ]
}

fn random_pieces(
    r: &mut rand_chacha::ChaCha8Rng,
    lattice: &FaceLattice,
) -> Vec<GeneralPiece> {
    let n = lattice.cone.rank();
    let count = r.gen_range(1..=4);
    (0..count)
        .map(|_| GeneralPiece {
            apex: (0..n).map(|_| r.gen_range(-2i64..=2)).collect(),
            face_id: r.gen_range(0..lattice.faces.len()),
        })
        .collect()
}

/// Membership table of each piece, so the oracle runs on bit lookups.
fn piece_tables(
    lattice: &FaceLattice,
    pieces: &[GeneralPiece],
    grid: &GridBox,
) -> Vec<GridSet> {
    pieces
        .iter()
        .map(|p| {
            let mut s = GridSet::empty(grid.clone());
            for q in grid.points() {
                let m = piece_member(lattice, p, &q).unwrap();
                s.set(&q, m);
            }
            s
        })
        .collect()
}

#[test]
fn localization_matches_push_oracle() {
    let mut r = rng(20260823);
    for (lattice, grid) in lattices() {
        let instances = if lattice.cone.rank() == 2 { 40 } else { 20 };
        for _ in 0..instances {
            let pieces = random_pieces(&mut r, &lattice);
            let tables = piece_tables(&lattice, &pieces, &grid);
            for tau in 0..lattice.faces.len() {
                let g = interior_point(&lattice, tau).unwrap();
                let recedes: Vec<bool> = pieces
                    .iter()
                    .map(|p| recession_contains(&lattice, p.face_id, &g).unwrap())
                    .collect();
                let loc = localize_general(&lattice, &pieces, tau).unwrap();
                let symbolic = tabulate(&lattice, &loc, &grid).unwrap();
                for q in grid.points() {
                    let oracle = tables
                        .iter()
                        .zip(&recedes)
                        .any(|(t, &rec)| rec && t.member(&q));
                    assert_eq!(
                        symbolic.member(&q),
                        oracle,
                        "face {tau}, point {q:?}, pieces {pieces:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn grid_supports_match_definition_chasing() {
    let mut r = rng(777);
    for (lattice, grid) in lattices() {
        let instances = if lattice.cone.rank() == 2 { 15 } else { 6 };
        for _ in 0..instances {
            let pieces = random_pieces(&mut r, &lattice);
            let tables = piece_tables(&lattice, &pieces, &grid);
            let nfaces = lattice.faces.len();
            // Oracle localization table per face, straight from the
            // recession criterion.
            let oracle_loc: Vec<GridSet> = (0..nfaces)
                .map(|sigma| {
                    let g = interior_point(&lattice, sigma).unwrap();
                    let mut s = GridSet::empty(grid.clone());
                    for q in grid.points() {
                        let v = pieces.iter().zip(&tables).any(|(p, t)| {
                            t.member(&q)
                                && recession_contains(&lattice, p.face_id, &g).unwrap()
                        });
                        s.set(&q, v);
                    }
                    s
                })
                .collect();
            for tau in 0..nfaces {
                // Global support oracle: in D but in no localization at a
                // face not below tau.
                let mut expected = oracle_loc[lattice.trivial_face()].clone();
                for sigma in 0..nfaces {
                    if !lattice.face_leq(sigma, tau) {
                        expected = expected.difference(&oracle_loc[sigma]);
                    }
                }
                let got =
                    grid_global_support_general(&lattice, &pieces, tau, &grid, 1);
                // Skip instances whose apexes touch the grid margin.
                let Ok(got) = got else { continue };
                assert_eq!(got.first_mismatch(&expected), None, "global at {tau}");

                // Local support oracle: same computation on the localized
                // union.
                let loc_pieces = localize_general(&lattice, &pieces, tau).unwrap();
                let loc_tables = piece_tables(&lattice, &loc_pieces, &grid);
                let mut local_expected = GridSet::empty(grid.clone());
                for q in grid.points() {
                    let v = loc_tables.iter().any(|t| t.member(&q));
                    local_expected.set(&q, v);
                }
                for sigma in 0..nfaces {
                    if lattice.face_leq(sigma, tau) {
                        continue;
                    }
                    let g = interior_point(&lattice, sigma).unwrap();
                    let mut s = GridSet::empty(grid.clone());
                    for q in grid.points() {
                        let v = loc_pieces.iter().zip(&loc_tables).any(|(p, t)| {
                            t.member(&q)
                                && recession_contains(&lattice, p.face_id, &g).unwrap()
                        });
                        s.set(&q, v);
                    }
                    local_expected = local_expected.difference(&s);
                }
                let got =
                    grid_local_support_general(&lattice, &pieces, tau, &grid, 1)
                        .unwrap();
                assert_eq!(
                    got.first_mismatch(&local_expected),
                    None,
                    "local at {tau}"
                );
            }
        }
    }
}
