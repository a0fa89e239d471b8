//! Acceptance gate: ten numbered criteria, one test each.  Every test ends
//! by printing a single `criterion N: pass` line (visible with
//! `cargo test --test acceptance -- --nocapture`); a failed assertion in a
//! test is that criterion's fail line.

use podec::cone::{dot, enumerate_faces};
use podec::downset::{fixture_e1, fixture_e2, orthant_faces, IntDownset};
use podec::geometry::{mgon_cone, piece_member, GeneralPiece};
use podec::linalg::{rat, span_eq, span_intersect, Mat, Rat};
use podec::module::{
    classify_element, downset_module, is_coprimary_module, primary_decomposition_module,
    realize, GridModule, Submodule,
};
use podec::oracle::{
    self, checked_tabulation, from_downset, from_region, GridBox, GridSet,
};
use podec::region::Region;
use podec::sample::{random_downset, random_hull, random_module, rng};
use podec::ConePresentation;
use rand::Rng;
use std::collections::BTreeSet;
use std::time::Instant;

fn chi(ids: &[usize]) -> BTreeSet<usize> {
    ids.iter().cloned().collect()
}

fn report(n: usize, what: &str) {
    println!("criterion {n}: pass - {what}");
}

/// Window that clears every apex of `d` by one in each direction.
fn window(d: &IntDownset, lo: i64) -> GridBox {
    oracle::margin_box(d, vec![lo; d.rank()], 1)
}

#[test]
fn criterion_01_worked_example_e1() {
    let start = Instant::now();
    let d = fixture_e1();
    let comps = d.canonical_decomposition().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0].0, chi(&[]));
    assert_eq!(comps[1].0, chi(&[1]));
    // The 0-face component is the box below (1, 0); the y-face component is
    // the half-plane x <= 0.
    let grid = GridBox::new(vec![-4, -4], vec![4, 4]).unwrap();
    let expected0 = GridSet::from_fn(grid.clone(), |q| q[0] <= 1 && q[1] <= 0);
    let expected1 = GridSet::from_fn(grid.clone(), |q| q[0] <= 0);
    assert_eq!(from_downset(&comps[0].1, &grid).first_mismatch(&expected0), None);
    assert_eq!(from_downset(&comps[1].1, &grid).first_mismatch(&expected1), None);
    // Pointwise agreement with the grid oracle's own decomposition.
    let set = checked_tabulation(&d, &grid, 1).unwrap();
    let oracle_comps = oracle::grid_canonical_decomposition(&set, 2);
    assert_eq!(oracle_comps.len(), comps.len());
    for ((tau_s, comp), (tau_o, comp_o)) in comps.iter().zip(&oracle_comps) {
        assert_eq!(tau_s, tau_o);
        assert_eq!(from_downset(comp, &grid).first_mismatch(comp_o), None);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(1, "E1 decomposes into its y-face and 0-face components, oracle-checked");
}

#[test]
fn criterion_02_worked_example_e2() {
    let d = fixture_e2();
    let comps = d.canonical_decomposition().unwrap();
    let faces: Vec<BTreeSet<usize>> = comps.iter().map(|(t, _)| t.clone()).collect();
    assert_eq!(faces, vec![chi(&[]), chi(&[0]), chi(&[1])]);
    let pruned = d.prune_redundant(&comps).unwrap();
    assert_eq!(pruned.len(), comps.len(), "no component is redundant");
    let mut union = Region::empty(2);
    for (_, c) in &comps {
        union = union.union(&c.to_region()).unwrap();
    }
    assert!(union.equals(&d.to_region()).unwrap());
    report(2, "E2 has exactly the x-, y- and 0-face components and none is redundant");
}

#[test]
fn criterion_03_downset_property_suite() {
    let start = Instant::now();
    let mut r = rng(101);
    for i in 0..200 {
        let n = 1 + i % 3;
        let d = random_downset(&mut r, n, 5, 3);
        let grid = window(&d, -6);
        let set = checked_tabulation(&d, &grid, 1).unwrap();
        // D is the union of its local supports over all faces.
        let mut union = Region::empty(n);
        for tau in orthant_faces(n) {
            union = union.union(&d.local_support(&tau).unwrap()).unwrap();
        }
        assert!(union.equals(&d.to_region()).unwrap(), "instance {i}: {d:?}");
        // Symbolic operations match the grid oracle on every face.
        for tau in orthant_faces(n) {
            let loc = from_downset(&d.localize(&tau).unwrap(), &grid);
            assert_eq!(loc.first_mismatch(&oracle::grid_localize(&set, &tau)), None);
            let gsup = from_region(&d.global_support(&tau).unwrap(), &grid);
            assert_eq!(
                gsup.first_mismatch(&oracle::grid_global_support(&set, n, &tau)),
                None
            );
            let lsup = from_region(&d.local_support(&tau).unwrap(), &grid);
            assert_eq!(
                lsup.first_mismatch(&oracle::grid_local_support(&set, n, &tau)),
                None
            );
            let comp = from_downset(&d.primary_component(&tau).unwrap(), &grid);
            assert_eq!(
                comp.first_mismatch(&oracle::grid_primary_component(&set, n, &tau)),
                None
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    report(3, "200 random downsets: local supports cover D and all ops match the oracle");
}

#[test]
fn criterion_04_supports_are_disjoint() {
    let mut r = rng(101);
    for i in 0..200 {
        let n = 1 + i % 3;
        let d = random_downset(&mut r, n, 5, 3);
        let faces = orthant_faces(n);
        let parts: Vec<Region<i64>> = faces
            .iter()
            .map(|tau| {
                d.global_support(tau)
                    .unwrap()
                    .intersect(&d.localize(tau).unwrap().to_region())
                    .unwrap()
            })
            .collect();
        let whole = d.to_region();
        for (a, part) in parts.iter().enumerate() {
            assert!(part.subset_of(&whole).unwrap(), "instance {i} face {:?}", faces[a]);
            for part2 in parts.iter().skip(a + 1) {
                assert!(
                    part.intersect(part2).unwrap().is_empty(),
                    "instance {i}: overlap between faces"
                );
            }
        }
    }
    report(4, "200 random downsets: per-face supports are pairwise disjoint inside D");
}

#[test]
fn criterion_05_support_commutes_with_localization() {
    let start = Instant::now();
    let grid = GridBox::new(vec![-1, -1], vec![2, 2]).unwrap();
    let mut r = rng(31);
    for _ in 0..100 {
        let m = random_module(&mut r, 2, &grid);
        for tau in orthant_faces(2) {
            let (loc, _) = m.localize(&tau).unwrap();
            for tau2 in orthant_faces(2) {
                let lhs_global = m.global_support(&tau2).unwrap();
                let rhs = loc.global_support(&tau2).unwrap();
                for q in grid.points() {
                    let idx = grid.index(&q).unwrap();
                    let cidx = grid.index(&m.clamp(&q, &tau)).unwrap();
                    assert!(span_eq(&lhs_global.spaces[cidx], &rhs.spaces[idx]));
                    if !tau.is_subset(&tau2) {
                        assert_eq!(rhs.spaces[idx].column_space_basis().cols(), 0);
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    report(5, "100 random modules: support commutes with localization degreewise");
}

/// A random transition-closed family of subspaces of `m`.
fn random_submodule(r: &mut rand_chacha::ChaCha8Rng, m: &GridModule) -> Submodule {
    let grid = m.grid().clone();
    let mut spaces: Vec<Mat> = vec![Mat::zeros(0, 0); grid.len()];
    for q in grid.points() {
        let idx = grid.index(&q).unwrap();
        let d = m.dims()[idx];
        let mut cols: Vec<Vec<Rat>> = Vec::new();
        for i in 0..grid.rank() {
            if q[i] == grid.lo[i] {
                continue;
            }
            let mut down = q.clone();
            down[i] -= 1;
            let prev = grid.index(&down).unwrap();
            let pushed = m.push(&down, &q).unwrap().mul(&spaces[prev]);
            for c in 0..pushed.cols() {
                cols.push(pushed.col(c));
            }
        }
        if d > 0 && r.gen_bool(0.3) {
            cols.push((0..d).map(|_| rat(r.gen_range(-2i64..=2))).collect());
        }
        spaces[idx] = Mat::from_cols(d, cols).column_space_basis();
    }
    Submodule { spaces }
}

#[test]
fn criterion_06_support_is_left_exact() {
    let grid = GridBox::new(vec![-1, -1], vec![2, 2]).unwrap();
    let mut r = rng(57);
    for _ in 0..100 {
        let m = random_module(&mut r, 2, &grid);
        let sub = random_submodule(&mut r, &m);
        let n = m.submodule_to_module(&sub).unwrap();
        for tau in orthant_faces(2) {
            let gamma_m = m.global_support(&tau).unwrap();
            let gamma_n = n.global_support(&tau).unwrap();
            for q in grid.points() {
                let idx = grid.index(&q).unwrap();
                let lhs = sub.spaces[idx].mul(&gamma_n.spaces[idx]);
                let rhs = span_intersect(&sub.spaces[idx], &gamma_m.spaces[idx]);
                assert!(span_eq(&lhs, &rhs), "{q:?} at {tau:?}");
            }
        }
    }
    report(6, "100 random submodule inclusions: support of N equals N meet support of M");
}

#[test]
fn criterion_07_module_decomposition_is_sound() {
    let grid = GridBox::new(vec![-1, -1], vec![2, 2]).unwrap();
    let mut r = rng(13);
    let mut done = 0;
    while done < 50 {
        let h = random_hull(&mut r, 2, &grid);
        if h.hull.len() > 2 || h.generators.len() > 3 {
            continue;
        }
        let rm = realize(&h).unwrap();
        let dec = primary_decomposition_module(&rm).unwrap();
        assert!(
            dec.certificate.iter().all(|&d| d == 0),
            "kernel intersection nonzero for {:?}",
            h.hull
        );
        for comp in &dec.components {
            assert_eq!(
                is_coprimary_module(&comp.quotient, &comp.face, 16),
                Ok(true),
                "face {:?} of hull {:?}",
                comp.face,
                h.hull
            );
        }
        done += 1;
    }
    report(7, "50 random hull modules: injective into coprimary sum, components coprimary");
}

fn divides_coprimary(m: &GridModule, q: &[i64], v: &[Rat], face: &BTreeSet<usize>) -> bool {
    let grid = m.grid().clone();
    for q2 in grid.points() {
        if !q.iter().zip(&q2).all(|(a, b)| a <= b) {
            continue;
        }
        let image = m.push(q, &q2).unwrap().mul_vec(v);
        if image.iter().all(num_traits::Zero::is_zero) {
            continue;
        }
        if classify_element(m, &q2, &image, face).unwrap().coprimary {
            return true;
        }
    }
    false
}

#[test]
fn criterion_08_elementary_coprimary() {
    let grid = GridBox::new(vec![-3, -3], vec![3, 3]).unwrap();
    let mut r = rng(5);
    for fixture in [fixture_e1(), fixture_e2()] {
        for (face, comp) in fixture.canonical_decomposition().unwrap() {
            let m = downset_module(&comp, &grid).unwrap();
            for q in grid.points() {
                if m.dim_at(&q).unwrap() == 0 {
                    continue;
                }
                // The basis vector, then twenty random nonzero vectors.
                let mut vectors = vec![vec![rat(1)]];
                for _ in 0..20 {
                    vectors.push(vec![rat(r.gen_range(1i64..=20))]);
                }
                for v in vectors {
                    assert!(divides_coprimary(&m, &q, &v, &face), "{q:?} at {face:?}");
                }
            }
        }
    }
    // k[E2] itself is coprimary for no face of the orthant; the budget must
    // cover all 49 representative degrees of the trivial face.
    let m = downset_module(&fixture_e2(), &grid).unwrap();
    for face in orthant_faces(2) {
        assert_eq!(is_coprimary_module(&m, &face, 49), Ok(false), "face {face:?}");
    }
    report(8, "E1/E2 components: every element divides a coprimary one; k[E2] is not coprimary");
}

#[test]
fn criterion_09_cone_fixtures() {
    let orthant = enumerate_faces(&ConePresentation::orthant_int(2)).unwrap();
    assert_eq!(orthant.faces.len(), 4);
    let mut r = rng(77);
    let mut face_counts = Vec::new();
    for m in [3usize, 4, 6] {
        let cone = mgon_cone(m).unwrap();
        let lattice = enumerate_faces(&cone).unwrap();
        assert_eq!(lattice.faces.len(), 2 * m + 2, "m-gon cone with m = {m}");
        face_counts.push((m, lattice.faces.len(), cone.halfspaces().len()));
        let halfspaces = cone.halfspaces();
        for _ in 0..100 {
            let q: Vec<i64> = (0..3).map(|_| r.gen_range(-5i64..=5)).collect();
            let q2: Vec<i64> = (0..3).map(|_| r.gen_range(-5i64..=5)).collect();
            // leq against the direct halfspace evaluation.
            let diff: Vec<i64> = q2.iter().zip(&q).map(|(a, b)| a - b).collect();
            let direct = halfspaces.iter().all(|h| dot(h, &diff) >= 0);
            assert_eq!(cone.leq(&q, &q2).unwrap(), direct);
            // piece_member (a feasibility solve) against the closed form:
            // q in a + tau - Q+ iff every halfspace vanishing on tau has
            // h.(q - a) <= 0.
            let face_id = r.gen_range(0..lattice.faces.len());
            let apex: Vec<i64> = (0..3).map(|_| r.gen_range(-3i64..=3)).collect();
            let piece = GeneralPiece { apex: apex.clone(), face_id };
            let shifted: Vec<i64> = q.iter().zip(&apex).map(|(a, b)| a - b).collect();
            let expected = halfspaces
                .iter()
                .enumerate()
                .filter(|(j, _)| lattice.faces[face_id].supporting_normals.contains(j))
                .all(|(_, h)| dot(h, &shifted) <= 0);
            assert_eq!(
                piece_member(&lattice, &piece, &q).unwrap(),
                expected,
                "m {m} face {face_id} apex {apex:?} q {q:?}"
            );
        }
    }
    // Documentation of how decomposition data grows with m: the face count
    // is 2m+2 and the facet count is m, both strictly increasing.
    for w in face_counts.windows(2) {
        assert!(w[1].1 > w[0].1 && w[1].2 > w[0].2, "growth: {face_counts:?}");
    }
    println!("m-gon growth (m, faces, facets): {face_counts:?}");
    report(9, "orthant and m-gon face counts, leq and piece membership vs direct solves");
}

#[test]
fn criterion_10_cli_golden_files() {
    // The byte-level comparisons live in the CLI crate's test suite
    // (cli_golden.rs); here the committed golden decompositions are checked
    // against this crate's own computations so the two suites cannot drift.
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../podec-cli/tests/golden");
    for (name, d) in [("E1", fixture_e1()), ("E2", fixture_e2())] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.decompose.json")))
            .expect("golden file committed");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let comps = d.canonical_decomposition().unwrap();
        let got = v["components"].as_array().unwrap();
        assert_eq!(got.len(), comps.len(), "{name}");
        for (json_comp, (face, comp)) in got.iter().zip(&comps) {
            let jface: Vec<usize> = json_comp["face"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap() as usize)
                .collect();
            assert_eq!(&jface.iter().cloned().collect::<BTreeSet<_>>(), face);
            assert_eq!(
                json_comp["pieces"].as_array().unwrap().len(),
                comp.pieces().len(),
                "{name} at {face:?}"
            );
        }
    }
    let svg = std::fs::read_to_string(dir.join("hyperbola20.svg")).unwrap();
    assert_eq!(svg.matches("<g ").count(), 3, "three-panel hyperbola figure");
    report(10, "golden decompositions agree with the library; CLI bytes checked in cli_golden");
}
