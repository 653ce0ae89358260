use perclab::env::{last_passage_time, ClockArray, Mode};
use perclab::rsk::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rows(t: &Tableau) -> Vec<Vec<u32>> {
    t.rows().to_vec()
}

fn random_array(rng: &mut ChaCha8Rng, n: usize, blocks: &[usize], max: u64) -> ClockArray {
    let w: usize = blocks.iter().sum();
    let values = (0..n * w).map(|_| rng.gen_range(0..=max) as f64).collect();
    ClockArray::new(n, blocks.to_vec(), values, Mode::Geometric).unwrap()
}

#[test]
fn insertion_examples() {
    let (t, path) = row_insert(&Tableau::empty(), 1).unwrap();
    assert_eq!(rows(&t), vec![vec![1]]);
    assert_eq!(path, vec![PathStep { row: 1, col: 1, label: 1 }]);

    let two = Tableau::from_rows(vec![vec![2]]).unwrap();
    let (t, path) = row_insert(&two, 1).unwrap();
    assert_eq!(rows(&t), vec![vec![1], vec![2]]);
    assert_eq!(path.len(), 2);

    let one = Tableau::from_rows(vec![vec![1]]).unwrap();
    let (t, path) = row_insert(&one, 2).unwrap();
    assert_eq!(rows(&t), vec![vec![1, 2]]);
    assert_eq!(path, vec![PathStep { row: 1, col: 2, label: 2 }]);

    let skew = Tableau::new("1".parse().unwrap(), vec![vec![], vec![1]]).unwrap();
    assert!(row_insert(&skew, 1).is_err());
}

#[test]
fn bounded_insert_examples() {
    let t = Tableau::from_rows(vec![vec![1, 3]]).unwrap();
    assert_eq!(bounded_insert(&t, 5, 4).unwrap(), t);
    assert_eq!(bounded_insert(&t, 2, 4).unwrap(), row_insert(&t, 2).unwrap().0);
}

#[test]
fn bounded_insertion_equals_erased_full_insertion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let len = rng.gen_range(0..30);
        let word: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=8)).collect();
        let k = rng.gen_range(1..=8);
        let mut full = Tableau::empty();
        let mut bounded = Tableau::empty();
        for &v in &word {
            full = row_insert(&full, v).unwrap().0;
            bounded = bounded_insert(&bounded, v, k).unwrap();
        }
        assert_eq!(bounded, erase_above(&full, k), "word {word:?}, k {k}");
    }
}

#[test]
fn correspondence_examples() {
    let (p, q) = rsk_correspondence(&ClockArray::from_int_rows(&[vec![2]]).unwrap()).unwrap();
    assert_eq!(rows(&p), vec![vec![1, 1]]);
    assert_eq!(rows(&q), vec![vec![1, 1]]);
    assert_eq!(p.shape().to_string(), "2");

    let (p, q) = rsk_correspondence(&ClockArray::from_int_rows(&[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
    assert_eq!(rows(&p), vec![vec![1], vec![2]]);
    assert_eq!(rows(&q), vec![vec![1], vec![2]]);
    assert_eq!(p.shape().to_string(), "1,1");

    let (p, q) = rsk_correspondence(&ClockArray::from_int_rows(&[vec![0, 0], vec![0, 0]]).unwrap()).unwrap();
    assert!(p.is_empty() && q.is_empty());

    let real = ClockArray::from_real_rows(&[vec![0.5]]).unwrap();
    assert!(rsk_correspondence(&real).is_err());
}

#[test]
fn erase_examples() {
    let t = Tableau::from_rows(vec![vec![1, 2]]).unwrap();
    assert_eq!(erase_above(&t, 2), t);
    assert_eq!(rows(&erase_above(&t, 1)), vec![vec![1]]);
}

#[test]
fn erase_keeps_tableaux_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let mut t = Tableau::empty();
        for _ in 0..rng.gen_range(0..25) {
            t = row_insert(&t, rng.gen_range(1..=9)).unwrap().0;
        }
        let k = rng.gen_range(1..=9);
        let e = erase_above(&t, k);
        let reparsed: Tableau = e.to_string().parse().unwrap();
        assert_eq!(reparsed, e);
        assert!(e.max_label().is_none_or(|m| m <= k));
        assert!(t.shape().contains(&e.shape()));
    }
}

#[test]
fn restriction_examples() {
    let zero = ClockArray::new(2, vec![2, 2], vec![0.0; 8], Mode::Geometric).unwrap();
    assert!(restriction_commutes_check(&zero, 1).unwrap());
    assert!(restriction_commutes_check(&zero, 2).is_err());

    let mut single = zero.clone();
    single.set(1, 3, 1.0).unwrap();
    let (p1, _) = rsk_correspondence(&single.prefix(1).unwrap()).unwrap();
    let (p2, _) = rsk_correspondence(&single).unwrap();
    assert!(p1.is_empty());
    assert!(erase_above(&p2, 2).is_empty());
    assert!(restriction_commutes_check(&single, 1).unwrap());
}

#[test]
fn restriction_commutes_on_random_arrays() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let blocks = [rng.gen_range(1..=3), rng.gen_range(1..=3)];
        let a = random_array(&mut rng, n, &blocks, 3);
        assert!(restriction_commutes_check(&a, 1).unwrap());
    }
}

#[test]
fn lambda1_examples() {
    assert!(lambda1_equals_lpp_check(&ClockArray::from_int_rows(&[vec![2]]).unwrap()).unwrap());
    assert!(lambda1_equals_lpp_check(&ClockArray::from_int_rows(&[vec![1, 1]]).unwrap()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let a = random_array(&mut rng, 3, &[5], 4);
        assert!(lambda1_equals_lpp_check(&a).unwrap());
    }
}

#[test]
fn tableau_text_round_trip() {
    let t = Tableau::new("2,1".parse().unwrap(), vec![vec![1, 2], vec![1], vec![3]]).unwrap();
    let text = t.to_string();
    assert_eq!(text, ". . 1 2\n. 1\n3\n");
    assert_eq!(text.parse::<Tableau>().unwrap(), t);
    assert!("2 1\n".parse::<Tableau>().is_err());
    assert!("1\n1\n".parse::<Tableau>().is_err());
    assert!("1 .\n".parse::<Tableau>().is_err());
    assert!("1\n. 2 3\n".parse::<Tableau>().is_err());
}

proptest! {
    #[test]
    fn rsk_contracts(n in 1usize..4, w in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_array(&mut rng, n, &[w], 3);
        let (p, q) = rsk_correspondence(&a).unwrap();
        prop_assert_eq!(p.shape(), q.shape());
        let col: Vec<u64> = (0..w).map(|j| (0..n).map(|i| a.get_int(i, j)).sum()).collect();
        let row: Vec<u64> = (0..n).map(|i| (0..w).map(|j| a.get_int(i, j)).sum()).collect();
        prop_assert_eq!(p.type_vector(w), col);
        prop_assert_eq!(q.type_vector(n), row);
        prop_assert_eq!(p.shape().get(0) as f64, last_passage_time(&a).unwrap());
        // Q is a valid tableau
        prop_assert_eq!(q.to_string().parse::<Tableau>().unwrap(), q);
    }

    #[test]
    fn insertion_path_increases(word in proptest::collection::vec(1u32..7, 0..30), v in 1u32..7) {
        let mut t = Tableau::empty();
        for x in word {
            t = row_insert(&t, x).unwrap().0;
        }
        let (_, path) = row_insert(&t, v).unwrap();
        prop_assert!(path.windows(2).all(|w| w[0].label < w[1].label && w[1].row == w[0].row + 1));
    }

    #[test]
    fn erase_composes(word in proptest::collection::vec(1u32..9, 0..30), k in 1u32..9, k2 in 1u32..9) {
        let mut t = Tableau::empty();
        for x in word {
            t = row_insert(&t, x).unwrap().0;
        }
        prop_assert_eq!(erase_above(&erase_above(&t, k), k2), erase_above(&t, k.min(k2)));
    }

    #[test]
    fn partition_round_trip(mut parts in proptest::collection::vec(0u64..20, 0..8)) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let p = Partition::new(parts).unwrap();
        prop_assert_eq!(p.to_string().parse::<Partition>().unwrap(), p);
    }
}
