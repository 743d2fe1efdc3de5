use stringc_core::analysis::{
    all_swap, block_action, block_path_order, classify_kernel, delta, delta_vector, lcr_decompose, KernelClass, NamedForm,
};
use stringc_core::families::{instantiate_family, natural_blocks, FamilyId};
use stringc_core::{BlockSystem, IndexSet, PermGroup, Sggi};

fn setup(name: &str, n: usize, p: Option<usize>) -> (Sggi, BlockSystem) {
    let fid: FamilyId = name.parse().unwrap();
    let g = instantiate_family(fid, n, p).unwrap();
    let b = BlockSystem::new(n, natural_blocks(fid, &g).unwrap()).unwrap();
    (g.to_sggi().unwrap(), b)
}

fn l_kernel(s: &Sggi, b: &BlockSystem) -> KernelClass {
    let lcr = lcr_decompose(s, b).unwrap();
    let gens = lcr.l.indices().into_iter().map(|i| s.generators()[i].clone()).collect();
    let lg = PermGroup::new(s.degree(), gens).unwrap();
    classify_kernel(&block_action(&lg, b).unwrap(), b.num_blocks())
}

#[test]
fn two_rows_act_as_a_transposition() {
    let (s, b) = setup("T8#1", 14, None);
    assert_eq!(b.num_blocks(), 2);
    let res = block_action(&s.group(), &b).unwrap();
    assert_eq!(res.image_order, 2);
    assert_eq!(res.kernel_order, 5040);
}

#[test]
fn kernels_of_l_subgroup() {
    let (s, b) = setup("T6#17", 16, Some(2));
    let lcr = lcr_decompose(&s, &b).unwrap();
    let lg = PermGroup::new(16, lcr.l.indices().into_iter().map(|i| s.generators()[i].clone()).collect()).unwrap();
    assert_eq!(block_action(&lg, &b).unwrap().kernel_order, 2);
    assert_eq!(l_kernel(&s, &b), KernelClass::C2);
    let (s, b) = setup("T6#21", 14, None);
    assert_eq!(l_kernel(&s, &b), KernelClass::C2);
    let (s, b) = setup("T7#27", 14, Some(1));
    assert_eq!(l_kernel(&s, &b), KernelClass::C2PowMMinus1);
    let (s, b) = setup("T5#13", 14, None);
    assert_eq!(l_kernel(&s, &b), KernelClass::Trivial);
}

#[test]
fn full_kernel_is_elementary() {
    let (s, b) = setup("T6#21", 14, None);
    let res = block_action(&s.group(), &b).unwrap();
    assert_eq!(classify_kernel(&res, 7), KernelClass::C2PowM);
    assert!(s.group().contains(&all_swap(&b)));
}

#[test]
fn lcr_splits() {
    let (s, b) = setup("T8#1", 14, None);
    let lcr = lcr_decompose(&s, &b).unwrap();
    assert_eq!(lcr.l.len() + lcr.c.len() + lcr.r.len(), 7);
    assert_eq!(lcr.l.len(), 1);
    let (s, b) = setup("T5#13", 14, None);
    let lcr = lcr_decompose(&s, &b).unwrap();
    assert_eq!(lcr.l, IndexSet::from_indices(7, 1..7).unwrap());
    assert_eq!(lcr.c.len() + lcr.r.len(), 1);
    let (s, b) = setup("T4#1", 14, None);
    let lcr = lcr_decompose(&s, &b).unwrap();
    assert_eq!(lcr.c.len() + lcr.r.len(), 2);
    assert!(lcr.c.len() < 2 && lcr.l.len() < 7);
}

#[test]
fn delta_one_of_graph_21_swaps_every_pair() {
    let (s, b) = setup("T6#21", 14, None);
    // Raw images: apply ρ1 then ρ2, three times over.
    let (p, q) = (&s.generators()[1], &s.generators()[2]);
    let raw: Vec<usize> = (0..14).map(|x| (0..3).fold(x, |y, _| q.image(p.image(y)))).collect();
    for x in 0..14 {
        assert_eq!(b.block_index(raw[x]), b.block_index(x));
        assert_ne!(raw[x], x);
    }
    assert_eq!(delta(&s, 1).unwrap().images(), raw);
    let order = block_path_order(&s, &b).unwrap();
    let v = delta_vector(&s, 1, &b, &order).unwrap().unwrap();
    assert_eq!(v.named_form, NamedForm::U);
    assert_eq!(v.bits, vec![1; 7]);
}

#[test]
fn graph_25_has_one_nontrivial_delta_pair() {
    let (s, b) = setup("T7#25", 14, Some(2));
    let order = block_path_order(&s, &b).unwrap();
    let nontrivial: Vec<usize> = (1..s.rank() - 1)
        .filter(|&i| delta_vector(&s, i, &b, &order).unwrap().unwrap().named_form != NamedForm::O)
        .collect();
    assert_eq!(nontrivial, vec![2, 3]);
}
