use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_betti::fuzz::random_instance;
use twisted_betti::homology::h1;
use twisted_betti::oracle::oracle_h1_along;
use twisted_betti::Cyclo;

#[test]
fn chamber_engine_matches_fox_calculus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut nonzero = 0;
    while checked < 60 {
        let n = rng.gen_range(3..=6);
        let d = rng.gen_range(2..=6);
        let sharp = rng.gen_bool(0.3);
        let Some(inst) = random_instance(&mut rng, n, d, sharp) else { continue };
        let main = h1::<Cyclo>(&inst.arrangement, &inst.system, 0).unwrap().h1;
        for l in 0..n {
            let o = oracle_h1_along::<Cyclo>(&inst.arrangement, &inst.system, l, 7).unwrap();
            assert_eq!(main, o, "line {l}: {:?}", inst);
        }
        if main > 0 {
            nonzero += 1;
        }
        checked += 1;
    }
    assert!(nonzero > 0);
}
