//! Full single-projection pipeline on the smallest realization where the
//! two-vertex system is nonempty: the quadric `su, sv, tu, tv` with one fiber.

use cremona_core::exact::BiForm;
use cremona_core::random::{rng_for, DEFAULT_HEIGHT};
use cremona_core::rectify::{stage_from_lambda, RectifyConfig, SearchOutcome};
use cremona_core::surfaces::{LambdaRealization, ParamSurface};

fn toy(seed: u64) -> (ParamSurface, LambdaRealization) {
    let q = ParamSurface::parse(&["s*u", "s*v", "t*u", "t*v"]).unwrap();
    let mut rng = rng_for(seed, "toy");
    let gamma = BiForm::random(1, 1, &mut rng, DEFAULT_HEIGHT);
    let m = BiForm::random(0, 1, &mut rng, DEFAULT_HEIGHT);
    let fiber = BiForm::random(0, 1, &mut rng, DEFAULT_HEIGHT);
    let lam = LambdaRealization::assemble(q.clone(), gamma, m, vec![fiber], seed).unwrap();
    (q, lam)
}

#[test]
fn quadric_stage_finds_quadric_monoid_and_projects() {
    for seed in 0..3 {
        let (q, lam) = toy(seed);
        assert_eq!(lam.expected_degree(), 3);
        let cfg = RectifyConfig { seed, d_max: 3, ..RectifyConfig::default() };
        let mut log = Vec::new();
        let stage = stage_from_lambda(&q, &lam, &cfg, seed, (0, 0), &mut log).unwrap().expect("stage");
        assert_eq!(stage.d, 2);
        assert_eq!(log.last().unwrap().outcome, SearchOutcome::Found);
        assert_eq!(log.last().unwrap().system_dim, Some(1));
        assert_eq!(stage.map.degrees(), (2, 2));
        assert_eq!(stage.realization.len(), 4);
        // the stage map carries the quadric onto the projected realization
        let image = stage.map.apply_to_surface(&q, seed).unwrap();
        let (f, g) = (image.forms(), stage.surface.forms());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(f[i].mul(&g[j]), f[j].mul(&g[i]));
            }
        }
        assert_eq!(stage.surface.image_degree(seed).unwrap(), 3);
    }
}
