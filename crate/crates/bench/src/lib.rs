//! Fixtures shared by the benchmarks under `benches/`.

use std::sync::Arc;

use anyon_core::state::{Context, Sector};
use anyon_core::{catalog, AnyonModel, BipartiteState, Charge};

pub fn fibonacci() -> Arc<AnyonModel> {
    Arc::new(catalog::fibonacci())
}

pub fn tau(model: &AnyonModel) -> Charge {
    model.charge("tau").expect("Fibonacci has tau")
}

/// Equal weight on the vacuum and `tau` sectors, rank one each.
pub fn two_sector() -> BipartiteState {
    let m = fibonacci();
    let t = tau(&m);
    let ctx = Context::mirrored(&m, vec![t, t]);
    BipartiteState::new(
        m.clone(),
        vec![
            Sector::new(m.vacuum(), 0.5, vec![1.0]),
            Sector::new(t, 0.5, vec![1.0]),
        ],
        Some(ctx),
    )
    .expect("valid fixture")
}

/// Three symbols: a rank-two vacuum sector and a rank-one `tau` sector.
pub fn mixed() -> BipartiteState {
    let m = fibonacci();
    let t = tau(&m);
    BipartiteState::new(
        m.clone(),
        vec![
            Sector::new(m.vacuum(), 0.3, vec![0.6, 0.4]),
            Sector::new(t, 0.7, vec![1.0]),
        ],
        None,
    )
    .expect("valid fixture")
}
