//! Pushing a scroll around its Cremona orbit with random monoid maps, then
//! optionally bringing it back down to a scroll.

use crate::cremona::{cremona_from_monoid, verify_cremona, CremonaMap};
use crate::error::{Error, Result};
use crate::monoid::{monoid_basis, Monoid, Vertex};
use crate::random::{derive_seed, rng_for, DEFAULT_HEIGHT};
use crate::rectify::{rectify, RectificationTrace, RectifyConfig};
use crate::surfaces::ParamSurface;

const DRAWS: u64 = 20;

/// A verified Cremona map from a random double-vertex monoid of degree `d`.
pub fn random_monoid_map(d: u32, seed: u64) -> Result<CremonaMap> {
    let sys = monoid_basis(d, &[Vertex::P0, Vertex::P4])?;
    for k in 0..DRAWS {
        let f = sys.random_element(&mut rng_for(derive_seed(seed, "orbit-monoid", k), "draw"), DEFAULT_HEIGHT);
        let Ok(m) = Monoid::new(f, &[Vertex::P0, Vertex::P4]) else { continue };
        let Ok(map) = cremona_from_monoid(&m, derive_seed(seed, "orbit-map", k)) else { continue };
        if verify_cremona(&map, 20, derive_seed(seed, "orbit-verify", k)).passed {
            return Ok(map);
        }
    }
    Err(Error::RetriesExhausted(format!("no degree-{d} monoid map in {DRAWS} draws")))
}

#[derive(Clone, Debug)]
pub struct OrbitStep {
    pub map: CremonaMap,
    pub surface: ParamSurface,
}

#[derive(Debug)]
pub struct OrbitDemo {
    pub start: ParamSurface,
    pub steps: Vec<OrbitStep>,
    /// Outcome of rectifying the last surface, when requested.
    pub rectification: Option<Result<RectificationTrace>>,
}

impl OrbitDemo {
    pub fn end(&self) -> &ParamSurface {
        self.steps.last().map_or(&self.start, |s| &s.surface)
    }
}

/// Applies one random monoid map per entry of `degrees`, in order.
pub fn demo_orbit(start: &ParamSurface, degrees: &[u32], rectify_with: Option<&RectifyConfig>, seed: u64) -> Result<OrbitDemo> {
    if start.ambient_dim() != 3 {
        return Err(Error::Precondition("surface must lie in P^3".into()));
    }
    let mut current = start.clone();
    let mut steps = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        let map = random_monoid_map(d, derive_seed(seed, "orbit-step", i as u64))?;
        let surface = map.apply_to_surface(&current, derive_seed(seed, "orbit-apply", i as u64))?;
        current = surface.clone();
        steps.push(OrbitStep { map, surface });
    }
    let rectification = rectify_with.map(|cfg| rectify(&current, cfg));
    Ok(OrbitDemo { start: start.clone(), steps, rectification })
}
