//! Versioned JSON descriptors for surfaces, maps, monoids and traces.
//! Polynomials travel as strings in the same grammar the parsers accept.

use serde::{Deserialize, Serialize};

use crate::cremona::{CremonaMap, RationalMap};
use crate::error::{Error, Result};
use crate::exact::{BiForm, ExactMatrix, MultiPoly};
use crate::monoid::{Monoid, Vertex};
use crate::rectify::{ProjectionStage, RectificationStep, RectificationTrace, RectifyConfig, SearchEntry};
use crate::surfaces::ParamSurface;

pub const SCHEMA_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::InvalidArgument(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub schema_version: u32,
    pub ambient_dim: usize,
    pub bidegree: (u32, u32),
    pub forms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SurfaceDescriptor {
    pub fn from_surface(s: &ParamSurface) -> Self {
        SurfaceDescriptor {
            schema_version: SCHEMA_VERSION,
            ambient_dim: s.ambient_dim(),
            bidegree: s.bidegree(),
            forms: s.forms().iter().map(|f| f.to_string()).collect(),
            seed: None,
        }
    }

    pub fn to_surface(&self) -> Result<ParamSurface> {
        check_version(self.schema_version)?;
        if self.forms.len() != self.ambient_dim + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} forms for ambient dimension {}",
                self.forms.len(),
                self.ambient_dim
            )));
        }
        let (a, b) = self.bidegree;
        let forms = self.forms.iter().map(|f| BiForm::parse_with_bidegree(f, a, b)).collect::<Result<Vec<_>>>()?;
        let s = ParamSurface::new(forms)?;
        if s.bidegree() != self.bidegree {
            return Err(Error::InvalidArgument(format!(
                "forms share a common factor: reduced bidegree {:?}, declared {:?}",
                s.bidegree(),
                self.bidegree
            )));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidDescriptor {
    pub degree: u32,
    pub vertexes: Vec<Vertex>,
    /// Form in `x0..x4`.
    pub form: String,
}

impl MonoidDescriptor {
    pub fn from_monoid(m: &Monoid) -> Self {
        MonoidDescriptor { degree: m.degree(), vertexes: m.vertexes().to_vec(), form: m.form().to_string() }
    }

    pub fn to_monoid(&self) -> Result<Monoid> {
        Monoid::new(MultiPoly::parse_with_degree(&self.form, 5, self.degree)?, &self.vertexes)
    }
}

/// A Cremona map of P^3; components are forms in `x0..x3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub schema_version: u32,
    pub degree: (u32, u32),
    pub components: Vec<String>,
    pub inverse: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidDescriptor>,
}

fn map_strings(m: &RationalMap) -> Vec<String> {
    m.components().iter().map(|c| c.to_string()).collect()
}

fn parse_map(comps: &[String], degree: u32) -> Result<RationalMap> {
    let polys = comps.iter().map(|c| MultiPoly::parse_with_degree(c, 4, degree)).collect::<Result<Vec<_>>>()?;
    RationalMap::new(3, polys)
}

impl MapDescriptor {
    pub fn from_map(m: &CremonaMap) -> Self {
        MapDescriptor {
            schema_version: SCHEMA_VERSION,
            degree: m.degrees(),
            components: map_strings(&m.forward),
            inverse: map_strings(&m.inverse),
            monoid: m.source_monoid.as_ref().map(MonoidDescriptor::from_monoid),
        }
    }

    pub fn to_map(&self) -> Result<CremonaMap> {
        check_version(self.schema_version)?;
        if self.components.len() != 4 || self.inverse.len() != 4 {
            return Err(Error::InvalidArgument("a map of P^3 needs four components each way".into()));
        }
        Ok(CremonaMap {
            forward: parse_map(&self.components, self.degree.0)?,
            inverse: parse_map(&self.inverse, self.degree.1)?,
            source_monoid: self.monoid.as_ref().map(|m| m.to_monoid()).transpose()?,
        })
    }
}

/// Output of a monoid search at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindMonoidDescriptor {
    pub schema_version: u32,
    pub d: u32,
    /// Projective dimension of the two-vertex system through the surface.
    pub dim: Option<i64>,
    pub cone_dims: Option<(i64, i64)>,
    pub element: Option<String>,
    pub cone_free: bool,
}

fn matrix_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|i| m.row(i).iter().map(|c| c.to_string()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageDescriptor {
    pub beta: u32,
    pub d: u32,
    /// Coordinate change applied before the projection.
    pub change: Vec<Vec<String>>,
    pub fibers: Vec<String>,
    pub m_form: String,
    pub realization: SurfaceDescriptor,
    pub realization_degree: u32,
    pub map: MapDescriptor,
    pub surface: SurfaceDescriptor,
    pub surface_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepDescriptor {
    pub seed: u64,
    pub gamma: String,
    pub stages: Vec<StageDescriptor>,
    pub output: SurfaceDescriptor,
    pub output_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceDescriptor {
    pub schema_version: u32,
    pub config: RectifyConfig,
    pub initial: SurfaceDescriptor,
    pub initial_degree: u32,
    #[serde(rename = "final")]
    pub final_surface: SurfaceDescriptor,
    pub final_ruling_degree: u32,
    pub steps: Vec<StepDescriptor>,
    pub search_log: Vec<SearchEntry>,
}

fn stage_descriptor(s: &ProjectionStage, seed: u64) -> Result<StageDescriptor> {
    Ok(StageDescriptor {
        beta: s.beta,
        d: s.d,
        change: matrix_strings(&s.change),
        fibers: s.lambda.fibers.iter().map(|f| f.to_string()).collect(),
        m_form: s.lambda.m_form.to_string(),
        realization: SurfaceDescriptor::from_surface(&s.lambda.surface),
        realization_degree: s.lambda.degree,
        map: MapDescriptor::from_map(&s.map),
        surface: SurfaceDescriptor::from_surface(&s.surface),
        surface_degree: s.surface.image_degree(seed)?,
    })
}

fn step_descriptor(s: &RectificationStep) -> Result<StepDescriptor> {
    Ok(StepDescriptor {
        seed: s.seed,
        gamma: s.gamma.to_string(),
        stages: s.stages.iter().map(|st| stage_descriptor(st, s.seed)).collect::<Result<_>>()?,
        output: SurfaceDescriptor::from_surface(&s.output),
        output_degree: s.output.image_degree(s.seed)?,
    })
}

impl TraceDescriptor {
    pub fn from_trace(t: &RectificationTrace) -> Result<Self> {
        let mut initial = SurfaceDescriptor::from_surface(&t.initial);
        initial.seed = Some(t.config.seed);
        Ok(TraceDescriptor {
            schema_version: SCHEMA_VERSION,
            config: t.config.clone(),
            initial,
            initial_degree: t.initial.image_degree(t.config.seed)?,
            final_surface: SurfaceDescriptor::from_surface(&t.final_surface),
            final_ruling_degree: t.final_surface.ruling_degree(),
            steps: t.steps.iter().map(step_descriptor).collect::<Result<_>>()?,
            search_log: t.search_log.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::cremona_from_monoid;

    #[test]
    fn surface_roundtrip() {
        let s = ParamSurface::parse(&["s^2*u", "s^2*v", "s*t*u + t^2*v", "t^2*u"]).unwrap();
        let d = SurfaceDescriptor::from_surface(&s);
        let json = serde_json::to_string(&d).unwrap();
        let back: SurfaceDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_surface().unwrap(), s);
        let mut bad = back.clone();
        bad.schema_version = 7;
        assert!(bad.to_surface().is_err());
    }

    #[test]
    fn map_roundtrip() {
        let f = MultiPoly::parse("x0*x4 - x1*x2", 5).unwrap();
        let m = Monoid::new(f, &[Vertex::P0, Vertex::P4]).unwrap();
        let map = cremona_from_monoid(&m, 1).unwrap();
        let d = MapDescriptor::from_map(&map);
        let json = serde_json::to_string(&d).unwrap();
        let back: MapDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_map().unwrap(), map);
    }
}
