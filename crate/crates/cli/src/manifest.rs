//! TOML manifests: charts, structures, maps, declared frames and an
//! ordered list of checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use tsmap_core::clairaut::DeclaredFrames;
use tsmap_core::contact::ContactStructure;
use tsmap_core::geometry::{ChartManifold, Interval, VectorFieldSpec};
use tsmap_core::rmap::SmoothMapSpec;

/// Number of random points at which every metric is validated on load.
pub const VALIDATION_POINTS: usize = 50;

/// Seed used for load-time metric validation.
const VALIDATION_SEED: u64 = 0x7661_6c69;

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("manifest syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("unknown {what} `{name}` referenced by {by}")]
    Unresolved { what: &'static str, name: String, by: String },
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("{context}: {source}")]
    Geometry { context: String, source: tsmap_core::Error },
    #[error("{0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, ManifestError>;

fn geometry<T>(context: impl FnOnce() -> String, r: tsmap_core::Result<T>) -> Result<T> {
    r.map_err(|source| ManifestError::Geometry { context: context(), source })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawManifest {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub manifold: Vec<RawManifold>,
    #[serde(default)]
    pub structure: Vec<RawStructure>,
    #[serde(default)]
    pub map: Vec<RawMap>,
    #[serde(default)]
    pub frames: Vec<RawFrames>,
    #[serde(default)]
    pub check: Vec<CheckSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawManifold {
    pub name: String,
    pub coords: Vec<String>,
    #[serde(default)]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub excluded: Vec<String>,
    pub metric: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub name: String,
    pub manifold: String,
    pub psi: Vec<Vec<String>>,
    pub xi: Vec<String>,
    pub eta: Vec<String>,
    /// Declared `(α, β)` as expressions.
    #[serde(default, rename = "type")]
    pub declared_type: Option<[String; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFrames {
    pub name: String,
    pub map: String,
    pub range: Vec<Vec<String>>,
    pub rperp: Vec<Vec<String>>,
}

/// Either explicit points or a random sample of a given size.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PointsSpec {
    List(Vec<Vec<f64>>),
    Random { random: usize },
}

/// Geodesic initial data.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum StartsSpec {
    List(Vec<StartEntry>),
    Lifted { lifted: usize },
    Random { random: usize },
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StartEntry {
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
    /// `point` and `velocity` live on the domain of the map.
    #[serde(default)]
    pub lifted: bool,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    AlmostContact,
    TransSasakian,
    RiemannianMap,
    SecondFundamentalForm,
    Umbilical,
    AntiInvariant,
    Harmonic,
    MeanCurvature,
    Clairaut,
    GeodesicTheorem,
    ClairautCondition,
    RangeDichotomy,
    Integrability,
    GeodesicNorm,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::AlmostContact => "almost_contact",
            CheckKind::TransSasakian => "trans_sasakian",
            CheckKind::RiemannianMap => "riemannian_map",
            CheckKind::SecondFundamentalForm => "second_fundamental_form",
            CheckKind::Umbilical => "umbilical",
            CheckKind::AntiInvariant => "anti_invariant",
            CheckKind::Harmonic => "harmonic",
            CheckKind::MeanCurvature => "mean_curvature",
            CheckKind::Clairaut => "clairaut",
            CheckKind::GeodesicTheorem => "geodesic_theorem",
            CheckKind::ClairautCondition => "clairaut_condition",
            CheckKind::RangeDichotomy => "range_dichotomy",
            CheckKind::Integrability => "integrability",
            CheckKind::GeodesicNorm => "geodesic_norm",
        }
    }
}

/// One check invocation. Which fields are required depends on `kind`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub kind: CheckKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub structure: Option<String>,
    #[serde(default)]
    pub map: Option<String>,
    #[serde(default)]
    pub manifold: Option<String>,
    #[serde(default)]
    pub points: Option<PointsSpec>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub expect: Option<Expect>,
    /// Expected `(α, β)` as expressions over the structure chart.
    #[serde(default, rename = "type")]
    pub expected_type: Option<[String; 2]>,
    #[serde(default)]
    pub type_tol: Option<f64>,
    #[serde(default)]
    pub rank: Option<usize>,
    /// Expected spanning vectors of `ker π*`.
    #[serde(default)]
    pub kernel: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub angle_tol: Option<f64>,
    /// Domain vector fields for the second fundamental form.
    #[serde(default)]
    pub w: Option<Vec<String>>,
    #[serde(default)]
    pub z: Option<Vec<String>>,
    /// Expected codomain value of `(∇π*)(W, Z)`.
    #[serde(default)]
    pub expected: Option<Vec<String>>,
    #[serde(default)]
    pub oracle_tol: Option<f64>,
    #[serde(default)]
    pub reeb: Option<String>,
    #[serde(default)]
    pub distribution: Option<String>,
    /// `h` as an expression, or `"constant"`.
    #[serde(default)]
    pub h: Option<String>,
    #[serde(default)]
    pub frames: Option<Vec<String>>,
    #[serde(default)]
    pub starts: Option<StartsSpec>,
    #[serde(default)]
    pub def22_points: Option<PointsSpec>,
    #[serde(default)]
    pub length: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
    /// Vector fields spanning the distribution under test.
    #[serde(default)]
    pub fields: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub complement: Option<Vec<Vec<String>>>,
    /// `range` or `rperp` of a declared frame set.
    #[serde(default)]
    pub part: Option<String>,
    #[serde(default)]
    pub integrable: Option<bool>,
}

/// A resolved manifest: every reference checked, every expression parsed
/// and every metric validated.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub name: String,
    pub seed: u64,
    pub tol: f64,
    pub manifolds: BTreeMap<String, Arc<ChartManifold>>,
    pub structures: BTreeMap<String, Arc<ContactStructure>>,
    pub maps: BTreeMap<String, Arc<SmoothMapSpec>>,
    /// Declared frames by name, with the map they belong to.
    pub frames: BTreeMap<String, (String, Arc<DeclaredFrames>)>,
    pub checks: Vec<CheckSpec>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-8;

fn insert_unique<T>(map: &mut BTreeMap<String, T>, what: &'static str, name: &str, value: T) -> Result<()> {
    if map.insert(name.to_string(), value).is_some() {
        return Err(ManifestError::Duplicate { what, name: name.to_string() });
    }
    Ok(())
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, what: &'static str, name: &str, by: impl Fn() -> String) -> Result<&'a T> {
    map.get(name).ok_or_else(|| ManifestError::Unresolved { what, name: name.to_string(), by: by() })
}

impl Manifest {
    pub fn from_str(text: &str) -> Result<Self> {
        let raw: RawManifest = toml::from_str(text)?;
        Self::resolve(raw)
    }

    pub fn from_path(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io { path: path.into(), source })?;
        Self::from_str(&text)
    }

    pub fn resolve(raw: RawManifest) -> Result<Self> {
        let mut manifolds = BTreeMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        for m in &raw.manifold {
            let ctx = || format!("manifold `{}`", m.name);
            let coords: Vec<&str> = m.coords.iter().map(|s| s.as_str()).collect();
            let bounds = match &m.bounds {
                Some(b) => b.iter().map(|[lo, hi]| Interval::new(*lo, *hi)).collect(),
                None => vec![Interval::REAL_LINE; coords.len()],
            };
            let chart = geometry(ctx, ChartManifold::new(&m.name, &coords, bounds, &m.excluded, &m.metric))?;
            if chart.domain().bounds.iter().all(|b| b.lo.is_finite() && b.hi.is_finite()) {
                let points = geometry(ctx, chart.sample_points(VALIDATION_POINTS, &mut rng))?;
                geometry(ctx, chart.validate_metric(&points))?;
            }
            insert_unique(&mut manifolds, "manifold", &m.name, Arc::new(chart))?;
        }
        let mut structures = BTreeMap::new();
        for s in &raw.structure {
            let by = || format!("structure `{}`", s.name);
            let chart = lookup(&manifolds, "manifold", &s.manifold, by)?.clone();
            let declared = s.declared_type.as_ref().map(|[a, b]| (a.as_str(), b.as_str()));
            let xi: Vec<&str> = s.xi.iter().map(|x| x.as_str()).collect();
            let eta: Vec<&str> = s.eta.iter().map(|x| x.as_str()).collect();
            let psi: Vec<Vec<&str>> = s.psi.iter().map(|r| r.iter().map(|x| x.as_str()).collect()).collect();
            let st = geometry(by, ContactStructure::new(&s.name, chart, &psi, &xi, &eta, declared))?;
            insert_unique(&mut structures, "structure", &s.name, Arc::new(st))?;
        }
        let mut maps = BTreeMap::new();
        for m in &raw.map {
            let by = || format!("map `{}`", m.name);
            let dom = lookup(&manifolds, "manifold", &m.domain, by)?.clone();
            let cod = lookup(&manifolds, "manifold", &m.codomain, by)?.clone();
            let spec = geometry(by, SmoothMapSpec::new(&m.name, dom, cod, &m.components))?;
            insert_unique(&mut maps, "map", &m.name, Arc::new(spec))?;
        }
        let mut frames = BTreeMap::new();
        for f in &raw.frames {
            let by = || format!("frames `{}`", f.name);
            let map: &Arc<SmoothMapSpec> = lookup(&maps, "map", &f.map, by)?;
            let fields = |rows: &[Vec<String>]| -> Result<Vec<VectorFieldSpec>> {
                rows.iter().map(|r| geometry(by, VectorFieldSpec::new(&map.codomain, r))).collect()
            };
            let declared = DeclaredFrames { name: f.name.clone(), range: fields(&f.range)?, rperp: fields(&f.rperp)? };
            insert_unique(&mut frames, "frames", &f.name, (f.map.clone(), Arc::new(declared)))?;
        }
        let manifest = Manifest {
            name: raw.name.unwrap_or_else(|| "manifest".into()),
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            tol: raw.tol.unwrap_or(DEFAULT_TOL),
            manifolds,
            structures,
            maps,
            frames,
            checks: raw.check,
        };
        for (i, c) in manifest.checks.iter().enumerate() {
            manifest.check_references(i, c)?;
        }
        Ok(manifest)
    }

    pub fn check_label(&self, index: usize) -> String {
        let c = &self.checks[index];
        c.name.clone().unwrap_or_else(|| format!("{}#{index}", c.kind.as_str()))
    }

    fn check_references(&self, index: usize, c: &CheckSpec) -> Result<()> {
        let by = || format!("check `{}`", self.check_label(index));
        if let Some(s) = &c.structure {
            lookup(&self.structures, "structure", s, by)?;
        }
        if let Some(m) = &c.map {
            lookup(&self.maps, "map", m, by)?;
        }
        if let Some(m) = &c.manifold {
            lookup(&self.manifolds, "manifold", m, by)?;
        }
        for f in c.frames.iter().flatten() {
            let (owner, _) = lookup(&self.frames, "frames", f, by)?;
            if let Some(m) = &c.map {
                if owner != m {
                    return Err(ManifestError::Invalid(format!(
                        "frames `{f}` belong to map `{owner}`, but {} uses map `{m}`",
                        by()
                    )));
                }
            }
        }
        let need = |field: &'static str, present: bool| -> Result<()> {
            if present {
                Ok(())
            } else {
                Err(ManifestError::Invalid(format!("{} ({}) needs `{field}`", by(), c.kind.as_str())))
            }
        };
        use CheckKind::*;
        match c.kind {
            AlmostContact | TransSasakian => need("structure", c.structure.is_some())?,
            RiemannianMap | Umbilical | Harmonic | MeanCurvature => need("map", c.map.is_some())?,
            SecondFundamentalForm => {
                need("map", c.map.is_some())?;
                need("w", c.w.is_some())?;
                need("z", c.z.is_some())?;
            }
            AntiInvariant | Clairaut | GeodesicTheorem | ClairautCondition | RangeDichotomy => {
                need("map", c.map.is_some())?;
                need("structure", c.structure.is_some())?;
            }
            Integrability => {
                let framed = c.frames.as_ref().is_some_and(|f| f.len() == 1) && c.part.is_some();
                let inline = c.manifold.is_some() && c.fields.is_some() && c.complement.is_some();
                if !framed && !inline {
                    return Err(ManifestError::Invalid(format!(
                        "{} needs either `frames` (one name) with `part`, or `manifold`, `fields` and `complement`",
                        by()
                    )));
                }
            }
            GeodesicNorm => need("manifold", c.manifold.is_some())?,
        }
        if let (Some(s), Some(m)) = (&c.structure, &c.map) {
            let st = &self.structures[s];
            let mp = &self.maps[m];
            if st.manifold.name() != mp.codomain.name() {
                return Err(ManifestError::Invalid(format!(
                    "{}: structure `{s}` lives on `{}` but map `{m}` lands in `{}`",
                    by(),
                    st.manifold.name(),
                    mp.codomain.name()
                )));
            }
        }
        Ok(())
    }

    /// Points for a check on `chart`, drawn from `rng` when random.
    pub fn points(
        spec: Option<&PointsSpec>,
        default_random: usize,
        chart: &ChartManifold,
        rng: &mut ChaCha8Rng,
    ) -> tsmap_core::Result<Vec<DVector<f64>>> {
        match spec {
            Some(PointsSpec::List(list)) => Ok(list.iter().map(|p| DVector::from_column_slice(p)).collect()),
            Some(PointsSpec::Random { random }) => chart.sample_points(*random, rng),
            None => chart.sample_points(default_random, rng),
        }
    }
}
