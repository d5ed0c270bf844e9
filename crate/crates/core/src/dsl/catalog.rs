use super::ast::MetricSpec;
use super::parser::parse_metric;

/// Coordinate box `[lo, hi]` per coordinate, in chart order.
pub type CoordBox = [(f64, f64); 4];

pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
    /// Sampling box used when no box is supplied.
    pub default_box: CoordBox,
}

const PI: f64 = std::f64::consts::PI;

pub const CATALOG: [CatalogEntry; 5] = [
    CatalogEntry {
        name: "minkowski_cartesian",
        source: include_str!("../../metrics/minkowski_cartesian.metric"),
        default_box: [(-1.0, 1.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
    },
    CatalogEntry {
        name: "minkowski_spherical",
        source: include_str!("../../metrics/minkowski_spherical.metric"),
        default_box: [(-1.0, 1.0), (0.5, 5.0), (0.2, PI - 0.2), (0.0, 2.0 * PI)],
    },
    CatalogEntry {
        name: "schwarzschild_standard",
        source: include_str!("../../metrics/schwarzschild_standard.metric"),
        default_box: [(0.0, 1.0), (3.0, 30.0), (0.3, PI - 0.3), (0.0, 2.0 * PI)],
    },
    CatalogEntry {
        name: "schwarzschild_isotropic",
        source: include_str!("../../metrics/schwarzschild_isotropic.metric"),
        default_box: [(0.0, 1.0), (2.0, 20.0), (2.0, 20.0), (2.0, 20.0)],
    },
    CatalogEntry {
        name: "flrw",
        source: include_str!("../../metrics/flrw.metric"),
        default_box: [(0.5, 2.0), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)],
    },
];

pub fn builtin_catalog() -> Vec<MetricSpec> {
    CATALOG
        .iter()
        .map(|e| parse_metric(e.source).expect("catalog metrics parse"))
        .collect()
}

pub fn lookup(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Parses and compiles a catalog metric by name.
pub fn compiled(name: &str) -> Option<super::eval::CompiledMetric> {
    lookup(name).map(|e| super::eval::CompiledMetric::new(parse_metric(e.source).expect("catalog metrics parse")))
}
