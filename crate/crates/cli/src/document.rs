//! Versioned JSON documents for pairs and correspondences. Exact numbers
//! are strings.

use serde::{Deserialize, Serialize};

use logcy3::boundary::Marking;
use logcy3::exactnum::GaussianRational;
use logcy3::pair::{BlowupStep, LogCY3Pair, PairSpec};
use logcy3::toric::{Fan3, Orientation, Ray};
use logcy3::torelli::Correspondence;
use logcy3::{Error, Result};

pub const PAIR_FORMAT: &str = "logcy3-pair";
pub const CORRESPONDENCE_FORMAT: &str = "logcy3-correspondence";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub format: String,
    pub version: u32,
    pub lattice_rank: u32,
    pub rays: Vec<Ray>,
    pub cones: Vec<[usize; 3]>,
    pub orientation: Orientation,
    #[serde(default)]
    pub edge_orientations: Vec<[usize; 2]>,
    #[serde(default)]
    pub blowups: Vec<BlowupDocument>,
    /// Marking points indexed by edge id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<Vec<GaussianRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BlowupDocument {
    Point { edge: [usize; 2], coord: GaussianRational },
    Curve { component: usize, class: ClassDocument, points: Vec<CurvePoints> },
}

/// A curve class: coordinates in the current basis of `Pic(D_v)`, or a
/// combination of boundary curves (by neighbor) and exceptional curves (by
/// index on the component).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassDocument {
    Coordinates(Vec<i64>),
    Combination {
        #[serde(default)]
        boundary: Vec<[i64; 2]>,
        #[serde(default)]
        exceptional: Vec<[i64; 2]>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvePoints {
    pub neighbor: usize,
    pub coords: Vec<GaussianRational>,
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::Parse(format!("format is {format:?}, expected {expected:?}")));
    }
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported version {version}")));
    }
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

impl PairDocument {
    pub fn parse(text: &str) -> Result<PairDocument> {
        let doc: PairDocument = parse_json(text, "pair document")?;
        check_header(&doc.format, doc.version, PAIR_FORMAT)?;
        if doc.lattice_rank != 3 {
            return Err(Error::Parse(format!("lattice_rank is {}, only 3 is supported", doc.lattice_rank)));
        }
        Ok(doc)
    }

    pub fn fan(&self) -> Fan3 {
        Fan3 { rays: self.rays.clone(), cones: self.cones.clone(), orientation: self.orientation.clone() }
    }

    /// Resolve curve classes and build the pair data. Class combinations
    /// are resolved against the pair obtained by the preceding steps.
    pub fn to_spec(&self) -> Result<PairSpec> {
        let mut spec = PairSpec {
            fan: self.fan(),
            edge_orientations: self.edge_orientations.iter().map(|e| (e[0], e[1])).collect(),
            steps: Vec::new(),
        };
        for (k, b) in self.blowups.iter().enumerate() {
            let step = match b {
                BlowupDocument::Point { edge, coord } => BlowupStep::Point { edge: (edge[0], edge[1]), coord: coord.clone() },
                BlowupDocument::Curve { component, class, points } => {
                    let class = match class {
                        ClassDocument::Coordinates(c) => c.clone(),
                        ClassDocument::Combination { boundary, exceptional } => {
                            let prefix = LogCY3Pair::new(spec.clone())?;
                            if *component >= prefix.n_components() {
                                return Err(Error::InvalidPair(format!("step {k}: no component {component}")));
                            }
                            let c = prefix.component(*component);
                            let mut out = vec![0i64; c.rank()];
                            for [w, a] in boundary {
                                let pos = usize::try_from(*w).ok().and_then(|w| c.position_of(w)).ok_or_else(|| {
                                    Error::InvalidPair(format!("step {k}: {w} is not adjacent to component {component}"))
                                })?;
                                for (o, x) in out.iter_mut().zip(c.boundary_class(pos)) {
                                    *o += a * x;
                                }
                            }
                            for [i, a] in exceptional {
                                let i = usize::try_from(*i).ok().filter(|&i| i < c.excs.len()).ok_or_else(|| {
                                    Error::InvalidPair(format!("step {k}: no exceptional curve {i} on component {component}"))
                                })?;
                                out[c.toric_rank() + i] += a;
                            }
                            out
                        }
                    };
                    BlowupStep::Curve {
                        component: *component,
                        class,
                        points: points.iter().map(|p| (p.neighbor, p.coords.clone())).collect(),
                    }
                }
            };
            spec.steps.push(step);
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &PairSpec) -> PairDocument {
        PairDocument {
            format: PAIR_FORMAT.into(),
            version: VERSION,
            lattice_rank: 3,
            rays: spec.fan.rays.clone(),
            cones: spec.fan.cones.clone(),
            orientation: spec.fan.orientation.clone(),
            edge_orientations: spec.edge_orientations.iter().map(|&(a, b)| [a, b]).collect(),
            blowups: spec
                .steps
                .iter()
                .map(|s| match s {
                    BlowupStep::Point { edge, coord } => BlowupDocument::Point { edge: [edge.0, edge.1], coord: coord.clone() },
                    BlowupStep::Curve { component, class, points } => BlowupDocument::Curve {
                        component: *component,
                        class: ClassDocument::Coordinates(class.clone()),
                        points: points.iter().map(|(w, c)| CurvePoints { neighbor: *w, coords: c.clone() }).collect(),
                    },
                })
                .collect(),
            marking: None,
        }
    }

    pub fn marking(&self) -> Option<Marking> {
        self.marking.as_ref().map(|points| Marking { points: points.clone() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceDocument {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub correspondence: Correspondence,
}

impl CorrespondenceDocument {
    pub fn parse(text: &str) -> Result<Correspondence> {
        let doc: CorrespondenceDocument = parse_json(text, "correspondence document")?;
        check_header(&doc.format, doc.version, CORRESPONDENCE_FORMAT)?;
        Ok(doc.correspondence)
    }

    pub fn new(correspondence: Correspondence) -> CorrespondenceDocument {
        CorrespondenceDocument { format: CORRESPONDENCE_FORMAT.into(), version: VERSION, correspondence }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// Parse a marking given inline as comma-separated coordinates.
pub fn parse_marking(text: &str) -> Result<Marking> {
    let points = text
        .split(',')
        .map(|s| s.trim().parse::<GaussianRational>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Marking { points })
}
