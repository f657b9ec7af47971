//! Hop-by-hop geographic forwarding and Fermat-point multicast composition.
//!
//! Flat greedy forwarding picks the neighbor with the most forward progress
//! toward the destination, even when the destination is itself in range.
//! I-Min runs the same rule but first checks whether the destination is a
//! neighbor and, if so, hands the packet straight to it.

use std::fmt;
use std::str::FromStr;

use crate::energy::{route_energy, RadioParams};
use crate::exec::Execution;
use crate::geometry::{
    minima_fermat_point_with, torricelli_triangle, AnchorSet, FermatResult, GeometryError, Point2D,
    SearchBounds,
};
use crate::topology::{GeocastRegion, Network, NodeId, TopologyError};

#[derive(Debug, thiserror::Error)]
pub enum ForwardingError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{scheme} needs exactly {expected} regions, got {got}")]
    SchemeArityMismatch {
        scheme: Scheme,
        expected: usize,
        got: usize,
    },
    #[error("at least one geocast region is required")]
    NoRegions,
    #[error("hop limit must be at least 1")]
    InvalidHopLimit,
}

pub type Result<T> = std::result::Result<T, ForwardingError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteStatus {
    Delivered,
    LoopDetected,
    Void,
    HopLimitExceeded,
}

impl RouteStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RouteStatus::Delivered => "delivered",
            RouteStatus::LoopDetected => "loop_detected",
            RouteStatus::Void => "void",
            RouteStatus::HopLimitExceeded => "hop_limit_exceeded",
        }
    }
}

impl fmt::Display for RouteStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One unicast leg: the nodes that held the packet, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteTrace {
    pub hops: Vec<NodeId>,
    /// Length of each transition; one shorter than `hops`.
    pub per_hop_distance: Vec<f64>,
    pub status: RouteStatus,
}

impl RouteTrace {
    pub fn transitions(&self) -> usize {
        self.per_hop_distance.len()
    }

    pub fn total_distance(&self) -> f64 {
        self.per_hop_distance.iter().sum()
    }

    pub fn is_delivered(&self) -> bool {
        self.status == RouteStatus::Delivered
    }

    pub fn last(&self) -> NodeId {
        *self.hops.last().expect("trace always holds its source")
    }
}

/// Neighbor selection rule for the greedy step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyRule {
    /// Largest positive projection of the hop onto the direction of the
    /// destination (most forward within radius). Can overshoot.
    #[default]
    MostForward,
    /// Neighbor closest to the destination, if strictly closer than the
    /// current node.
    NearestToDestination,
}

impl FromStr for GreedyRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mfr" | "most_forward" => Ok(GreedyRule::MostForward),
            "nearest" | "nearest_to_destination" => Ok(GreedyRule::NearestToDestination),
            _ => Err(format!(
                "unknown greedy rule `{s}` (expected mfr or nearest)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Forwarding {
    Greedy,
    IMin,
}

impl FromStr for Forwarding {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(Forwarding::Greedy),
            "imin" | "i-min" => Ok(Forwarding::IMin),
            _ => Err(format!(
                "unknown forwarding `{s}` (expected greedy or imin)"
            )),
        }
    }
}

/// Next hop under [`GreedyRule::MostForward`], or `None` when no neighbor
/// makes positive progress. Returns `None` if `current == destination`.
pub fn greedy_next_hop(
    network: &Network,
    current: NodeId,
    destination: NodeId,
) -> Result<Option<NodeId>> {
    greedy_next_hop_with(network, current, destination, GreedyRule::MostForward)
}

pub fn greedy_next_hop_with(
    network: &Network,
    current: NodeId,
    destination: NodeId,
    rule: GreedyRule,
) -> Result<Option<NodeId>> {
    let here = network.position(current)?;
    let target = network.position(destination)?;
    if current == destination {
        return Ok(None);
    }
    let neighbors = network.neighbor_ids(current)?;
    let mut best: Option<(f64, NodeId)> = None;
    match rule {
        GreedyRule::MostForward => {
            let span = target - here;
            let len = span.norm();
            if len == 0.0 {
                return Ok(None);
            }
            let dir = span.scale(1.0 / len);
            for &n in neighbors {
                let progress = (network.nodes()[n].position - here).dot(dir);
                if progress > 0.0 && best.is_none_or(|(b, _)| progress > b) {
                    best = Some((progress, n));
                }
            }
        }
        GreedyRule::NearestToDestination => {
            let own = here.distance(target);
            for &n in neighbors {
                // negated so that "larger is better" like progress
                let closeness = -network.nodes()[n].position.distance(target);
                if -closeness < own && best.is_none_or(|(b, _)| closeness > b) {
                    best = Some((closeness, n));
                }
            }
        }
    }
    Ok(best.map(|(_, n)| n))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteOptions {
    pub hop_limit: usize,
    pub rule: GreedyRule,
}

impl RouteOptions {
    pub fn new(hop_limit: usize) -> Self {
        Self {
            hop_limit,
            rule: GreedyRule::default(),
        }
    }

    /// Ten transitions per node, the default stagnation guard.
    pub fn for_network(network: &Network) -> Self {
        Self::new(10 * network.len().max(1))
    }
}

/// Flat greedy forwarding from `source` to `destination`.
pub fn greedy_route(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    hop_limit: usize,
) -> Result<RouteTrace> {
    route(
        network,
        source,
        destination,
        Forwarding::Greedy,
        &RouteOptions::new(hop_limit),
    )
}

/// Greedy forwarding with a direct hand-off whenever the destination is a
/// neighbor of the current holder.
pub fn imin_route(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    hop_limit: usize,
) -> Result<RouteTrace> {
    route(
        network,
        source,
        destination,
        Forwarding::IMin,
        &RouteOptions::new(hop_limit),
    )
}

/// Forwards hop by hop until the destination is reached, a node repeats,
/// no neighbor makes progress, or `hop_limit` transitions have been spent.
pub fn route(
    network: &Network,
    source: NodeId,
    destination: NodeId,
    forwarding: Forwarding,
    options: &RouteOptions,
) -> Result<RouteTrace> {
    if options.hop_limit == 0 {
        return Err(ForwardingError::InvalidHopLimit);
    }
    network.node(source)?;
    network.node(destination)?;

    let mut visited = vec![false; network.len()];
    visited[source] = true;
    let mut hops = vec![source];
    let mut per_hop_distance = Vec::new();
    let finish = |hops, per_hop_distance, status| {
        Ok(RouteTrace {
            hops,
            per_hop_distance,
            status,
        })
    };

    loop {
        let current = *hops.last().unwrap();
        if current == destination {
            return finish(hops, per_hop_distance, RouteStatus::Delivered);
        }
        if per_hop_distance.len() >= options.hop_limit {
            return finish(hops, per_hop_distance, RouteStatus::HopLimitExceeded);
        }
        let next =
            if forwarding == Forwarding::IMin && network.are_neighbors(current, destination)? {
                Some(destination)
            } else {
                greedy_next_hop_with(network, current, destination, options.rule)?
            };
        let Some(next) = next else {
            return finish(hops, per_hop_distance, RouteStatus::Void);
        };
        let nodes = network.nodes();
        per_hop_distance.push(nodes[current].position.distance(nodes[next].position));
        hops.push(next);
        if std::mem::replace(&mut visited[next], true) {
            return finish(hops, per_hop_distance, RouteStatus::LoopDetected);
        }
    }
}

/// The three compared geocast schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Torricelli construction (two regions only) with flat greedy legs.
    GeometryDriven,
    /// Grid-minima Fermat point with flat greedy legs.
    GlobalMinima,
    /// Grid-minima Fermat point with I-Min legs.
    IMin,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::GeometryDriven, Scheme::GlobalMinima, Scheme::IMin];

    pub fn forwarding(self) -> Forwarding {
        match self {
            Scheme::GeometryDriven | Scheme::GlobalMinima => Forwarding::Greedy,
            Scheme::IMin => Forwarding::IMin,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::GeometryDriven => "geometry_driven",
            Scheme::GlobalMinima => "global_minima",
            Scheme::IMin => "imin",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "geometry_driven" | "geometry" => Ok(Scheme::GeometryDriven),
            "global_minima" | "minima" => Ok(Scheme::GlobalMinima),
            "imin" | "i_min" => Ok(Scheme::IMin),
            _ => Err(format!(
                "unknown scheme `{s}` (expected geometry_driven, global_minima or imin)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulticastOptions {
    pub hop_limit: usize,
    /// Grid resolution of the minima locator, meters.
    pub grid_step: f64,
    pub radio: RadioParams,
    pub rule: GreedyRule,
    pub exec: Execution,
}

impl MulticastOptions {
    pub fn for_network(network: &Network) -> Self {
        Self {
            hop_limit: RouteOptions::for_network(network).hop_limit,
            grid_step: 1.0,
            radio: RadioParams::default(),
            rule: GreedyRule::default(),
            exec: Execution::default(),
        }
    }
}

/// Source → relay → destinations route set for one geocast packet.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticastTrace {
    pub scheme: Scheme,
    pub fermat: FermatResult,
    pub relay_id: NodeId,
    pub source_leg: RouteTrace,
    /// One leg per region, relay → node nearest the region center.
    pub destination_legs: Vec<RouteTrace>,
    pub total_hops: usize,
    pub total_distance: f64,
    pub total_energy: f64,
}

impl MulticastTrace {
    pub fn legs(&self) -> impl Iterator<Item = &RouteTrace> {
        std::iter::once(&self.source_leg).chain(&self.destination_legs)
    }

    /// Delivered iff every leg is; otherwise the first failing leg's status.
    pub fn status(&self) -> RouteStatus {
        self.legs()
            .map(|l| l.status)
            .find(|s| *s != RouteStatus::Delivered)
            .unwrap_or(RouteStatus::Delivered)
    }

    pub fn is_delivered(&self) -> bool {
        self.status() == RouteStatus::Delivered
    }
}

/// Locates the Fermat point of the source and region centers, relays
/// through the node nearest to it, and routes each leg under `scheme`.
pub fn fermat_multicast_route(
    network: &Network,
    source: NodeId,
    regions: &[GeocastRegion],
    scheme: Scheme,
    options: &MulticastOptions,
) -> Result<MulticastTrace> {
    if regions.is_empty() {
        return Err(ForwardingError::NoRegions);
    }
    if scheme == Scheme::GeometryDriven && regions.len() != 2 {
        return Err(ForwardingError::SchemeArityMismatch {
            scheme,
            expected: 2,
            got: regions.len(),
        });
    }
    let origin = network.position(source)?;
    let centers: Vec<Point2D> = regions.iter().map(|r| r.center).collect();
    let anchors = AnchorSet::new(origin, centers.clone())?;

    let fermat = match scheme {
        Scheme::GeometryDriven => match torricelli_triangle(origin, centers[0], centers[1]) {
            Ok(r) => r,
            Err(GeometryError::DegenerateTriangle { fallback }) => fallback,
            Err(e) => return Err(e.into()),
        },
        Scheme::GlobalMinima | Scheme::IMin => minima_fermat_point_with(
            &anchors,
            &SearchBounds::enclosing(&anchors, options.grid_step),
            options.exec,
        )?,
    };

    let relay_id = network.nearest_node(fermat.point)?.id;
    let route_opts = RouteOptions {
        hop_limit: options.hop_limit,
        rule: options.rule,
    };
    let forwarding = scheme.forwarding();
    let source_leg = route(network, source, relay_id, forwarding, &route_opts)?;
    let destination_legs = centers
        .iter()
        .map(|&c| {
            let target = network.nearest_node(c)?.id;
            route(network, relay_id, target, forwarding, &route_opts)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut trace = MulticastTrace {
        scheme,
        fermat,
        relay_id,
        source_leg,
        destination_legs,
        total_hops: 0,
        total_distance: 0.0,
        total_energy: 0.0,
    };
    trace.total_hops = trace.legs().map(RouteTrace::transitions).sum();
    trace.total_distance = trace.legs().flat_map(|l| l.per_hop_distance.iter()).sum();
    trace.total_energy = trace
        .legs()
        .map(|l| route_energy(&options.radio, l).total)
        .sum();
    Ok(trace)
}
