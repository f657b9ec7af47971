//! Standalone SVG renders of a deployment and the routes laid over it.

use std::fmt::Write as _;
use std::io;

use crate::forwarding::{Forwarding, MulticastTrace, RouteTrace, Scheme};
use crate::geometry::Point2D;
use crate::topology::{Network, NodeId};

fn scheme_color(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::GeometryDriven => "#d95f02",
        Scheme::GlobalMinima => "#7570b3",
        Scheme::IMin => "#1b9e77",
    }
}

fn forwarding_color(f: Forwarding) -> &'static str {
    match f {
        Forwarding::Greedy => scheme_color(Scheme::GlobalMinima),
        Forwarding::IMin => scheme_color(Scheme::IMin),
    }
}

struct Canvas {
    body: String,
    height: f64,
    unit: f64,
}

impl Canvas {
    fn new(network: &Network) -> Self {
        let arena = network.arena();
        Self {
            body: String::new(),
            height: arena.height,
            unit: arena.width.max(arena.height) / 400.0,
        }
    }

    // SVG y grows downward
    fn xy(&self, p: Point2D) -> (f64, f64) {
        (p.x, self.height - p.y)
    }

    fn nodes(&mut self, network: &Network) {
        self.body.push_str("<g id=\"nodes\" fill=\"#444\">\n");
        for n in network.nodes() {
            let (x, y) = self.xy(n.position);
            let _ = writeln!(
                self.body,
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"{}\"><title>{}</title></circle>",
                self.unit * 1.5,
                n.id
            );
        }
        self.body.push_str("</g>\n");
    }

    fn range(&mut self, network: &Network, id: NodeId) {
        let (x, y) = self.xy(network.nodes()[id].position);
        let _ = writeln!(
            self.body,
            "<circle class=\"range\" cx=\"{x}\" cy=\"{y}\" r=\"{}\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"{} {}\" stroke-width=\"{}\"/>",
            network.radius(),
            self.unit * 3.0,
            self.unit * 2.0,
            self.unit * 0.5
        );
    }

    fn leg(&mut self, network: &Network, trace: &RouteTrace, color: &str, label: &str) {
        let points: Vec<String> = trace
            .hops
            .iter()
            .map(|&id| {
                let (x, y) = self.xy(network.nodes()[id].position);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            "<polyline class=\"leg {label}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\" stroke-opacity=\"0.8\"><title>{label} {}</title></polyline>",
            points.join(" "),
            self.unit,
            trace.status
        );
    }

    fn cross(&mut self, p: Point2D, color: &str) {
        let (x, y) = self.xy(p);
        let s = self.unit * 4.0;
        let _ = writeln!(
            self.body,
            "<g class=\"fermat\" stroke=\"{color}\" stroke-width=\"{}\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
            self.unit * 0.8,
            x - s,
            y - s,
            x + s,
            y + s,
            x - s,
            y + s,
            x + s,
            y - s
        );
    }

    fn finish<W: io::Write>(self, network: &Network, mut out: W) -> io::Result<()> {
        let a = network.arena();
        writeln!(
            out,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
            a.width,
            a.height,
            a.width,
            a.height
        )?;
        writeln!(
            out,
            "<rect width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\"/>",
            a.width, a.height
        )?;
        out.write_all(self.body.as_bytes())?;
        writeln!(out, "</svg>")
    }
}

/// Nodes, the source's transmission range, each route leg colored by scheme,
/// and each Fermat point as a cross.
pub fn render_svg<W: io::Write>(
    network: &Network,
    traces: &[MulticastTrace],
    out: W,
) -> io::Result<()> {
    let mut c = Canvas::new(network);
    if let Some(t) = traces.first() {
        c.range(network, t.source_leg.hops[0]);
    }
    c.nodes(network);
    for t in traces {
        let color = scheme_color(t.scheme);
        for leg in t.legs() {
            c.leg(network, leg, color, t.scheme.as_str());
        }
        c.cross(t.fermat.point, color);
    }
    c.finish(network, out)
}

/// Single unicast routes, colored by forwarding rule.
pub fn render_route_svg<W: io::Write>(
    network: &Network,
    routes: &[(Forwarding, &RouteTrace)],
    out: W,
) -> io::Result<()> {
    let mut c = Canvas::new(network);
    if let Some((_, t)) = routes.first() {
        c.range(network, t.hops[0]);
    }
    c.nodes(network);
    for (f, t) in routes {
        let label = match f {
            Forwarding::Greedy => "greedy",
            Forwarding::IMin => "imin",
        };
        c.leg(network, t, forwarding_color(*f), label);
    }
    c.finish(network, out)
}
