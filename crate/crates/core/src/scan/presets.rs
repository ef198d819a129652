//! Built-in scans, written in the ordinary configuration format.

const ORDERINGS: [[&str; 3]; 6] =
    [["2", "5", "50"], ["50", "5", "2"], ["5", "2", "50"], ["50", "2", "5"], ["2", "50", "5"], ["5", "50", "2"]];

fn ordering_curves(prefix: &str, extra: &str) -> String {
    let mut out = String::new();
    for [e1, e2, e3] in ORDERINGS {
        let label = format!("{prefix}eps{e1}-{e2}-{e3}");
        if !extra.is_empty() {
            out += &format!("curve.{label}.{extra}\n");
        }
        out += &format!("curve.{label}.media.eps1 = {e1}\ncurve.{label}.media.eps2 = {e2}\ncurve.{label}.media.eps3 = {e3}\n");
    }
    out
}

/// `E(δ) - E(0)` for nested cylinders with `b/a ∈ {2, 2.5}`, every
/// ordering of the permittivities `{2, 5, 50}`.
pub fn fig1() -> String {
    let mut s = String::from(
        "# energy shift versus eccentricity\n\
         geometry.kind = eccentric\n\
         geometry.a = 1\n\
         geometry.b = 2\n\
         sweep.axis = delta\n\
         sweep.grid = linspace(0, 0.6, 7)\n\
         sweep.reference = first\n",
    );
    s += &ordering_curves("b2_", "geometry.b = 2");
    s += &ordering_curves("b2p5_", "geometry.b = 2.5");
    s
}

/// Cylinder facing a plane, energy versus surface gap.
pub fn fig2() -> String {
    let mut s = String::from(
        "# cylinder-plane energy versus gap\n\
         geometry.kind = cylinder_plane\n\
         geometry.a = 1\n\
         geometry.d = 1\n\
         sweep.axis = d\n\
         sweep.grid = linspace(0.5, 3, 6)\n\
         sweep.reference = none\n",
    );
    s += &ordering_curves("", "");
    s
}

/// Departure from perfect reflection along a ladder of inner
/// permittivities, a nearly ideal plane and vacuum in the gap.
pub fn fig3() -> String {
    let mut s = String::from(
        "# departure from perfect reflection versus inner permittivity\n\
         geometry.kind = cylinder_plane\n\
         geometry.a = 1\n\
         geometry.d = 1\n\
         media.eps2 = 1\n\
         media.eps3 = 1e8\n\
         sweep.axis = eps1\n\
         sweep.grid = logspace(2, 4, 5)\n\
         sweep.reference = pc\n",
    );
    for d in ["1", "2"] {
        s += &format!("curve.d{d}.geometry.d = {d}\ncurve.d{d}.media.eps1 = 100\n");
    }
    s
}

pub const NAMES: [&str; 3] = ["fig1", "fig2", "fig3"];

pub fn preset(name: &str) -> Option<String> {
    match name {
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        "fig3" => Some(fig3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::config::parse_config;

    #[test]
    fn presets_parse() {
        let c1 = parse_config(&fig1()).unwrap();
        assert_eq!(c1.curves.len(), 12);
        assert_eq!(c1.sweep.grid.len(), 7);
        let c2 = parse_config(&fig2()).unwrap();
        assert_eq!(c2.curves.len(), 6);
        let c3 = parse_config(&fig3()).unwrap();
        assert_eq!(c3.curves.len(), 2);
        assert_eq!(c3.curves[1].geometry.h, 3.0);
        assert!(preset("fig4").is_none());
    }
}
