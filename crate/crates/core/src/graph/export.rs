use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::GraphIndex;
use crate::point::{Axis, RotationId, Surface};

/// One row of the vertex dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u32,
    pub x1: u64,
    pub x2: u64,
    pub x3: u64,
    pub class1: String,
    pub class2: String,
    pub class3: String,
    pub ord: u64,
    pub in_cage: bool,
}

/// DOT graph with one line per edge `(x, rot_i x)`, i.e. one per undirected
/// edge of the six-regular view (the inverse half-edge is the same edge).
pub fn write_dot<W: Write>(g: &GraphIndex, out: &mut W) -> io::Result<()> {
    writeln!(out, "graph G_{} {{", g.p())?;
    for id in 0..g.len() as u32 {
        for axis in Axis::ALL {
            let to = g.neighbor(id, RotationId::forward(axis));
            writeln!(out, "  {id} -- {to} [label=rot_{axis}]")?;
        }
    }
    writeln!(out, "}}")
}

pub fn vertex_records<'a>(
    g: &'a GraphIndex,
    surface: &'a Surface,
) -> impl Iterator<Item = VertexRecord> + 'a {
    (0..g.len() as u32).map(move |id| {
        let x = g.point(id);
        let [c1, c2, c3] = x.coords().map(|v| surface.classify(v).kind.to_string());
        let [x1, x2, x3] = x.coords();
        VertexRecord {
            id,
            x1,
            x2,
            x3,
            class1: c1,
            class2: c2,
            class3: c3,
            ord: x.point_order(surface).0,
            in_cage: x.is_maximal(surface),
        }
    })
}

/// CSV header `id,x1,x2,x3,class1,class2,class3,ord,in_cage`.
pub fn write_vertex_csv<W: Write>(g: &GraphIndex, surface: &Surface, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for rec in vertex_records(g, surface) {
        w.serialize(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;

    #[test]
    fn dot_has_three_lines_per_vertex() {
        let g = GraphIndex::build(Prime::new(7).unwrap(), 100).unwrap();
        let mut buf = Vec::new();
        write_dot(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let edges: Vec<&str> = text.lines().filter(|l| l.contains("--")).collect();
        assert_eq!(edges.len(), 3 * g.len());
        assert!(text.starts_with("graph G_7 {"));
        assert!(edges.iter().all(|l| l.contains("[label=rot_")));
    }

    #[test]
    fn vertex_csv_round_trips() {
        let prime = Prime::new(11).unwrap();
        let g = GraphIndex::build(prime, 100).unwrap();
        let s = Surface::new(prime);
        let mut buf = Vec::new();
        write_vertex_csv(&g, &s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("id,x1,x2,x3,class1,class2,class3,ord,in_cage\n"));
        let mut r = csv::Reader::from_reader(buf.as_slice());
        let back: Vec<VertexRecord> = r.deserialize().collect::<Result<_, _>>().unwrap();
        let orig: Vec<VertexRecord> = vertex_records(&g, &s).collect();
        assert_eq!(back, orig);
        let origin = back
            .iter()
            .find(|r| (r.x1, r.x2, r.x3) == (1, 1, 2))
            .unwrap();
        assert_eq!((origin.ord, origin.in_cage), (12, true));
    }
}
