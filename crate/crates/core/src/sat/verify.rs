use std::fmt;

use serde::Serialize;

use super::SatError;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `H` contains `K_{1,r}` centred at `vertex`.
    ContainsStar { vertex: usize, degree: usize },
    /// Host edge `{u, v}` can be added to `H` without creating `K_{1,r}`.
    Addable { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ContainsStar { vertex, degree } => {
                write!(f, "vertex {vertex} has degree {degree}, which contains a star")
            }
            Violation::Addable { u, v } => {
                write!(f, "host edge {u} {v} can be added without creating a star")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Saturated,
    Violated(Violation),
}

impl Verdict {
    pub fn is_saturated(&self) -> bool {
        matches!(self, Verdict::Saturated)
    }
}

/// Checks that `h` is `K_{1,r}`-saturated in `host`. Reports the first
/// over-full vertex, else the lexicographically first addable host edge.
pub fn is_star_saturated(host: &Graph, h: &Graph, r: usize) -> Result<Verdict, SatError> {
    if !h.is_spanning_subgraph_of(host) {
        return Err(SatError::NotSpanning);
    }
    if r == 0 {
        return Err(SatError::InvalidStar(r));
    }
    let full = r - 1;
    if let Some(vertex) = (0..h.n()).find(|&v| h.degree(v) > full) {
        return Ok(Verdict::Violated(Violation::ContainsStar {
            vertex,
            degree: h.degree(vertex),
        }));
    }
    for (u, v) in host.edges() {
        if !h.has_edge(u, v) && h.degree(u) < full && h.degree(v) < full {
            return Ok(Verdict::Violated(Violation::Addable { u, v }));
        }
    }
    Ok(Verdict::Saturated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    #[test]
    fn examples() {
        let e = Graph::empty(4);
        assert_eq!(is_star_saturated(&e, &e, 3).unwrap(), Verdict::Saturated);

        let k5 = Graph::complete(5);
        let h = Graph::new(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(is_star_saturated(&k5, &h, 3).unwrap(), Verdict::Saturated);

        let c5 = Graph::new(5, &cycle(5)).unwrap();
        let mut path = cycle(5);
        path.pop(); // drops (4, 0)
        let h = Graph::new(5, &path).unwrap();
        assert_eq!(
            is_star_saturated(&c5, &h, 3).unwrap(),
            Verdict::Violated(Violation::Addable { u: 0, v: 4 })
        );
    }

    #[test]
    fn star_and_spanning_checks() {
        let k4 = Graph::complete(4);
        assert_eq!(
            is_star_saturated(&k4, &k4, 3).unwrap(),
            Verdict::Violated(Violation::ContainsStar { vertex: 0, degree: 3 })
        );
        let p = Graph::new(4, &[(0, 1)]).unwrap();
        assert_eq!(is_star_saturated(&p, &k4, 3), Err(SatError::NotSpanning));
        assert_eq!(is_star_saturated(&k4, &Graph::empty(3), 3), Err(SatError::NotSpanning));
    }

    #[test]
    fn agrees_with_definition_by_edge_addition() {
        // direct check: H is star-free and adding each missing host edge creates a star
        use crate::rng::Seed;
        for t in 0..200u64 {
            let s = Seed::new(31).derive(t);
            let n = 2 + (s.draw(0) % 7) as usize;
            let r = 2 + (s.draw(1) % 3) as usize;
            let host = Graph::gnp(n, 0.6, &s).unwrap();
            let keep: Vec<_> = host
                .edges()
                .enumerate()
                .filter(|(i, _)| s.derive(1).uniform(*i as u64) < 0.6)
                .map(|(_, e)| e)
                .collect();
            let h = Graph::new(n, &keep).unwrap();
            let star_free = h.max_degree() < r;
            let saturated = star_free
                && host.edges().filter(|&(u, v)| !h.has_edge(u, v)).all(|(u, v)| {
                    let mut plus = keep.clone();
                    plus.push((u, v));
                    Graph::new(n, &plus).unwrap().max_degree() >= r
                });
            assert_eq!(is_star_saturated(&host, &h, r).unwrap().is_saturated(), saturated);
        }
    }
}
