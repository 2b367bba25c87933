//! Named bound quivers used by tests, benches and the command line.

use crate::quiver::{BoundQuiver, QuiverBuilder};

fn auslander_quiver() -> QuiverBuilder {
    QuiverBuilder::new()
        .vertices(1..=6)
        .arrow("a1", "1", "2")
        .arrow("a2", "2", "3")
        .arrow("a4", "4", "5")
        .arrow("b2", "2", "4")
        .arrow("b3", "3", "5")
        .arrow("b5", "5", "6")
}

/// The Auslander algebra of linear A3, presented as the 2-properly-graded
/// algebra: zero relations along each direction, one commutativity square.
pub fn a4_auslander_lambda() -> BoundQuiver {
    auslander_quiver()
        .relation("a1.a2")
        .relation("b3.b5")
        .relation("a2.b3 - b2.a4")
        .build()
        .expect("fixture is valid")
}

/// The 2-slice algebra dual to [`a4_auslander_lambda`].
pub fn a4_auslander_gamma() -> BoundQuiver {
    auslander_quiver()
        .relation("a2.b3 + b2.a4")
        .relation("a1.b2")
        .relation("a4.b5")
        .build()
        .expect("fixture is valid")
}

/// Linearly oriented `A_n` without relations.
pub fn linear_a(n: usize) -> BoundQuiver {
    let mut b = QuiverBuilder::new().vertices(1..=n);
    for i in 1..n {
        b = b.arrow(&format!("a{i}"), &i.to_string(), &(i + 1).to_string());
    }
    b.build().expect("fixture is valid")
}

/// Two vertices with `m` parallel arrows.
pub fn kronecker(m: usize) -> BoundQuiver {
    let mut b = QuiverBuilder::new().vertices(1..=2);
    for i in 1..=m {
        b = b.arrow(&format!("x{i}"), "1", "2");
    }
    b.build().expect("fixture is valid")
}

/// One vertex, no arrows.
pub fn point() -> BoundQuiver {
    QuiverBuilder::new().vertices(["1"]).build().expect("fixture is valid")
}

/// Dynkin type with its number of vertices, as an undirected edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dynkin {
    A(usize),
    D(usize),
    E(usize),
}

impl Dynkin {
    pub fn rank(self) -> usize {
        match self {
            Dynkin::A(n) | Dynkin::D(n) | Dynkin::E(n) => n,
        }
    }

    pub fn coxeter_number(self) -> usize {
        match self {
            Dynkin::A(n) => n + 1,
            Dynkin::D(n) => 2 * n - 2,
            Dynkin::E(6) => 12,
            Dynkin::E(7) => 18,
            Dynkin::E(8) => 30,
            Dynkin::E(n) => panic!("no E{n}"),
        }
    }

    /// Edges on vertices `1..=rank`.
    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            Dynkin::A(n) => (1..n).map(|i| (i, i + 1)).collect(),
            Dynkin::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            Dynkin::E(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((3, n));
                e
            }
        }
    }

    /// Path algebra with edge `k` oriented forward when bit `k` of `mask` is 0.
    pub fn path_algebra(self, mask: u64) -> BoundQuiver {
        let mut b = QuiverBuilder::new().vertices(1..=self.rank());
        for (k, (i, j)) in self.edges().into_iter().enumerate() {
            let (s, t) = if mask >> k & 1 == 0 { (i, j) } else { (j, i) };
            b = b.arrow(&format!("e{k}"), &s.to_string(), &t.to_string());
        }
        b.build().expect("fixture is valid")
    }
}
