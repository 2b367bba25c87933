use serde::Serialize;

use crate::algebra::FiniteAlgebra;

/// `L = [[D_1, -I, 0, …], [D_2, 0, -I, …], …, [D_p, 0, …, 0]]` with
/// `(D_t)[i][j] = dim e_j A_t e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoewyMatrix {
    pub blocks: usize,
    pub vertices: usize,
    /// Whether the dimension matrices were transposed.
    pub transposed: bool,
    pub entries: Vec<Vec<i64>>,
}

impl LoewyMatrix {
    pub fn new(a: &FiniteAlgebra, transposed: bool) -> Self {
        let p = a.top_degree();
        let m = a.vertex_count();
        let size = p * m;
        let mut entries = vec![vec![0i64; size]; size];
        for t in 1..=p {
            let d = a.dim_matrix(t);
            for i in 0..m {
                for j in 0..m {
                    let v = if transposed { d[j][i] } else { d[i][j] };
                    entries[(t - 1) * m + i][j] = v as i64;
                }
            }
            if t < p {
                for i in 0..m {
                    entries[(t - 1) * m + i][t * m + i] = -1;
                }
            }
        }
        LoewyMatrix {
            blocks: p,
            vertices: m,
            transposed,
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}
