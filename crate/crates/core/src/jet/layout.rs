use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Index bookkeeping shared by all jets with the same `(n, r)`.
///
/// Multi-indices are enumerated in graded order (total degree ascending),
/// lexicographically descending within a degree, so the layout for order
/// `r - 1` is a prefix of the layout for order `r`.
#[derive(Debug)]
pub struct Layout {
    pub n: usize,
    pub r: usize,
    pub indices: Vec<Vec<u8>>,
    lookup: HashMap<Vec<u8>, usize>,
    /// For each coefficient `b`: `(g, b - g, prod_i C(b_i, g_i))` over all `g <= b`.
    pub(crate) leibniz: Vec<Vec<(u32, u32, f64)>>,
    /// `shift[i][b]`: position of `b + e_i` for every `b` of degree `< r`.
    pub(crate) shift: Vec<Vec<usize>>,
}

impl Layout {
    /// Returns the cached layout for `(n, r)`.
    pub fn get(n: usize, r: usize) -> &'static Layout {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), &'static Layout>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry((n, r)).or_insert_with(|| Box::leak(Box::new(Layout::build(n, r))))
    }

    fn build(n: usize, r: usize) -> Layout {
        let mut indices = Vec::new();
        let mut degree_end = Vec::with_capacity(r + 1);
        for d in 0..=r {
            let mut current = vec![0u8; n];
            push_compositions(d, 0, &mut current, &mut indices);
            degree_end.push(indices.len());
        }
        let lookup: HashMap<Vec<u8>, usize> =
            indices.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect();

        let leibniz = indices
            .iter()
            .map(|beta| {
                indices
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.iter().zip(beta).all(|(gi, bi)| gi <= bi))
                    .map(|(gk, g)| {
                        let rest: Vec<u8> = beta.iter().zip(g).map(|(b, g)| b - g).collect();
                        let coef: f64 = beta.iter().zip(g).map(|(&b, &g)| binomial(b, g)).product();
                        (gk as u32, lookup[&rest] as u32, coef)
                    })
                    .collect()
            })
            .collect();

        let lower = if r == 0 { 0 } else { degree_end[r - 1] };
        let shift = (0..n)
            .map(|i| {
                indices[..lower]
                    .iter()
                    .map(|b| {
                        let mut up = b.clone();
                        up[i] += 1;
                        lookup[&up]
                    })
                    .collect()
            })
            .collect();

        Layout { n, r, indices, lookup, leibniz, shift }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, multi: &[u8]) -> Option<usize> {
        self.lookup.get(multi).copied()
    }

    /// Multi-index for a list of (zero-based) variables to differentiate by.
    pub fn multi_index(&self, vars: &[usize]) -> Vec<u8> {
        let mut m = vec![0u8; self.n];
        for &v in vars {
            m[v] += 1;
        }
        m
    }
}

fn push_compositions(remaining: usize, slot: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    let n = current.len();
    if slot + 1 == n {
        current[slot] = remaining as u8;
        out.push(current.clone());
        return;
    }
    for v in (0..=remaining).rev() {
        current[slot] = v as u8;
        push_compositions(remaining - v, slot + 1, current, out);
    }
    current[slot] = 0;
}

fn binomial(n: u8, k: u8) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}
