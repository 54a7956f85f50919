use rand::seq::SliceRandom;
use rand::Rng;

use super::{End, LineId, RibbonGraph, Slot};

/// A random connected orientable graph with `n` vertices and `l` lines.
/// Heads go on random `+` slots, tails on random `-` slots, the rest become
/// external legs `x1, x2, ...`. Requires `n - 1 <= l <= 2n`.
pub fn random_orientable<R: Rng + ?Sized>(rng: &mut R, n: usize, l: usize) -> RibbonGraph {
    assert!(
        n >= 1 && l + 1 >= n && l <= 2 * n,
        "no connected graph with n={n}, L={l}"
    );
    let plus: Vec<(usize, usize)> = (0..n).flat_map(|v| [(v, 0), (v, 2)]).collect();
    let minus: Vec<(usize, usize)> = (0..n).flat_map(|v| [(v, 1), (v, 3)]).collect();
    loop {
        let mut heads = plus.clone();
        let mut tails = minus.clone();
        heads.shuffle(rng);
        tails.shuffle(rng);
        let mut slots: Vec<Vec<Option<Slot>>> = vec![vec![None; 4]; n];
        for k in 0..l {
            let line = k as LineId + 1;
            let (hv, hs) = heads[k];
            let (tv, ts) = tails[k];
            slots[hv][hs] = Some(Slot::Line {
                line,
                end: End::Head,
            });
            slots[tv][ts] = Some(Slot::Line {
                line,
                end: End::Tail,
            });
        }
        let mut ext = 0;
        let vertices = slots
            .into_iter()
            .enumerate()
            .map(|(v, vs)| {
                let vs = vs
                    .into_iter()
                    .map(|s| {
                        s.unwrap_or_else(|| {
                            ext += 1;
                            Slot::Ext(format!("x{ext}"))
                        })
                    })
                    .collect();
                (format!("V{v}"), vs)
            })
            .collect();
        if let Ok(g) = RibbonGraph::new(format!("random-n{n}-l{l}"), vertices, "V0") {
            return g;
        }
    }
}
