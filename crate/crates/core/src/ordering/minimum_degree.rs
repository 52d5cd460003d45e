use std::collections::BTreeSet;

use super::pattern::Permutation;
use crate::graph::Graph;

/// Exact minimum-degree ordering on a quotient graph. Eliminated nodes become
/// elements; a variable's degree is the size of the union of its variable
/// neighbors and the variables of its adjacent elements. Ties go to the
/// lowest id.
pub fn minimum_degree(g: &Graph) -> Permutation {
    let n = g.n();
    let mut vars: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut elems: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut elem_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut eliminated = vec![false; n];
    let mut absorbed = vec![false; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    // stamp-based markers: in_lp for the pivot's reach, seen for degree unions
    let mut in_lp = vec![usize::MAX; n];
    let mut seen = vec![usize::MAX; n];
    let mut stamp = 0usize;
    let mut order = Vec::with_capacity(n);

    while let Some((_, p)) = queue.pop_first() {
        order.push(p);
        eliminated[p] = true;
        in_lp[p] = p;
        let mut lp = Vec::new();
        for &w in &vars[p] {
            if !eliminated[w] && in_lp[w] != p {
                in_lp[w] = p;
                lp.push(w);
            }
        }
        for e in std::mem::take(&mut elems[p]) {
            for &w in &elem_vars[e] {
                if !eliminated[w] && in_lp[w] != p {
                    in_lp[w] = p;
                    lp.push(w);
                }
            }
            absorbed[e] = true;
            elem_vars[e] = Vec::new();
        }
        vars[p] = Vec::new();
        lp.sort_unstable();

        for &v in &lp {
            vars[v].retain(|&w| !eliminated[w] && in_lp[w] != p);
            elems[v].retain(|&e| !absorbed[e]);
            elems[v].push(p);
        }
        elem_vars[p] = lp;

        for i in 0..elem_vars[p].len() {
            let v = elem_vars[p][i];
            stamp += 1;
            seen[v] = stamp;
            let mut d = 0;
            for &w in &vars[v] {
                if seen[w] != stamp {
                    seen[w] = stamp;
                    d += 1;
                }
            }
            for &e in &elems[v] {
                for &w in &elem_vars[e] {
                    if seen[w] != stamp {
                        seen[w] = stamp;
                        d += 1;
                    }
                }
            }
            if d != deg[v] {
                queue.remove(&(deg[v], v));
                deg[v] = d;
                queue.insert((d, v));
            }
        }
    }
    Permutation::new(order).expect("every node is eliminated once")
}
