//! Small graph helpers shared by the automaton types.

/// Result of a strongly-connected-component decomposition.
///
/// Components are emitted in reverse topological order: every edge leaving a
/// component points to a component with a smaller index.
pub(crate) struct Sccs {
    pub comp_of: Vec<usize>,
    pub comps: Vec<Vec<usize>>,
}

/// Iterative Tarjan over a successor function.
pub(crate) fn tarjan_sccs(n: usize, mut succs: impl FnMut(usize) -> Vec<usize>) -> Sccs {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;
        let children = succs(start);
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(start, children, 0)];

        'outer: while let Some(frame) = call.last_mut() {
            let v = frame.0;
            while frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ch = succs(w);
                    call.push((w, ch, 0));
                    continue 'outer;
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp_of[w] = comps.len();
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
            let low_v = low[v];
            call.pop();
            if let Some(parent) = call.last_mut() {
                let p = parent.0;
                low[p] = low[p].min(low_v);
            }
        }
    }
    Sccs { comp_of, comps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let sccs = tarjan_sccs(5, |v| adj[v].clone());
        assert_eq!(sccs.comps.len(), 3);
        assert_eq!(sccs.comp_of[0], sccs.comp_of[1]);
        assert_eq!(sccs.comp_of[2], sccs.comp_of[3]);
        assert_ne!(sccs.comp_of[0], sccs.comp_of[2]);
        // reverse topological: {2,3} closes before {0,1}
        assert!(sccs.comp_of[2] < sccs.comp_of[0]);
    }
}
