//! Exact LP relaxation of the degree-constrained subgraph problem.
//!
//! The continuous relaxation `max Σ w_e x_e, x_e ∈ [0,1], deg_i(x) ≤ c_i`
//! is solved exactly by doubling: every vertex `i` becomes a left copy `i⁺`
//! and a right copy `i⁻`, every edge `{u,v}` becomes the two unit-capacity
//! arcs `(u⁺, v⁻)` and `(v⁺, u⁻)` of weight `w`, and both copies keep the
//! cap `c_i`. The bipartite polytope is integral, and halving an optimal
//! integral bipartite solution gives an optimal (half-integral) solution of
//! the original relaxation. The bipartite side is solved as a max-profit
//! flow by successive shortest paths with potentials, stopping when the
//! cheapest augmenting path stops being profitable.
//!
//! Two numbers come back along with the support: the primal value (selected
//! arc weight, halved) and the dual objective
//! `D(λ) = Σ λ_i c_i + Σ_e (w_e − λ_u − λ_v)⁺` at multipliers symmetrised
//! from the final potentials. `D(λ)` upper-bounds the true LP optimum for
//! ANY nonnegative `λ` by weak duality, which makes it the safe side of the
//! pair under floating-point error; at the computed multipliers it matches
//! the primal value to rounding noise.

use crate::numeric::CompensatedSum;

pub(super) struct LpOutcome {
    /// Selected bipartite arc weight, halved: the LP optimum as achieved by
    /// the flow.
    pub value: f64,
    /// `D(λ)` at `lambda`; certified upper bound on the LP optimum.
    pub dual_value: f64,
    /// Per-vertex multipliers `λ_i ≥ 0`.
    pub lambda: Vec<f64>,
    /// Per input edge, the relaxation value `x_e ∈ {0, 1/2, 1}`.
    pub x: Vec<f64>,
}

struct Arc {
    to: u32,
    residual: i32,
    cost: f64,
}

struct Network {
    arcs: Vec<Arc>,
    adjacency: Vec<Vec<u32>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adjacency: vec![Vec::new(); nodes],
        }
    }

    /// Adds an arc and its zero-capacity reverse; the pair live at ids
    /// `2k` and `2k + 1`.
    fn add(&mut self, from: usize, to: usize, capacity: i32, cost: f64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc {
            to: to as u32,
            residual: capacity,
            cost,
        });
        self.arcs.push(Arc {
            to: from as u32,
            residual: 0,
            cost: -cost,
        });
        self.adjacency[from].push(id as u32);
        self.adjacency[to].push(id as u32 + 1);
        id
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed for a min-heap; node index breaks distance ties so the
        // search order (and therefore the returned maximiser) is
        // deterministic.
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Solves the relaxation over `m` vertices with the given caps and
/// positive-weight edges. Vertices are component-local indices; edges with
/// non-positive weight must be filtered out by the caller (the relaxation
/// zeroes them anyway).
pub(super) fn solve_fractional(m: usize, caps: &[u32], edges: &[(u32, u32, f64)]) -> LpOutcome {
    debug_assert_eq!(caps.len(), m);
    debug_assert!(edges.iter().all(|&(_, _, w)| w > 0.0));
    let dbg = std::env::var_os("GVDBG").is_some();
    let t0 = std::time::Instant::now();
    let mut augmentations = 0u32;

    let left = |i: u32| i as usize;
    let right = |i: u32| m + i as usize;
    let source = 2 * m;
    let sink = 2 * m + 1;
    let node_count = 2 * m + 2;

    let mut net = Network::new(node_count);
    // Middle arcs first, two per input edge, so edge k owns arc ids 4k and
    // 4k + 2.
    for &(u, v, w) in edges {
        net.add(left(u), right(v), 1, -w);
        net.add(left(v), right(u), 1, -w);
    }
    for (i, &c) in caps.iter().enumerate() {
        net.add(source, i, c as i32, 0.0);
        net.add(m + i, sink, c as i32, 0.0);
    }

    // Initial potentials: exact distances in the edgeless-flow residual
    // network, which is a layered DAG source → left → right → sink.
    let mut potential = vec![0.0f64; node_count];
    for &(u, v, w) in edges {
        let for_v = &mut potential[right(v)];
        *for_v = for_v.min(-w);
        let for_u = &mut potential[right(u)];
        *for_u = for_u.min(-w);
    }
    potential[sink] = (0..m)
        .map(|i| potential[right(i as u32)])
        .fold(0.0, f64::min);

    let mut dist = vec![f64::INFINITY; node_count];
    let mut parent_arc = vec![u32::MAX; node_count];
    let mut heap = std::collections::BinaryHeap::new();

    loop {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent_arc.iter_mut().for_each(|p| *p = u32::MAX);
        heap.clear();
        dist[source] = 0.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: source as u32,
        });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            let node = node as usize;
            if d > dist[node] {
                continue;
            }
            for &arc_id in &net.adjacency[node] {
                let arc = &net.arcs[arc_id as usize];
                if arc.residual <= 0 {
                    continue;
                }
                let to = arc.to as usize;
                let reduced = arc.cost + potential[node] - potential[to];
                debug_assert!(reduced >= -1e-7, "potential invariant violated: {reduced}");
                let candidate = d + reduced.max(0.0);
                if candidate < dist[to] {
                    dist[to] = candidate;
                    parent_arc[to] = arc_id;
                    heap.push(HeapEntry {
                        dist: candidate,
                        node: to as u32,
                    });
                }
            }
        }

        // Potential update caps unreached nodes at the largest finite
        // distance, which preserves the nonnegative-reduced-cost invariant.
        let finite_max = dist
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max);
        let cap_at = if dist[sink].is_finite() {
            dist[sink]
        } else {
            finite_max
        };
        for (p, &d) in potential.iter_mut().zip(dist.iter()) {
            *p += d.min(cap_at);
        }

        // The true cost of the found path is the updated sink potential
        // (the source potential is pinned at zero). Stop augmenting once
        // the path stops being profitable.
        if !dist[sink].is_finite() || potential[sink] >= 0.0 {
            break;
        }

        augmentations += 1;
        let mut bottleneck = i32::MAX;
        let mut node = sink;
        while node != source {
            let arc_id = parent_arc[node] as usize;
            bottleneck = bottleneck.min(net.arcs[arc_id].residual);
            node = net.arcs[arc_id ^ 1].to as usize;
        }
        let mut node = sink;
        while node != source {
            let arc_id = parent_arc[node] as usize;
            net.arcs[arc_id].residual -= bottleneck;
            net.arcs[arc_id ^ 1].residual += bottleneck;
            node = net.arcs[arc_id ^ 1].to as usize;
        }
    }

    let t_flow = t0.elapsed();
    // Selected arc weight, halved, plus the per-edge relaxation values.
    let mut selected = CompensatedSum::new();
    let mut x = Vec::with_capacity(edges.len());
    for (k, &(_, _, w)) in edges.iter().enumerate() {
        let forward_used = net.arcs[4 * k].residual == 0;
        let backward_used = net.arcs[4 * k + 2].residual == 0;
        let units = forward_used as i32 + backward_used as i32;
        if units > 0 {
            selected.add(w * units as f64);
        }
        x.push(units as f64 / 2.0);
    }
    let value = selected.value() / 2.0;

    // Symmetrised multipliers: the left potential prices a vertex's cap as
    // seen from the source side, the right potential from the sink side.
    let mut lambda: Vec<f64> = (0..m)
        .map(|i| (potential[left(i as u32)].max(0.0) + (-potential[right(i as u32)]).max(0.0)) / 2.0)
        .collect();
    sharpen_lambda(m, caps, edges, &mut lambda);
    let mut dual_value = dual_objective(caps, edges, &lambda);

    // Second candidate guided by complementary slackness: a tight dual puts
    // zero weight on vertices whose degree constraint is slack, so pin those
    // multipliers at zero and descend over the rest. Coordinate descent on
    // its own can stall with positive mass on a slack vertex (lowering it
    // helps only together with a simultaneous raise elsewhere); the pin
    // removes exactly that failure mode. Both candidates bound the optimum
    // for any nonnegative multipliers, so taking the smaller is always safe.
    let mut half_degrees = vec![0u32; m];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        let units = (x[k] * 2.0) as u32;
        half_degrees[u as usize] += units;
        half_degrees[v as usize] += units;
    }
    let frozen: Vec<bool> = (0..m).map(|i| half_degrees[i] < 2 * caps[i]).collect();
    if frozen.iter().any(|&f| f) {
        let mut pinned: Vec<f64> = lambda
            .iter()
            .zip(frozen.iter())
            .map(|(&l, &f)| if f { 0.0 } else { l })
            .collect();
        descend_lambda(m, caps, edges, &mut pinned, &frozen);
        let pinned_value = dual_objective(caps, edges, &pinned);
        if pinned_value < dual_value {
            dual_value = pinned_value;
            lambda = pinned;
        }
    }

    if dbg {
        eprintln!(
            "flow m={m} edges={} augment={augmentations} flow_ms={:.1} total_ms={:.1}",
            edges.len(),
            t_flow.as_secs_f64() * 1e3,
            t0.elapsed().as_secs_f64() * 1e3
        );
    }
    LpOutcome {
        value,
        dual_value,
        lambda,
        x,
    }
}

/// Coordinate descent on the dual objective: each step replaces `λ_i` by
/// the exact minimiser of `D` with the other multipliers fixed, which is
/// the `(c_i + 1)`-th largest of the incident `w_e − λ_j` values (zero
/// when no more than `c_i` of them are positive). Every step weakly lowers
/// `D`, so validity is never at risk; the point is tightness. The flow
/// potentials carry no information about parts of the network the search
/// never reached (cap-zero vertices, copies behind saturated source arcs),
/// and this pass repairs the resulting looseness.
fn sharpen_lambda(m: usize, caps: &[u32], edges: &[(u32, u32, f64)], lambda: &mut [f64]) {
    descend_lambda(m, caps, edges, lambda, &vec![false; m]);
}

/// The descent loop behind [`sharpen_lambda`]; `frozen` coordinates are
/// left untouched.
fn descend_lambda(
    m: usize,
    caps: &[u32],
    edges: &[(u32, u32, f64)],
    lambda: &mut [f64],
    frozen: &[bool],
) {
    let mut incident: Vec<Vec<(u32, f64)>> = vec![Vec::new(); m];
    for &(u, v, w) in edges {
        incident[u as usize].push((v, w));
        incident[v as usize].push((u, w));
    }
    let mut bases: Vec<f64> = Vec::new();
    for _ in 0..3 {
        for _ in 0..8 {
            let mut changed = false;
            for i in 0..m {
                if frozen[i] {
                    continue;
                }
                bases.clear();
                for &(j, w) in &incident[i] {
                    let b = w - lambda[j as usize];
                    if b > 0.0 {
                        bases.push(b);
                    }
                }
                let target = if bases.len() <= caps[i] as usize {
                    0.0
                } else {
                    bases.sort_unstable_by(|a, b| b.total_cmp(a));
                    bases[caps[i] as usize]
                };
                if target != lambda[i] {
                    lambda[i] = target;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !transfer_pass(caps, edges, &incident, lambda, frozen) {
            break;
        }
    }
}

/// Escape hatch for the ties that stall single-coordinate descent: for each
/// edge, minimise `D` along the line `λ_u + t, λ_v − t` exactly. `D` is
/// convex and piecewise linear in `t`, so the minimiser sits where the
/// slope changes sign; walking the sorted breakpoints finds it. Returns
/// whether any multiplier moved.
fn transfer_pass(
    caps: &[u32],
    edges: &[(u32, u32, f64)],
    incident: &[Vec<(u32, f64)>],
    lambda: &mut [f64],
    frozen: &[bool],
) -> bool {
    let mut moved = false;
    let mut events: Vec<f64> = Vec::new();
    for &(eu, ev, _) in edges {
        let (u, v) = (eu as usize, ev as usize);
        if frozen[u] || frozen[v] {
            continue;
        }
        let (a, b) = (lambda[u], lambda[v]);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        // Local slope at t → −a: the cap terms plus one −1 per slack term
        // on the u side that is active there; each breakpoint raises the
        // slope by one as t crosses it.
        events.clear();
        let mut slope = caps[u] as i64 - caps[v] as i64;
        for &(j, wj) in &incident[u] {
            if j == ev {
                continue;
            }
            let breakpoint = wj - lambda[j as usize] - a;
            if breakpoint > -a {
                slope -= 1;
                if breakpoint < b {
                    events.push(breakpoint);
                }
            }
        }
        for &(j, wj) in &incident[v] {
            if j == eu {
                continue;
            }
            let breakpoint = b + lambda[j as usize] - wj;
            if breakpoint > -a && breakpoint < b {
                events.push(breakpoint);
            } else if breakpoint <= -a {
                slope += 1;
            }
        }
        // Pick the far end of the minimising interval: flat stretches are
        // common here, and hopping across one hands the next coordinate
        // sweep a different tie structure to break. Equal-value moves are
        // accepted for the same reason; the objective never increases and
        // the outer loop is bounded, so there is no cycling risk.
        let target = if slope > 0 {
            -a
        } else {
            events.sort_unstable_by(f64::total_cmp);
            let mut target = b;
            for &t in &events {
                slope += 1;
                if slope > 0 {
                    target = t;
                    break;
                }
            }
            target
        };
        if target == 0.0 {
            continue;
        }
        let local = |t: f64| -> f64 {
            let mut s = caps[u] as f64 * (a + t) + caps[v] as f64 * (b - t);
            for &(j, wj) in &incident[u] {
                if j != ev {
                    s += (wj - lambda[j as usize] - (a + t)).max(0.0);
                }
            }
            for &(j, wj) in &incident[v] {
                if j != eu {
                    s += (wj - lambda[j as usize] - (b - t)).max(0.0);
                }
            }
            s
        };
        if local(target) <= local(0.0) {
            lambda[u] = a + target;
            lambda[v] = b - target;
            moved = true;
        }
    }
    moved
}

/// `D(λ) = Σ λ_i c_i + Σ_e (w_e − λ_u − λ_v)⁺`: an upper bound on the LP
/// optimum for any `λ ≥ 0`.
pub(super) fn dual_objective(caps: &[u32], edges: &[(u32, u32, f64)], lambda: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for (i, &c) in caps.iter().enumerate() {
        if c > 0 && lambda[i] != 0.0 {
            acc.add(lambda[i] * c as f64);
        }
    }
    for &(u, v, w) in edges {
        let slack = w - lambda[u as usize] - lambda[v as usize];
        if slack > 0.0 {
            acc.add(slack);
        }
    }
    acc.value()
}
