//! Random linear network coding over a delay-free DAG with two sources
//! (`S1`, `S2`), one receiver (`R`), unit-capacity edges and an additive
//! adversary on up to `z` edges.

use std::collections::VecDeque;
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;

pub const SOURCE1: &str = "S1";
pub const SOURCE2: &str = "S2";
pub const RECEIVER: &str = "R";

/// On-disk network description: `{"nodes": [...], "edges": [[tail, head], ...], "p": 257}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub p: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutProfile {
    #[serde(rename = "C1")]
    pub c1: usize,
    #[serde(rename = "C2")]
    pub c2: usize,
    #[serde(rename = "C")]
    pub c: usize,
}

/// A validated network.
#[derive(Clone, Debug)]
pub struct NetworkSpec {
    nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    field: Field,
    topo: Vec<usize>,
    cuts: CutProfile,
}

impl NetworkSpec {
    /// Validates the topology: `S1`, `S2` and `R` present, all edge endpoints
    /// known, acyclic, no edges into a source, and exactly `C` edges into `R`.
    pub fn new<A: AsRef<str>, B: AsRef<str>>(nodes: &[A], edges: &[(B, B)], p: u64) -> Result<NetworkSpec> {
        let nodes: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].contains(n) {
                return Err(Error::InvalidNetwork(format!("duplicate node {n:?}")));
            }
        }
        let index = |name: &str| {
            nodes.iter().position(|n| n == name).ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(t, h)| Ok((index(t.as_ref())?, index(h.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        let (s1, s2, r) = (index(SOURCE1)?, index(SOURCE2)?, index(RECEIVER)?);
        let field = Field::prime(p)?;
        let topo = topological_order(nodes.len(), &edges)
            .ok_or_else(|| Error::InvalidNetwork("graph has a cycle".into()))?;
        if let Some(&(t, h)) = edges.iter().find(|&&(_, h)| h == s1 || h == s2) {
            return Err(Error::InvalidNetwork(format!(
                "source {} has an incoming edge from {}",
                nodes[h], nodes[t]
            )));
        }
        let cuts = CutProfile {
            c1: max_flow(nodes.len(), &edges, &[s1], r),
            c2: max_flow(nodes.len(), &edges, &[s2], r),
            c: max_flow(nodes.len(), &edges, &[s1, s2], r),
        };
        let in_degree = edges.iter().filter(|&&(_, h)| h == r).count();
        if in_degree != cuts.c {
            return Err(Error::InvalidNetwork(format!(
                "exactly C = {} edges must reach the receiver, found {in_degree}",
                cuts.c
            )));
        }
        Ok(NetworkSpec { nodes, edges, field, topo, cuts })
    }

    pub fn from_json(json: &NetworkJson) -> Result<NetworkSpec> {
        let edges: Vec<(&str, &str)> =
            json.edges.iter().map(|[t, h]| (t.as_str(), h.as_str())).collect();
        NetworkSpec::new(&json.nodes, &edges, json.p)
    }

    pub fn from_json_str(s: &str) -> Result<NetworkSpec> {
        let json: NetworkJson =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("network JSON: {e}")))?;
        NetworkSpec::from_json(&json)
    }

    pub fn load(path: &Path) -> Result<NetworkSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        NetworkSpec::from_json_str(&text)
    }

    pub fn to_json(&self) -> NetworkJson {
        NetworkJson {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(t, h)| [self.nodes[t].clone(), self.nodes[h].clone()])
                .collect(),
            p: self.field.p(),
        }
    }

    /// Stand-in for the two-source example with `C1 = C2 = 4` and `C = 5`:
    /// each source has one private relay to `R` and three edges into a
    /// shared node `M`, which forwards on three edges to `R`. 13 edges.
    pub fn reference(p: u64) -> Result<NetworkSpec> {
        let mut edges = vec![("S1", "A"), ("A", "R")];
        edges.extend([("S1", "M"); 3]);
        edges.extend([("S2", "B"), ("B", "R")]);
        edges.extend([("S2", "M"); 3]);
        edges.extend([("M", "R"); 3]);
        NetworkSpec::new(&["S1", "S2", "A", "B", "M", "R"], &edges, p)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn cuts(&self) -> CutProfile {
        self.cuts
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes.iter().position(|n| n == name).ok_or_else(|| Error::UnknownNode(name.into()))
    }

    /// Indices of the edges into `R`, in edge-list order.
    pub fn receiver_edges(&self) -> Vec<usize> {
        let r = self.node_index(RECEIVER).expect("validated");
        (0..self.edges.len()).filter(|&e| self.edges[e].1 == r).collect()
    }
}

/// Max-flow with unit edge capacities from `sources` (joined by a super
/// source) to `sink`.
pub fn min_cut(spec: &NetworkSpec, sources: &[&str], sink: &str) -> Result<usize> {
    let srcs = sources.iter().map(|s| spec.node_index(s)).collect::<Result<Vec<_>>>()?;
    let sink = spec.node_index(sink)?;
    Ok(max_flow(spec.nodes.len(), &spec.edges, &srcs, sink))
}

fn max_flow(n: usize, edges: &[(usize, usize)], sources: &[usize], sink: usize) -> usize {
    let ss = n;
    let mut cap = vec![vec![0i64; n + 1]; n + 1];
    for &(t, h) in edges {
        cap[t][h] += 1;
    }
    for &s in sources {
        cap[ss][s] += i64::MAX / 4;
    }
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; n + 1];
        parent[ss] = ss;
        let mut queue = VecDeque::from([ss]);
        while let Some(u) = queue.pop_front() {
            for v in 0..=n {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            return flow;
        }
        let mut v = sink;
        while v != ss {
            let u = parent[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Kahn's algorithm, always taking the smallest ready node index.
fn topological_order(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, h) in edges {
        indeg[h] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &(t, h) in edges {
            if t == u {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.insert(h);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    None,
    /// `z` distinct edges chosen uniformly.
    RandomEdges,
    /// Exactly these edge indices.
    FixedEdges { edges: Vec<usize> },
    /// `z` distinct edges chosen uniformly among the receiver's in-edges.
    TargetedDownstream,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// Each attacked edge gets an independent uniform row.
    Uniform,
    /// One row per attacked edge, in attack order.
    Supplied(Mat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryPlan {
    pub z: usize,
    pub strategy: Strategy,
    pub payload: Payload,
}

impl AdversaryPlan {
    pub fn none() -> AdversaryPlan {
        AdversaryPlan { z: 0, strategy: Strategy::None, payload: Payload::Uniform }
    }

    pub fn random(z: usize) -> AdversaryPlan {
        AdversaryPlan { z, strategy: Strategy::RandomEdges, payload: Payload::Uniform }
    }

    pub fn fixed(z: usize, edges: Vec<usize>) -> AdversaryPlan {
        AdversaryPlan { z, strategy: Strategy::FixedEdges { edges }, payload: Payload::Uniform }
    }

    pub fn validate(&self, spec: &NetworkSpec) -> Result<()> {
        if let Strategy::FixedEdges { edges } = &self.strategy {
            if edges.len() > self.z {
                return Err(Error::Config(format!(
                    "adversary attacks {} edges but z = {}",
                    edges.len(),
                    self.z
                )));
            }
            if let Some(e) = edges.iter().find(|&&e| e >= spec.num_edges()) {
                return Err(Error::Config(format!("edge index {e} out of range")));
            }
            let mut sorted = edges.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != edges.len() {
                return Err(Error::Config("fixed edges repeat an edge".into()));
            }
        }
        Ok(())
    }

    fn choose_edges(&self, spec: &NetworkSpec, rng: &mut ChaCha8Rng) -> Vec<usize> {
        match &self.strategy {
            Strategy::None => Vec::new(),
            Strategy::RandomEdges => {
                let m = spec.num_edges();
                sample(rng, m, self.z.min(m)).into_vec()
            }
            Strategy::FixedEdges { edges } => edges.clone(),
            Strategy::TargetedDownstream => {
                let pool = spec.receiver_edges();
                let k = self.z.min(pool.len());
                sample(rng, pool.len(), k).into_iter().map(|i| pool[i]).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransmissionResult {
    pub y: Mat,
    pub t1: Mat,
    pub t2: Mat,
    pub e: Mat,
    pub attacked: Vec<usize>,
    pub seed: u64,
}

impl TransmissionResult {
    pub fn coefficient_transforms(&self) -> (&Mat, &Mat) {
        (&self.t1, &self.t2)
    }
}

/// Sends `M1` from `S1` and `M2` from `S2` through the network.
///
/// Edges are processed by topological position of their tail, ties broken
/// by edge-list order. Every edge out of a source carries a uniform random
/// combination of that source's rows; every other edge carries a uniform
/// random combination of its tail's incoming packets. An attacked edge has
/// the adversary's row added after coding. `Y` stacks the packets on `R`'s
/// in-edges in edge-list order.
pub fn transmit(
    spec: &NetworkSpec,
    m1: &Mat,
    m2: &Mat,
    adv: &AdversaryPlan,
    seed: u64,
) -> Result<TransmissionResult> {
    let f = &spec.field;
    if m1.field() != f || m2.field() != f {
        return Err(Error::ShapeMismatch("messages must be over the network's prime field".into()));
    }
    if m1.cols() != m2.cols() {
        return Err(Error::ShapeMismatch(format!(
            "message widths differ: {} vs {}",
            m1.cols(),
            m2.cols()
        )));
    }
    adv.validate(spec)?;
    let (n1, n2, w) = (m1.rows(), m2.rows(), m1.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attacked = adv.choose_edges(spec, &mut rng);
    let payload_rows = match &adv.payload {
        Payload::Uniform => Mat::random(f, attacked.len(), w, &mut rng),
        Payload::Supplied(p) => {
            if p.shape() != (attacked.len(), w) {
                return Err(Error::ShapeMismatch(format!(
                    "payload is {:?}, expected {:?}",
                    p.shape(),
                    (attacked.len(), w)
                )));
            }
            p.embed_into(f).map_err(|_| Error::ShapeMismatch("payload field".into()))?
        }
    };
    let stacked = Mat::vstack(&[m1, m2])?;
    let s1 = spec.node_index(SOURCE1)?;
    let s2 = spec.node_index(SOURCE2)?;

    // Per edge: global coding vector over (M1; M2) and the carried packet.
    let mut coding: Vec<Option<Mat>> = vec![None; spec.edges.len()];
    let mut packets: Vec<Option<Mat>> = vec![None; spec.edges.len()];
    for &node in &spec.topo {
        let incoming: Vec<usize> = (0..spec.edges.len()).filter(|&e| spec.edges[e].1 == node).collect();
        for e in (0..spec.edges.len()).filter(|&e| spec.edges[e].0 == node) {
            let (vec, mut packet) = if node == s1 || node == s2 {
                let c = Mat::random(f, 1, if node == s1 { n1 } else { n2 }, &mut rng);
                let zeros_left = Mat::zeros(f, 1, if node == s1 { 0 } else { n1 });
                let zeros_right = Mat::zeros(f, 1, if node == s1 { n2 } else { 0 });
                let vec = Mat::hstack(&[&zeros_left, &c, &zeros_right])?;
                let packet = vec.mul(&stacked)?;
                (vec, packet)
            } else {
                let mut vec = Mat::zeros(f, 1, n1 + n2);
                let mut packet = Mat::zeros(f, 1, w);
                for &i in &incoming {
                    let c = f.random(&mut rng);
                    let cv = coding[i].as_ref().expect("tail processed earlier");
                    let cp = packets[i].as_ref().expect("tail processed earlier");
                    vec = vec.add(&cv.scale(&c))?;
                    packet = packet.add(&cp.scale(&c))?;
                }
                (vec, packet)
            };
            if let Some(k) = attacked.iter().position(|&a| a == e) {
                packet = packet.add(&payload_rows.slice_rows(k..k + 1))?;
            }
            coding[e] = Some(vec);
            packets[e] = Some(packet);
        }
    }

    let into_r = spec.receiver_edges();
    let gather = |rows: &[Option<Mat>], width: usize| -> Result<Mat> {
        if into_r.is_empty() {
            return Ok(Mat::zeros(f, 0, width));
        }
        let parts: Vec<&Mat> = into_r.iter().map(|&e| rows[e].as_ref().expect("processed")).collect();
        Mat::vstack(&parts)
    };
    let y = gather(&packets, w)?;
    let t = gather(&coding, n1 + n2)?;
    let t1 = t.slice_cols(0..n1);
    let t2 = t.slice_cols(n1..n1 + n2);
    let e = y.sub(&t.mul(&stacked)?)?;
    debug_assert!(e.rank() <= attacked.len());
    Ok(TransmissionResult { y, t1, t2, e, attacked, seed })
}

/// Per-trial seed derived from a base seed (SplitMix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
