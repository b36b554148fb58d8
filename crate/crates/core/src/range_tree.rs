//! Static layered range tree for closed-box counting in `k` dimensions.
//!
//! Layer `a` keeps its points sorted by coordinate `a`. A segment tree over
//! those positions stores, at every node larger than [`LEAF_SIZE`], a layer
//! for coordinate `a + 1` built from the node's points. The last coordinate
//! is answered by binary search. Small nodes are scanned linearly.
//! Query cost is `O(log^k n)`, storage `O(n log^(k-1) n)`.

const LEAF_SIZE: usize = 16;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct RangeTree {
    dims: usize,
    len: usize,
    root: Option<Layer>,
}

#[derive(Debug, Clone)]
struct Layer {
    axis: usize,
    /// Coordinate `axis` of every point, ascending.
    keys: Vec<f64>,
    /// Coordinates `axis + 1 ..` in the same order, `stride` per point.
    rest: Vec<f64>,
    stride: usize,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone)]
struct Node {
    lo: u32,
    hi: u32,
    left: u32,
    right: u32,
    assoc: Option<Box<Layer>>,
}

impl RangeTree {
    /// `coords` holds `dims` values per point.
    pub fn build(coords: &[f64], dims: usize) -> Self {
        assert!(dims > 0, "range tree needs at least one axis");
        assert_eq!(coords.len() % dims, 0);
        let len = coords.len() / dims;
        let root = (len > 0).then(|| Layer::build(coords, dims, (0..len as u32).collect(), 0));
        RangeTree { dims, len, root }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of points in the closed box `[lo, hi]`.
    pub fn count(&self, lo: &[f64], hi: &[f64]) -> usize {
        self.count_up_to(lo, hi, usize::MAX)
    }

    /// Like [`count`](Self::count) but may stop early once the count exceeds `cap`.
    /// The result is exact whenever it is `<= cap`.
    pub fn count_up_to(&self, lo: &[f64], hi: &[f64], cap: usize) -> usize {
        debug_assert_eq!(lo.len(), self.dims);
        debug_assert_eq!(hi.len(), self.dims);
        if lo.iter().zip(hi).any(|(a, b)| a > b) {
            return 0;
        }
        match &self.root {
            Some(layer) => {
                let mut total = 0;
                layer.count(lo, hi, cap, &mut total);
                total
            }
            None => 0,
        }
    }
}

impl Layer {
    fn build(coords: &[f64], dims: usize, mut idx: Vec<u32>, axis: usize) -> Layer {
        let key = |i: u32| coords[i as usize * dims + axis];
        idx.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        let keys: Vec<f64> = idx.iter().map(|&i| key(i)).collect();
        let stride = dims - axis - 1;
        let mut rest = Vec::with_capacity(idx.len() * stride);
        for &i in &idx {
            let base = i as usize * dims;
            rest.extend_from_slice(&coords[base + axis + 1..base + dims]);
        }
        let mut layer = Layer {
            axis,
            keys,
            rest,
            stride,
            nodes: Vec::new(),
        };
        if stride > 0 {
            layer.build_node(coords, dims, &idx, 0, idx.len());
        }
        layer
    }

    fn build_node(&mut self, coords: &[f64], dims: usize, idx: &[u32], lo: usize, hi: usize) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            lo: lo as u32,
            hi: hi as u32,
            left: NONE,
            right: NONE,
            assoc: None,
        });
        if hi - lo > LEAF_SIZE {
            let assoc = Layer::build(coords, dims, idx[lo..hi].to_vec(), self.axis + 1);
            let mid = lo + (hi - lo) / 2;
            let left = self.build_node(coords, dims, idx, lo, mid);
            let right = self.build_node(coords, dims, idx, mid, hi);
            let node = &mut self.nodes[id as usize];
            node.assoc = Some(Box::new(assoc));
            node.left = left;
            node.right = right;
        }
        id
    }

    fn count(&self, lo: &[f64], hi: &[f64], cap: usize, total: &mut usize) {
        let a = self.axis;
        let i = self.keys.partition_point(|&k| k < lo[a]);
        let j = self.keys.partition_point(|&k| k <= hi[a]);
        if i >= j {
            return;
        }
        if self.stride == 0 {
            *total += j - i;
            return;
        }
        self.count_node(0, i, j, lo, hi, cap, total);
    }

    #[allow(clippy::too_many_arguments)]
    fn count_node(
        &self,
        node: u32,
        i: usize,
        j: usize,
        lo: &[f64],
        hi: &[f64],
        cap: usize,
        total: &mut usize,
    ) {
        if *total > cap {
            return;
        }
        let n = &self.nodes[node as usize];
        let (nlo, nhi) = (n.lo as usize, n.hi as usize);
        if nhi <= i || nlo >= j {
            return;
        }
        if i <= nlo && nhi <= j {
            if let Some(assoc) = &n.assoc {
                assoc.count(lo, hi, cap, total);
                return;
            }
        }
        if n.left == NONE {
            self.scan(nlo.max(i), nhi.min(j), lo, hi, total);
            return;
        }
        self.count_node(n.left, i, j, lo, hi, cap, total);
        self.count_node(n.right, i, j, lo, hi, cap, total);
    }

    fn scan(&self, from: usize, to: usize, lo: &[f64], hi: &[f64], total: &mut usize) {
        let base = self.axis + 1;
        for pos in from..to {
            let row = &self.rest[pos * self.stride..(pos + 1) * self.stride];
            if row
                .iter()
                .enumerate()
                .all(|(k, x)| *x >= lo[base + k] && *x <= hi[base + k])
            {
                *total += 1;
            }
        }
    }
}
