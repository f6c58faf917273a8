//! Relabelling-invariant motif labels and symmetry counts.
//!
//! A motif is encoded as the matrix of pair codes under some vertex order,
//! followed by each vertex's sorted predicate signatures. The canonical label
//! is the lexicographically smallest encoding over all vertex orders that
//! keep vertices sorted by an isomorphism-invariant signature; this is the
//! same minimum an unrestricted permutation search would find up to the
//! choice of tie order, and is much cheaper for motifs of up to 8 vertices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{EdgeKind, MotifQuery};
use crate::attr::AttributeValue;

const DIRECTED: u8 = 1;
const FORBIDDEN: u8 = 2;
const UNDIRECTED: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        crate::io::hex(&self.0)
    }

    /// Label suitable for file names: the hex label, shortened with a hash
    /// suffix when long.
    pub fn file_stem(&self) -> String {
        let hex = self.to_hex();
        if hex.len() <= 48 {
            return hex;
        }
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(&self.0);
        format!("{}_{}", &hex[..32], crate::io::hex(&digest[..6]))
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if !s.len().is_multiple_of(2) {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalLabel)
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalLabel::from_hex(&s).ok_or_else(|| serde::de::Error::custom("invalid hex label"))
    }
}

struct Encoded {
    n: usize,
    codes: Vec<u8>,
    // Per vertex, sorted predicate signatures joined by 0x1e.
    preds: Vec<Vec<u8>>,
}

impl Encoded {
    fn new(q: &MotifQuery, with_predicates: bool) -> Self {
        let n = q.size();
        let mut codes = vec![0u8; n * n];
        for e in q.edges() {
            let (a, b) = (e.src, e.dst);
            match e.kind {
                EdgeKind::Directed => codes[a * n + b] |= DIRECTED,
                EdgeKind::Forbidden => codes[a * n + b] |= FORBIDDEN,
                EdgeKind::Undirected => {
                    codes[a * n + b] |= UNDIRECTED;
                    codes[b * n + a] |= UNDIRECTED;
                }
            }
        }
        let mut preds = vec![Vec::new(); n];
        if with_predicates {
            let mut sigs: Vec<Vec<Vec<u8>>> = vec![Vec::new(); n];
            for p in q.predicates() {
                let mut sig = Vec::new();
                sig.extend_from_slice(p.key.as_bytes());
                sig.push(0x1f);
                sig.extend_from_slice(p.op.symbol().as_bytes());
                sig.push(0x1f);
                sig.extend_from_slice(value_signature(&p.value).as_bytes());
                sigs[p.vertex].push(sig);
            }
            for (v, mut s) in sigs.into_iter().enumerate() {
                s.sort();
                preds[v] = s.join(&0x1e);
            }
        }
        Encoded { n, codes, preds }
    }

    fn code(&self, a: usize, b: usize) -> u8 {
        self.codes[a * self.n + b]
    }

    /// Per-vertex signature that any isomorphism must preserve.
    fn signature(&self, v: usize) -> (Vec<usize>, &[u8]) {
        let mut counts = vec![0usize; 6];
        for u in 0..self.n {
            let out = self.code(v, u);
            let inc = self.code(u, v);
            counts[0] += usize::from(out & DIRECTED != 0);
            counts[1] += usize::from(inc & DIRECTED != 0);
            counts[2] += usize::from(out & UNDIRECTED != 0);
            counts[3] += usize::from(out & FORBIDDEN != 0);
            counts[4] += usize::from(inc & FORBIDDEN != 0);
            counts[5] += usize::from(out | inc != 0);
        }
        (counts, &self.preds[v])
    }

    /// Vertices sorted by signature, with the class id of each sorted slot.
    fn classes(&self) -> (Vec<usize>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| self.signature(a).cmp(&self.signature(b)));
        let mut class = vec![0; self.n];
        for i in 1..self.n {
            class[i] = class[i - 1]
                + usize::from(self.signature(order[i]) != self.signature(order[i - 1]));
        }
        (order, class)
    }

    fn write(&self, perm: &[usize], out: &mut Vec<u8>, induced: bool) {
        out.clear();
        out.push(self.n as u8);
        out.push(u8::from(induced));
        for &a in perm {
            for &b in perm {
                if a != b {
                    out.push(self.code(a, b));
                }
            }
        }
        for &a in perm {
            out.extend_from_slice(&self.preds[a]);
            out.push(0xff);
        }
    }
}

fn value_signature(v: &AttributeValue) -> String {
    match v {
        AttributeValue::Str(s) => format!("s{s}"),
        AttributeValue::Int(i) => format!("i{i}"),
        AttributeValue::Float(x) => format!("f{}", crate::attr::format_float(*x)),
        AttributeValue::Bool(b) => format!("b{b}"),
    }
}

/// Visits every permutation that maps sorted slot `i` to a vertex in the same
/// signature class as `order[i]`.
fn for_each_class_permutation(
    order: &[usize],
    class: &[usize],
    mut visit: impl FnMut(&[usize]),
) {
    fn rec(
        i: usize,
        order: &[usize],
        class: &[usize],
        used: &mut [bool],
        perm: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if i == order.len() {
            visit(perm);
            return;
        }
        for j in 0..order.len() {
            if class[j] == class[i] && !used[j] {
                used[j] = true;
                perm.push(order[j]);
                rec(i + 1, order, class, used, perm, visit);
                perm.pop();
                used[j] = false;
            }
        }
    }
    let mut used = vec![false; order.len()];
    let mut perm = Vec::with_capacity(order.len());
    rec(0, order, class, &mut used, &mut perm, &mut visit);
}

/// A label shared by exactly the motifs that are equal up to renaming of
/// template vertices (edge constraints, predicates and the induced flag all
/// take part).
pub fn canonical_form(q: &MotifQuery) -> CanonicalLabel {
    let enc = Encoded::new(q, true);
    let (order, class) = enc.classes();
    let mut best: Option<Vec<u8>> = None;
    let mut buf = Vec::new();
    for_each_class_permutation(&order, &class, |perm| {
        enc.write(perm, &mut buf, q.induced());
        if best.as_ref().is_none_or(|b| buf < *b) {
            best = Some(buf.clone());
        }
    });
    CanonicalLabel(best.expect("motifs have at least two vertices"))
}

fn count_preserving(q: &MotifQuery, with_predicates: bool) -> u64 {
    let enc = Encoded::new(q, with_predicates);
    let n = enc.n;
    let (order, class) = enc.classes();
    let mut count = 0;
    for_each_class_permutation(&order, &class, |perm| {
        // perm maps order[i] -> perm[i]; check every pair code is preserved.
        let mut image = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            image[v] = perm[i];
        }
        let ok = (0..n).all(|a| (0..n).all(|b| enc.code(a, b) == enc.code(image[a], image[b])));
        if ok {
            count += 1;
        }
    });
    count
}

/// Number of vertex permutations that map the edge-constraint structure onto
/// itself. Predicates are ignored.
pub fn automorphism_count(q: &MotifQuery) -> u64 {
    count_preserving(q, false)
}

/// Like [`automorphism_count`], but permutations must also preserve each
/// vertex's predicates. Raw match counts are always a multiple of this.
pub fn symmetry_count(q: &MotifQuery) -> u64 {
    count_preserving(q, true)
}
