//! Unshuffle and permutation enumeration.
//!
//! Sign convention: a permutation is the sequence `(sigma(1), ..., sigma(m))`
//! where `sigma(j)` is the index of the element placed onto position `j`
//! (direct left action); its sign is the parity of the inversion count.
//! Unshuffles `S^k_m` are enumerated as k-subsets in lexicographic order with
//! the complement block ascending, so failure witnesses are reproducible.

/// One unshuffle permutation of `{0..m}`: ascending `head` of length k,
/// ascending `tail` holding the complement, and the permutation sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unshuffle {
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
    pub sign: i8,
}

/// All unshuffles in `S^k_m`, i.e. permutations ascending on the first `k`
/// and the last `m - k` positions, in lexicographic order of the head.
pub fn unshuffles(m: usize, k: usize) -> Vec<Unshuffle> {
    assert!(k <= m, "unshuffle head cannot exceed the word");
    combinations(m, k)
        .into_iter()
        .map(|head| {
            let mut tail = Vec::with_capacity(m - k);
            let mut it = head.iter().copied().peekable();
            for v in 0..m {
                if it.peek() == Some(&v) {
                    it.next();
                } else {
                    tail.push(v);
                }
            }
            // inversions are exactly the cross pairs (h, t) with h > t
            let mut inv = 0usize;
            for &h in &head {
                for &t in &tail {
                    if h > t {
                        inv += 1;
                    }
                }
            }
            Unshuffle {
                head,
                tail,
                sign: if inv.is_multiple_of(2) { 1 } else { -1 },
            }
        })
        .collect()
}

/// Parity of a permutation given as the sequence of chosen indices.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All permutations of `{0..n}` with their signs (lexicographic order).
pub fn permutations_with_signs(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    fn rec(
        out: &mut Vec<(Vec<usize>, i8)>,
        chosen: &mut Vec<usize>,
        remaining: &mut Vec<usize>,
        sign: i8,
    ) {
        if remaining.is_empty() {
            out.push((chosen.clone(), sign));
            return;
        }
        for p in 0..remaining.len() {
            let v = remaining.remove(p);
            chosen.push(v);
            // picking position p leaves p smaller elements for later: p inversions
            let s = if p % 2 == 0 { sign } else { -sign };
            rec(out, chosen, remaining, s);
            chosen.pop();
            remaining.insert(p, v);
        }
    }
    rec(&mut out, &mut chosen, &mut remaining, 1);
    out
}

/// All strictly increasing `k`-tuples drawn from `{0..n}`.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        if k == 0 {
            break;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Binomial coefficient as u64 (sizes here are desk-scale).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits u64 at desk scale")
}
