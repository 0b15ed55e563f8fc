//! Permutation enumeration and inversion bookkeeping.

/// All permutations of `0..n` in lexicographic order.
///
/// The fixed enumeration order keeps every permutation sum bit-reproducible.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation in place
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Inverse permutation: `inv[pi[i]] = i`.
pub fn invert(pi: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; pi.len()];
    for (i, &p) in pi.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Number of inversion pairs `i < j` with `pi[i] > pi[j]`.
pub fn inversions(pi: &[usize]) -> usize {
    let n = pi.len();
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if pi[i] > pi[j] {
                count += 1;
            }
        }
    }
    count
}

/// Composition acting on positions: `(a ∘ b)[i] = a[b[i]]`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
