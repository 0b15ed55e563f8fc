//! Set partition enumeration for cumulant-to-moment conversion.

/// All partitions of `{0..n}` as lists of blocks, enumerated in the
/// restricted-growth-string order (deterministic).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    // restricted growth strings: rgs[0] = 0, rgs[i] <= max(rgs[..i]) + 1
    let mut rgs = vec![0usize; n];
    loop {
        let n_blocks = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n_blocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(blocks);
        // advance
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Bell numbers for sanity checks.
pub fn bell_number(n: usize) -> usize {
    // triangle recurrence
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    row[0]
}
