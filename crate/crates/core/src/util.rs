//! Small helpers shared by the search and solver modules.

/// Iterates over all `arity`-tuples over `0..n` in lexicographic order.
///
/// The i-th yielded tuple has mixed-radix index i with the first coordinate
/// most significant, matching [`tuple_index`].
pub(crate) fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(arity as u32).unwrap_or(0);
    (0..total).map(move |idx| tuple_at(idx, n, arity))
}

pub(crate) fn tuple_at(mut idx: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

pub(crate) fn tuple_index(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn mask_of(values: impl IntoIterator<Item = usize>) -> u64 {
    values.into_iter().fold(0, |m, v| m | bit(v))
}

/// Elements of a mask in ascending order.
pub(crate) fn mask_values(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn single_value(m: u64) -> Option<usize> {
    (m.count_ones() == 1).then(|| m.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_index_inverts_tuple_at() {
        for (i, t) in tuples(3, 3).enumerate() {
            assert_eq!(tuple_index(&t, 3), i);
        }
        assert_eq!(tuples(2, 3).count(), 8);
        assert_eq!(tuples(2, 2).collect::<Vec<_>>()[2], vec![1, 0]);
    }

    #[test]
    fn masks() {
        assert_eq!(mask_values(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(single_value(0b100), Some(2));
        assert_eq!(single_value(0b101), None);
        assert_eq!(full_mask(64), u64::MAX);
    }
}
