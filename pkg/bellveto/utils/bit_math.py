"""Integer helpers for pair counts and veto-count bit positions."""


def floor_log2(n: int) -> int:
    """⌊log₂ n⌋ for n ≥ 1."""
    if n < 1:
        raise ValueError(f"log2 needs n ≥ 1 (got {n})")
    return n.bit_length() - 1


def ceil_log2(n: int) -> int:
    """⌈log₂ n⌉ for n ≥ 1."""
    if n < 1:
        raise ValueError(f"log2 needs n ≥ 1 (got {n})")
    return (n - 1).bit_length()


def lowest_set_bit(k: int) -> int:
    """1-based index of the least significant set bit of k ≥ 1."""
    if k < 1:
        raise ValueError(f"k must be ≥ 1 (got {k})")
    return (k & -k).bit_length()


def max_iterations(n: int) -> int:
    """⌈1 + log₂ n⌉, the iteration bound of the iterative protocol."""
    return 1 + ceil_log2(n)
