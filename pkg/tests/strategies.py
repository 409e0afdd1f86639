"""Hypothesis strategies for random LOTs."""

from hypothesis import strategies as st

from lothnn.lot import Edge, Lot


@st.composite
def lots(draw, min_n: int = 2, max_n: int = 7) -> Lot:
    n = draw(st.integers(min_n, max_n))
    names = [f"x{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        label = names[draw(st.integers(0, n - 1))]
        a, b = (names[i], names[j]) if draw(st.booleans()) else (names[j], names[i])
        edges.append(Edge(a, b, label))
    return Lot(tuple(names), tuple(edges))


def relabel(lot: Lot, perm: list[int]) -> Lot:
    """Rename x_i to x_perm[i]."""
    m = {v: f"x{perm[i]}" for i, v in enumerate(sorted(lot.vertices, key=lambda s: int(s[1:])))}
    return Lot(tuple(m.values()), tuple(Edge(m[e.iota], m[e.tau], m[e.label]) for e in lot.edges))
