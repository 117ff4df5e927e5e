"""Sparsification and color-guided refinement of the association map."""

import numpy as np
import pytest

from lotrain import (
    Coloring,
    ConsistencyError,
    NetworkLayout,
    ParameterError,
    dist_linf,
    generate_layout,
    refine,
    sparsify,
)


def layout_from(rrh, users, side=100.0):
    return NetworkLayout(side, np.asarray(rrh, float), np.asarray(users, float))


def test_strict_boundary():
    lay = layout_from([[0.0, 0.0]], [[10.0, 0.0], [9.9999999, 0.0], [0.0, 10.0]])
    assoc = sparsify(lay, 10.0)
    # users exactly on the ball boundary are not served
    assert assoc.served_users == ((1,),)
    assert assoc.serving_rrhs == ((), (0,), ())
    assert assoc.threshold == 10.0


def test_chebyshev_not_euclidean():
    # (7, 7) has Euclidean distance ~9.9 but Chebyshev distance 7
    lay = layout_from([[0.0, 0.0]], [[7.0, 7.0], [9.0, 1.0]])
    assert sparsify(lay, 8.0).served_users == ((0,),)


def test_threshold_domain():
    lay = generate_layout(3, 3, 10.0, seed=0)
    for bad in (0.0, -2.0):
        with pytest.raises(ParameterError):
            sparsify(lay, bad)


def test_empty_sides_are_legal():
    lay = layout_from([[0.0, 0.0]], [[90.0, 90.0]])
    assoc = sparsify(lay, 5.0)
    assert assoc.served_users == ((),)
    assert assoc.serving_rrhs == ((),)


def test_matches_brute_force_and_bipartite_consistency():
    rng = np.random.default_rng(42)
    for _ in range(150):
        n, k = int(rng.integers(1, 12)), int(rng.integers(1, 25))
        side = float(rng.uniform(10, 60))
        lay = generate_layout(n, k, side, seed=int(rng.integers(1 << 31)))
        r = float(rng.uniform(2, side))
        assoc = sparsify(lay, r)
        for i in range(n):
            expect = tuple(
                u for u in range(k) if dist_linf(lay.rrh_xy[i], lay.user_xy[u]) < r
            )
            assert assoc.served_users[i] == expect
            assert list(assoc.served_users[i]) == sorted(assoc.served_users[i])
        for u in range(k):
            assert assoc.serving_rrhs[u] == tuple(
                i for i in range(n) if u in assoc.served_users[i]
            )


# --------------------------------------------------------------- refinement

def test_refine_adds_closest_of_missing_color():
    # RRH serves user 0 (color 0); users 1, 2 share color 1 at distances 3, 5
    lay = layout_from([[0.0, 0.0]], [[1.0, 0.0], [3.0, 0.0], [5.0, 0.0]])
    assoc = sparsify(lay, 2.0)
    assert assoc.served_users == ((0,),)
    col = Coloring(np.array([0, 1, 1]), 2)
    ref = refine(assoc, lay, col)
    assert ref.served_users == ((0, 1),)
    assert ref.serving_rrhs == ((0,), (0,), ())


def test_refine_tie_breaks_to_lower_index():
    # users 2 and 1 both at Chebyshev distance 5 with the missing color
    lay = layout_from([[0.0, 0.0]], [[1.0, 1.0], [0.0, 5.0], [5.0, 0.0]])
    col = Coloring(np.array([0, 1, 1]), 2)
    ref = refine(sparsify(lay, 2.0), lay, col)
    assert ref.served_users == ((0, 1),)


def test_refine_no_missing_colors_is_identity():
    lay = layout_from([[0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
    assoc = sparsify(lay, 2.0)
    col = Coloring(np.array([0, 1]), 2)
    assert refine(assoc, lay, col).served_users == assoc.served_users


def test_refine_properties_against_brute_force():
    from lotrain import build_conflict_graph, dsatur

    rng = np.random.default_rng(5)
    for _ in range(100):
        n, k = int(rng.integers(1, 8)), int(rng.integers(2, 20))
        side = float(rng.uniform(20, 60))
        lay = generate_layout(n, k, side, seed=int(rng.integers(1 << 31)))
        r = float(rng.uniform(4, side / 2))
        assoc = sparsify(lay, r)
        col = dsatur(build_conflict_graph(assoc))
        ref = refine(assoc, lay, col)
        for i in range(n):
            before, after = set(assoc.served_users[i]), set(ref.served_users[i])
            assert before <= after  # never removes
            got = [int(col.colors[u]) for u in ref.served_users[i]]
            assert len(set(got)) == len(got)  # still one user per color
            assert len(after) == col.num_colors  # one user for every color
            for q in range(col.num_colors):
                if any(int(col.colors[u]) == q for u in before):
                    continue
                cls = [u for u in range(k) if int(col.colors[u]) == q]
                dists = [dist_linf(lay.rrh_xy[i], lay.user_xy[u]) for u in cls]
                best = min(zip(dists, cls))[1]  # min distance, then min index
                assert best in after
        # idempotent: nothing is missing the second time around
        assert refine(ref, lay, col).served_users == ref.served_users


def test_refine_rejects_same_colored_pair():
    lay = layout_from([[0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
    assoc = sparsify(lay, 2.0)
    with pytest.raises(ConsistencyError):
        refine(assoc, lay, Coloring(np.array([0, 0]), 1))


def test_refine_rejects_coverage_mismatch():
    lay = layout_from([[0.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
    assoc = sparsify(lay, 2.0)
    with pytest.raises(ConsistencyError):
        refine(assoc, lay, Coloring(np.array([0]), 1))
