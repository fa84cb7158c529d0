"""Both kernel backends must agree bit for bit."""

import pytest
from hypothesis import given, settings, strategies as st

from blockade import kernels
from blockade.committee import from_mask
from blockade.generate import random_matroid_pair
from strategies import tree_and_edges

BACKENDS = kernels.backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")


@needs_both
@given(tree_and_edges(max_n=40, open_leaves=True))
def test_engine_kernels_agree(te):
    tree, x = te
    py, c = BACKENDS["python"], BACKENDS["compiled"]
    args = (tree.parent_buf, tree.blue_mask, bytes(tree.mask(x)))
    assert bytes(py.overflow(*args)) == bytes(c.overflow(*args))
    assert bytes(py.flow(*args)) == bytes(c.flow(*args))
    largs = (tree.parent_buf, tree.open_mask, bytes(tree.mask(x)))
    assert bytes(py.leafless(*largs)) == bytes(c.leafless(*largs))
    fx_py = py.fixed_pair(tree.parent_buf, tree.blue_mask, tree.red_mask)
    fx_c = c.fixed_pair(tree.parent_buf, tree.blue_mask, tree.red_mask)
    assert (from_mask(fx_py[0]), from_mask(fx_py[1]), fx_py[2]) == \
        (from_mask(fx_c[0]), from_mask(fx_c[1]), fx_c[2])


@needs_both
@given(st.randoms(use_true_random=False), st.data())
@settings(max_examples=60)
def test_independence_kernels_agree(rng, data):
    pair = random_matroid_pair(rng, 5, 12, 4)
    tm = pair.m
    post, node_parent, masks, ranks, width, _ = tm._oracle
    for _ in range(20):
        mask = data.draw(st.integers(0, 2 ** width - 1))
        assert BACKENDS["python"].independent(post, node_parent, masks, ranks, mask) == \
            BACKENDS["compiled"].independent(post, node_parent, masks, ranks, mask)


def test_benchmark_runs_and_backends_agree():
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    rows = bench.run(60, 1, 3)
    assert [k for k, _ in rows] == ["overflow", "flow", "leafless", "fixed_pair", "independent"]
    assert all("python" in times for _, times in rows)
