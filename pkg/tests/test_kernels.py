import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from germen import kernels


def random_csr(rng, n_rows, dim, max_nnz):
    indptr = [0]
    indices, data = [], []
    for _ in range(n_rows):
        m = int(rng.integers(0, max_nnz + 1))
        cols = np.sort(rng.choice(dim, size=m, replace=False))
        indices.extend(cols)
        data.extend(rng.random(m))
        indptr.append(len(indices))
    return (np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64),
            np.array(data, dtype=np.float64))


@pytest.mark.parametrize("seed", range(5))
def test_row_dots_paths_agree_bitwise(seed):
    rng = np.random.default_rng(seed)
    indptr, indices, data = random_csr(rng, 50, 40, 12)
    dense = np.where(rng.random(40) < 0.5, rng.random(40), 0.0)
    a = kernels.row_dots_numpy(indptr, indices, data, dense)
    b = kernels.row_dots_numba(indptr, indices, data, dense)
    assert a.tobytes() == b.tobytes()
    ref = [sum(data[p] * dense[indices[p]] for p in range(indptr[r], indptr[r + 1])) for r in range(50)]
    np.testing.assert_allclose(a, ref, rtol=0, atol=1e-12)


def test_row_dots_empty():
    indptr = np.zeros(1, dtype=np.int64)
    empty_i = np.zeros(0, dtype=np.int64)
    empty_f = np.zeros(0)
    assert kernels.row_dots_numpy(indptr, empty_i, empty_f, np.zeros(3)).shape == (0,)
    assert kernels.row_dots_numba(indptr, empty_i, empty_f, np.zeros(3)).shape == (0,)


@settings(max_examples=50, deadline=None)
@given(hnp.arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(2, 6)),
                  elements=st.floats(0, 1)),
       st.integers(1, 3), st.randoms(use_true_random=False))
def test_itemset_supports_paths_agree(values, k, rnd):
    k = min(k, values.shape[1])
    cands = np.array([sorted(rnd.sample(range(values.shape[1]), k)) for _ in range(5)], dtype=np.int64)
    a = kernels.itemset_supports_numpy(values, cands)
    b = kernels.itemset_supports_numba(values, cands)
    assert a.tobytes() == b.tobytes()
    for c, s in zip(cands, a):
        expected = sum(min(row[j] for j in c) for row in values)
        assert s == pytest.approx(expected, abs=1e-12)


def _backend_under(env_extra):
    env = dict(os.environ, **env_extra)
    out = subprocess.run(
        [sys.executable, "-c", "from germen import kernels; print(kernels.backend())"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_under({"GERMEN_DISABLE_NUMBA": "1"}) == "numpy"
    assert _backend_under({"GERMEN_DISABLE_NUMBA": "0", "NUMBA_DISABLE_JIT": "0"}) == "numba"


def test_clustering_identical_under_both_backends(tmp_path):
    from germen.synthetic import blob_corpus, to_tsv

    corpus = tmp_path / "c.tsv"
    corpus.write_text(to_tsv(blob_corpus(30, 60, 3, seed=5)))
    outs = []
    for flag in ("0", "1"):
        state = tmp_path / f"s{flag}.graph"
        env = dict(os.environ, GERMEN_DISABLE_NUMBA=flag)
        subprocess.run([sys.executable, "-m", "germen", "cluster", "--state", str(state), str(corpus)],
                       env=env, check=True, capture_output=True)
        outs.append(state.read_bytes())
    assert outs[0] == outs[1]


def test_benchmark_script_runs():
    import pathlib

    script = pathlib.Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    out = subprocess.run(
        [sys.executable, str(script), "--rows", "200", "--dim", "100", "--objects", "50",
         "--variables", "20", "--candidates", "30", "--repeat", "1"],
        capture_output=True, text=True, check=True,
    ).stdout
    lines = out.splitlines()[1:]
    assert len(lines) == 2 and all(line.endswith("True") for line in lines)
