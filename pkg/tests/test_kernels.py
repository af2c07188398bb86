import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ncreduce import kernels

import oracles

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba backend not active")

primes = st.sampled_from([2, 3, 5, 7, 101, 2_147_483_647])
mats = st.tuples(st.integers(0, 7), st.integers(0, 7)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(-50, 50)))


@settings(max_examples=200, deadline=None)
@given(mats, primes)
def test_numpy_rref_matches_dense_oracle(a, p):
    rows, piv = kernels._rref_mod_p_numpy(a, p)
    assert len(piv) == kernels._rank_mod_p_numpy(a, p) == oracles.dense_rank(a.tolist(), p)
    for i, c in enumerate(piv):
        assert rows[i, c] == 1
        assert all(rows[k, c] == 0 for k in range(len(piv)) if k != i)


@needs_numba
@settings(max_examples=200, deadline=None)
@given(mats, primes)
def test_numba_matches_numpy(a, p):
    r1, p1 = kernels.rref_mod_p(a, p)
    r2, p2 = kernels._rref_mod_p_numpy(a, p)
    assert np.array_equal(r1, r2) and np.array_equal(p1, p2)
    assert kernels.rank_mod_p(a, p) == kernels._rank_mod_p_numpy(a, p)


@settings(max_examples=100, deadline=None)
@given(mats, st.sampled_from([2, 3, 7]))
def test_nullspace(a, p):
    basis = kernels.nullspace_mod_p(a, p)
    assert basis.shape == (a.shape[1] - oracles.dense_rank(a.tolist(), p), a.shape[1])
    if basis.size:
        assert not ((a @ basis.T) % p).any()


def test_env_flag_selects_numpy():
    code = ("from ncreduce import kernels, presentation, hilbert_dims, reduce_presentation;"
            "P = presentation('xyz', lambda x, y, z: [x*y - 3*y*x, y*z - z*y, x*z - 2*z*x]);"
            "print(kernels.backend(), hilbert_dims(reduce_presentation(P, 5), 5).dims)")
    env = dict(os.environ, NCREDUCE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, dims = out.stdout.split(" ", 1)
    assert backend == "numpy"
    assert dims.strip() == "(1, 3, 6, 10, 15, 21)"
