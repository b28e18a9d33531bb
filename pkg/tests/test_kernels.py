import random
import subprocess
import sys

import pytest

from fthresh.kernels import BACKEND, _box_py, available_backends, make_box

PRIMES = [2, 3, 5, 7, 13, 17, 251]


def truncated_product(a, b, p, widths):
    out = {}
    for (i, j), c in a.items():
        for (u, v), d in b.items():
            t = j + v
            if t < len(widths) and i + u < widths[t]:
                key = (i + u, t)
                out[key] = (out.get(key, 0) + c * d) % p
    return {k: c for k, c in out.items() if c}


def random_terms(rng, p, span, n):
    return {(rng.randrange(span), rng.randrange(span)): rng.randrange(1, p) for _ in range(n)}


def staircase(rng, rows):
    widths = sorted((rng.randint(1, 90) for _ in range(rows)), reverse=True)
    return widths


@pytest.mark.parametrize("backend", available_backends())
@pytest.mark.parametrize("p", PRIMES)
def test_box_matches_sparse_product(backend, p):
    rng = random.Random(p)
    for _ in range(5):
        widths = staircase(rng, rng.randint(1, 40))
        box = make_box(p, widths, backend)
        acc = {(0, 0): 1}
        box.set_terms(acc.items())
        for _ in range(6):
            g = random_terms(rng, p, 6, rng.randint(1, 5))
            box.mul_terms(g.items())
            acc = truncated_product(acc, g, p, widths)
            assert box.to_terms() == acc
            assert box.nnz() == len(acc)
            assert box.is_zero() == (not acc)


@pytest.mark.parametrize("backend", available_backends())
def test_copy_is_independent(backend):
    box = make_box(3, [5, 5, 5], backend)
    box.set_terms([((0, 0), 1)])
    twin = box.copy()
    box.mul_terms([((1, 0), 2)])
    assert twin.to_terms() == {(0, 0): 1}
    assert box.to_terms() == {(1, 0): 2}


def test_backends_agree_on_long_products():
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    rng = random.Random(99)
    for p in (2, 3, 7):
        widths = [200] * 150 + [60] * 50
        boxes = [make_box(p, widths, be) for be in available_backends()]
        for b in boxes:
            b.set_terms([((0, 0), 1)])
        for _ in range(40):
            g = list(random_terms(rng, p, 5, 4).items())
            for b in boxes:
                b.mul_terms(g)
        assert boxes[0].to_terms() == boxes[1].to_terms()


def test_large_prime_uses_python_box():
    assert isinstance(make_box(257, [3, 3], BACKEND), _box_py.Box)


def test_pure_python_switch():
    code = "import fthresh.kernels as k; print(k.BACKEND, k.available_backends())"
    env = {"FTHRESH_PURE_PYTHON": "1", "PATH": ""}
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.split()[0] == "python"
