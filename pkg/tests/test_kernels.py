import numpy as np
import pytest

from coverlaw import kernels, lattice as lat
from coverlaw.cli import DATA

BACKENDS = kernels.backends()


def specs():
    out = [lat.boolean_spec(k) for k in (2, 4, 6)] + [lat.mo_spec(4), lat.benzene_spec()]
    for k in (1, 2, 3, 4):
        out.append(lat.load_lattice(DATA / "lattices" / f"pasted_counterexample_{k}.json"))
    return out


def _arrays(spec):
    L = spec if isinstance(spec, lat.OrthoLattice) else lat.lattice_from_dict(spec)
    return L


def test_selected_backend_is_known():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
@pytest.mark.parametrize("idx", range(9))
def test_backends_agree(name, idx):
    L = _arrays(specs()[idx])
    ref = BACKENDS["python"]
    k = BACKENDS[name]
    n = L.n
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[np.asarray(L.leq)] = 1
    np.testing.assert_array_equal(k.closure(adj), ref.closure(adj))
    m1, j1 = k.meet_join_tables(np.asarray(L.leq, dtype=np.uint8))
    m0, j0 = ref.meet_join_tables(np.asarray(L.leq, dtype=np.uint8))
    np.testing.assert_array_equal(m1, m0)
    np.testing.assert_array_equal(j1, j0)
    le = np.asarray(L.leq, dtype=np.uint8)
    ortho = np.asarray(L.ortho, dtype=np.int64)
    assert tuple(k.order_reversal_violation(le, ortho)) == \
        tuple(ref.order_reversal_violation(le, ortho))
    assert tuple(k.orthomodular_violation(le, m0, j0, ortho)) == \
        tuple(ref.orthomodular_violation(le, m0, j0, ortho))
    assert tuple(k.covering_violation(le, m0, j0, L.bottom)) == \
        tuple(ref.covering_violation(le, m0, j0, L.bottom))


def test_closure_of_chain():
    for k in BACKENDS.values():
        adj = np.eye(4, dtype=np.uint8)
        for i in range(3):
            adj[i, i + 1] = 1
        c = np.asarray(k.closure(adj))
        assert c[0, 3] and not c[3, 0]


def test_missing_join_marked():
    for k in BACKENDS.values():
        # two maximal elements: no join
        le = np.array([[1, 1, 1], [0, 1, 0], [0, 0, 1]], dtype=np.uint8)
        m, j = k.meet_join_tables(le)
        assert np.asarray(j)[1, 2] == -1
        assert np.asarray(m)[1, 2] == 0


def test_env_var_forces_python_backend():
    import os
    import subprocess
    import sys
    env = dict(os.environ, COVERLAW_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import coverlaw; print(coverlaw.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_pure_python_lattice_checks_agree(monkeypatch):
    L = lat.load_lattice(DATA / "lattices" / "pasted_counterexample_3.json")
    want = lat.check_covering_law(L).counterexample
    for fn in ("closure", "meet_join_tables", "order_reversal_violation",
               "orthomodular_violation", "covering_violation"):
        monkeypatch.setattr(kernels, fn, getattr(BACKENDS["python"], fn))
    L2 = lat.load_lattice(DATA / "lattices" / "pasted_counterexample_3.json")
    assert lat.check_covering_law(L2).counterexample == want
    assert np.array_equal(L2.join_table, L.join_table)
