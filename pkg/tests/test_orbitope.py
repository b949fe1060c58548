"""Orbitope membership, projection, linear maximization, and SDPA export."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import schurhorn as sh
from schurhorn.orbitope import (OrbitopeError, OrbitopeSpec, contains,
                                export_sdpa, linmax_orbitope, make_orbitope,
                                parse_sdpa, project_orbitope,
                                project_spectrum, s_ell)
from oracles import (project_spectrum_oracle, random_orthogonal,
                     random_symmetric)


def test_spec_validation():
    spec = OrbitopeSpec(3, np.array([2.0, 1.0, 0.0]))
    assert spec.trace == 3.0
    with pytest.raises(OrbitopeError):
        OrbitopeSpec(3, np.array([1.0, 2.0, 0.0]))  # not descending
    with pytest.raises(OrbitopeError):
        OrbitopeSpec(3, np.array([1.0, 0.0]))  # wrong length


def test_spec_distinct_groups():
    vals, mults = OrbitopeSpec(4, np.array([2.0, 2.0, 0.0, 0.0])).distinct()
    assert np.allclose(vals, [2.0, 0.0])
    assert list(mults) == [2, 2]


def test_make_orbitope_clique():
    # Shifted clique spectrum {k-1, -1, ..., -1} - gamma with gamma = -1:
    # one eigenvalue k, the rest snap to the padding zeros.
    orb = make_orbitope(sh.gen_clique(4), -1.0, 7)
    assert np.allclose(orb.spectrum, [4.0, 0, 0, 0, 0, 0, 0])
    orb2 = make_orbitope(sh.gen_clebsch(), 1.0, 20)
    assert np.allclose(orb2.spectrum, [4.0] + [0.0] * 14 + [-4.0] * 5)
    with pytest.raises(OrbitopeError):
        make_orbitope(sh.gen_clique(4), -1.0, 3)


def test_s_ell():
    a = np.diag([3.0, 1.0, -2.0])
    assert s_ell(a, 1) == pytest.approx(3.0)
    assert s_ell(a, 2) == pytest.approx(4.0)
    assert s_ell(a, 3) == pytest.approx(2.0)
    with pytest.raises(OrbitopeError):
        s_ell(a, 0)


def test_contains_members_and_nonmembers():
    rng = np.random.default_rng(0)
    spectrum = np.array([3.0, 1.0, 0.0, 0.0, -1.0])
    orb = OrbitopeSpec(5, spectrum)
    assert contains(orb, np.diag(spectrum))
    q = random_orthogonal(rng, 5)
    assert contains(orb, (q * spectrum) @ q.T)
    # Convex combinations stay inside.
    q2 = random_orthogonal(rng, 5)
    mix = 0.3 * (q * spectrum) @ q.T + 0.7 * (q2 * spectrum) @ q2.T
    assert contains(orb, mix)
    assert not contains(orb, np.diag(spectrum) + np.eye(5))  # trace off
    bad = np.diag([4.0, 0.0, 0.0, 0.0, -1.0])  # right trace, s_1 too big
    assert not contains(orb, bad)
    with pytest.raises(OrbitopeError):
        contains(orb, np.eye(4))


def test_project_spectrum_known_case():
    # Projecting (3, 1) onto the majorization polytope of (2, 2): the
    # trace is right but the first prefix sum must drop to 2.
    y = project_spectrum(np.array([3.0, 1.0]), np.array([2.0, 2.0]))
    assert np.allclose(y, [2.0, 2.0])
    # Already feasible input is a fixed point.
    w = np.array([1.5, 0.5, 0.0])
    lam = np.array([2.0, 1.0, -1.0])
    assert np.allclose(project_spectrum(w, lam), w)


def test_project_spectrum_input_validation():
    with pytest.raises(OrbitopeError):
        project_spectrum(np.array([1.0, 2.0]), np.array([2.0, 1.0]))
    with pytest.raises(OrbitopeError):
        project_spectrum(np.array([2.0, 1.0]), np.array([1.0, 2.0]))
    with pytest.raises(OrbitopeError):
        project_spectrum(np.array([2.0, 1.0]), np.array([1.0]))


def test_project_spectrum_against_active_set_oracle():
    rng = np.random.default_rng(42)
    for _ in range(300):
        n = int(rng.integers(1, 8))
        w = np.sort(rng.standard_normal(n) * 3)[::-1]
        lam = np.sort(rng.standard_normal(n) * 3)[::-1]
        got = project_spectrum(w, lam)
        want = project_spectrum_oracle(w, lam)
        assert np.allclose(got, want, atol=1e-8), (w, lam)
        # Output stays sorted and feasible.
        assert np.all(np.diff(got) <= 1e-10)
        assert np.all(np.cumsum(got)[:-1] <= np.cumsum(lam)[:-1] + 1e-9)
        assert np.cumsum(got)[-1] == pytest.approx(np.sum(lam), abs=1e-9)


def test_project_orbitope_properties():
    rng = np.random.default_rng(7)
    orb = make_orbitope(sh.gen_clique(5), -1.0, 9)
    for _ in range(50):
        x = random_symmetric(rng, 9, scale=3.0)
        px = project_orbitope(orb, x)
        assert contains(orb, px, tol=1e-7)
        # Idempotence.
        assert np.allclose(project_orbitope(orb, px), px, atol=1e-8)
        # Fixed point on members.
        q = random_orthogonal(rng, 9)
        member = (q * orb.spectrum) @ q.T
        assert np.allclose(project_orbitope(orb, member), member, atol=1e-8)
    # Nonexpansiveness.
    for _ in range(50):
        x = random_symmetric(rng, 9, scale=3.0)
        y = random_symmetric(rng, 9, scale=3.0)
        dp = np.linalg.norm(project_orbitope(orb, x) - project_orbitope(orb, y), "fro")
        assert dp <= np.linalg.norm(x - y, "fro") + 1e-9


def test_project_orbitope_minimizes_distance():
    # The projection is at least as close as any member we can sample.
    rng = np.random.default_rng(11)
    orb = OrbitopeSpec(6, np.sort(rng.standard_normal(6))[::-1])
    x = random_symmetric(rng, 6, scale=2.0)
    d_star = np.linalg.norm(project_orbitope(orb, x) - x, "fro")
    for _ in range(200):
        q = random_orthogonal(rng, 6)
        member = (q * orb.spectrum) @ q.T
        assert d_star <= np.linalg.norm(member - x, "fro") + 1e-9


def test_linmax_orbitope():
    rng = np.random.default_rng(3)
    orb = OrbitopeSpec(6, np.array([2.0, 1.0, 0.0, 0.0, -1.0, -2.0]))
    c = random_symmetric(rng, 6)
    value, argmax = linmax_orbitope(orb, c)
    assert contains(orb, argmax, tol=1e-8)
    assert np.sum(c * argmax) == pytest.approx(value, abs=1e-9)
    # The sorted-spectra inner product dominates sampled members.
    for _ in range(100):
        q = random_orthogonal(rng, 6)
        member = (q * orb.spectrum) @ q.T
        assert np.sum(c * member) <= value + 1e-9
    with pytest.raises(OrbitopeError):
        linmax_orbitope(orb, np.eye(5))


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (6,), elements=st.floats(-5, 5)),
       arrays(np.float64, (6,), elements=st.floats(-5, 5)))
def test_projection_feasibility_property(w, lam):
    w = np.sort(w)[::-1]
    lam = np.sort(lam)[::-1]
    y = project_spectrum(w, lam)
    assert np.all(np.cumsum(y)[:-1] <= np.cumsum(lam)[:-1] + 1e-8)
    assert np.cumsum(y)[-1] == pytest.approx(np.sum(lam), abs=1e-8)
    # Projection moves nothing when w is already feasible.
    if np.all(np.cumsum(w)[:-1] <= np.cumsum(lam)[:-1]) \
            and abs(np.sum(w) - np.sum(lam)) < 1e-12:
        assert np.allclose(y, w, atol=1e-8)


def _lifted_truth_blocks(instance, gamma):
    """PSD blocks Y_i certifying that the planted optimum is feasible for
    the exported SDP."""
    from schurhorn.solver import planted_truth
    target = planted_truth(instance, gamma)
    orb = make_orbitope(instance.planted, gamma, instance.observed.n)
    lams, mults = orb.distinct()
    vals, vecs = np.linalg.eigh(target)
    blocks = []
    for lam, mult in zip(lams, mults):
        sel = np.abs(vals - lam) < 1e-6
        assert sel.sum() == mult
        v = vecs[:, sel]
        blocks.append(v @ v.T)
    return lams, mults, blocks


def test_sdpa_export_and_parse(tmp_path):
    instance = sh.plant(sh.gen_clique(4), 7, 0.3, seed=5)
    path = tmp_path / "lift.dat-s"
    export_sdpa(instance, -1.0, path)
    n_cons, sizes, rhs, entries = parse_sdpa(path)
    n = 7
    orb = make_orbitope(instance.planted, -1.0, n)
    lams, mults = orb.distinct()
    q = len(lams)
    a_obs = instance.observed.adjacency()
    n_nonedges = int(np.sum(a_obs[np.triu_indices(n, 1)] == 0))
    assert sizes == [n] * q
    assert n_cons == n * (n + 1) // 2 + q + n_nonedges
    assert len(rhs) == n_cons

    # Semantic check: the lifted planted optimum satisfies every constraint
    # and the objective evaluates to <A_obs, A*>.
    lams, mults, blocks = _lifted_truth_blocks(instance, -1.0)
    mats = {}
    for matno, blk, i, j, val in entries:
        m = mats.setdefault(matno, [np.zeros((n, n)) for _ in range(q)])
        m[blk - 1][i - 1, j - 1] = val
        m[blk - 1][j - 1, i - 1] = val
    for con in range(1, n_cons + 1):
        lhs = sum(np.sum(mats.get(con, [np.zeros((n, n))] * q)[b] * blocks[b])
                  for b in range(q))
        assert lhs == pytest.approx(rhs[con - 1], abs=1e-8), con
    a_star = sum(lam * blk for lam, blk in zip(lams, blocks))
    obj = sum(np.sum(mats[0][b] * blocks[b]) for b in range(q)) if 0 in mats else 0.0
    assert obj == pytest.approx(np.sum(a_obs * a_star), abs=1e-8)


def test_parse_sdpa_rejects_malformed(tmp_path):
    path = tmp_path / "bad.dat-s"
    path.write_text("2\n1\n3 3\n1.0 2.0\n")  # block-size line too long
    with pytest.raises(OrbitopeError):
        parse_sdpa(path)
