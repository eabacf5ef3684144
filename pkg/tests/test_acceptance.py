"""End-to-end acceptance suite.

Each test covers one numbered criterion at its stated tolerance and prints
one PASS/FAIL line (visible with ``pytest -s`` or on failure).
"""

import math
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from markovgibbs import (
    GibbsChain,
    automorphisms,
    char_poly_family_equal,
    counterexample_matrix,
    cycle_intersection_condition,
    cycle_sum,
    cylinder_measure,
    gibbs_ratio_bounds,
    induce_conjugacy,
    ks_entropy,
    normalize,
    perron,
    pressure,
    pressure_derivative,
    reconstruct_word,
    sampled_distinct_fraction,
    simple_cycles,
    snr_certificate,
    spectral_twin_chain,
    spectrum_curve,
    structure,
    topological_entropy,
    total_amalgamation,
)
from markovgibbs.rigidity import ConjugacyObstruction
from markovgibbs.shiftcore import _word_rows

from conftest import (
    FIXTURE_VALUES,
    random_chain_with_distinct_values,
    random_potential,
    random_primitive_matrix,
)


@contextmanager
def criterion(number, label):
    try:
        yield
    except Exception:
        print(f"criterion {number} [{label}]: FAIL")
        raise
    print(f"criterion {number} [{label}]: PASS")


def sample_chains(seed=0):
    """200 random potentials on the 4-symbol matrix plus 200 across 5 random
    primitive matrices with at most 6 symbols."""
    rng = np.random.default_rng(seed)
    four = counterexample_matrix()
    samples = [(four, random_potential(rng, four)) for _ in range(200)]
    for _ in range(5):
        matrix = random_primitive_matrix(rng, int(rng.integers(3, 7)), density=0.35)
        samples.extend((matrix, random_potential(rng, matrix)) for _ in range(40))
    return samples


@pytest.fixture(scope="module")
def normalized_samples():
    return [(matrix, pot, normalize(pot)) for matrix, pot in sample_chains()]


@pytest.fixture(scope="module")
def fixture_chain_module():
    return GibbsChain.from_stochastic(counterexample_matrix(), FIXTURE_VALUES)


def test_criterion_1_stochasticization(normalized_samples):
    with criterion(1, "column sums and unit root"):
        for _, _, (chain, _) in normalized_samples:
            assert np.abs(chain.q.sum(axis=0) - 1.0).max() <= 1e-12
            assert abs(perron(chain.q).root - 1.0) <= 1e-12


def level_measures(chain, length):
    rows = _word_rows(chain.base, length)
    if length == 1:
        return rows, chain.pi.copy()
    heads = rows[:, :-1] - 1
    tails = rows[:, 1:] - 1
    return rows, chain.q[heads, tails].prod(axis=1) * chain.pi[rows[:, -1] - 1]


def test_criterion_2_measure_consistency(normalized_samples):
    with criterion(2, "shift invariance, level sums, ratio stability"):
        rng = np.random.default_rng(99)
        for matrix, pot, (chain, data) in normalized_samples:
            powers = (matrix.n + 1) ** np.arange(7, -1, -1, dtype=np.int64)
            previous_rows, previous_mu = None, None
            for length in range(1, 9):
                rows, mu = level_measures(chain, length)
                assert abs(mu.sum() - 1.0) <= 1e-12
                for k in rng.integers(0, len(rows), size=3):
                    word = tuple(int(s) for s in rows[k])
                    assert cylinder_measure(chain, word) == pytest.approx(
                        float(mu[k]), abs=1e-15
                    )
                if previous_rows is not None:
                    # sum the one-symbol extensions back onto each word
                    pad = powers[-previous_rows.shape[1]:]
                    codes_prev = previous_rows @ pad
                    suffix_codes = rows[:, 1:] @ pad
                    position = np.searchsorted(codes_prev, suffix_codes)
                    gathered = np.zeros(len(previous_rows))
                    np.add.at(gathered, position, mu)
                    assert np.abs(gathered - previous_mu).max() <= 1e-12
                previous_rows, previous_mu = rows, mu
            log_pressure = math.log(data.root)
            lo6, hi6 = gibbs_ratio_bounds(chain, pot, log_pressure, max_len=6)
            lo10, hi10 = gibbs_ratio_bounds(chain, pot, log_pressure, max_len=10)
            assert 0 < lo10 and hi10 < math.inf
            assert abs(lo10 - lo6) <= 0.1 * lo6
            assert abs(hi10 - hi6) <= 0.1 * hi6


def random_admissible_tuple(rng):
    """Column entries (a1, a2, a3, b1, b2), floored away from 0 and from the
    degenerate locus a2 == a3 * b1."""
    while True:
        a = rng.uniform(0.1, 1.0, size=3)
        a /= a.sum()
        b1 = rng.uniform(0.1, 0.9)
        if a.min() < 0.1:
            continue
        if abs(a[1] - a[2] * b1) < 1e-3:
            continue
        return float(a[0]), float(a[1]), float(a[2]), b1, 1.0 - b1


def make_chain(a1, a2, a3, b1, b2):
    one = Fraction(1) if isinstance(a1, Fraction) else 1.0
    return GibbsChain.from_stochastic(
        counterexample_matrix(),
        {
            (2, 1): one,
            (1, 3): one,
            (1, 2): a1,
            (3, 2): a2,
            (4, 2): a3,
            (1, 4): b1,
            (2, 4): b2,
        },
    )


def test_criterion_3_twin_reproduction_floating():
    with criterion(3, "twin pairs: polynomials, cycle gap, spectra (floating)"):
        rng = np.random.default_rng(12)
        grid = np.arange(-3.0, 3.01, 0.25)
        for _ in range(100):
            a1, a2, a3, b1, b2 = random_admissible_tuple(rng)
            chain = make_chain(a1, a2, a3, b1, b2)
            twin = spectral_twin_chain(chain)
            equal, _ = char_poly_family_equal(chain, twin, q_grid=grid, tol=1e-10)
            assert equal
            gap = abs(cycle_sum(chain, (1, 3, 2, 1)) - cycle_sum(twin, (1, 3, 2, 1)))
            assert gap == pytest.approx(abs(math.log(a2) - math.log(a3 * b1)), abs=1e-9)
            curve_f = spectrum_curve(chain, -3.0, 3.0, 25)
            curve_g = spectrum_curve(twin, -3.0, 3.0, 25)
            assert np.abs(curve_f.alphas - curve_g.alphas).max() <= 1e-8
            assert np.abs(curve_f.entropies - curve_g.entropies).max() <= 1e-8


def test_criterion_3_twin_reproduction_exact():
    with criterion(3, "twin pairs: polynomial families (exact rational)"):
        rng = np.random.default_rng(13)
        count = 0
        while count < 100:
            p1, p2 = sorted(rng.integers(1, 63, size=2))
            if p1 == p2:
                continue
            a1, a2 = Fraction(int(p1), 64), Fraction(int(p2 - p1), 64)
            a3 = 1 - a1 - a2
            if a2 == 0 or a3 <= 0:
                continue
            b1 = Fraction(int(rng.integers(1, 64)), 64)
            if a2 == a3 * b1:
                continue
            chain = make_chain(a1, a2, a3, b1, 1 - b1)
            twin = spectral_twin_chain(chain)
            assert char_poly_family_equal(chain, twin) == (True, 0.0)
            count += 1


def test_criterion_4_certificate(fixture_chain_module):
    with criterion(4, "non-rigidity certificate on the reference potential"):
        cert = snr_certificate(fixture_chain_module)
        assert cert.verdict
        assert cert.details["witness_cycle"] == (1, 3, 2, 1)
        assert cert.details["missing_from_g"] == (0.3, 0.4)
        assert cert.details["missing_from_f"] == ()
        four = counterexample_matrix()
        reduced, mapping = total_amalgamation(four)
        assert reduced == four and mapping == {1: 1, 2: 2, 3: 3, 4: 4}
        assert automorphisms(four).status == "trivial"


def test_criterion_5_word_reconstruction():
    with criterion(5, "value-stream injectivity and round trips"):
        rng = np.random.default_rng(14)
        four = counterexample_matrix()
        branch = structure(four).branch_symbols
        for _ in range(50):
            chain = random_chain_with_distinct_values(rng, four)
            for length in range(2, 7):
                streams = set()
                words = 0
                for row in _word_rows(four, length):
                    word = tuple(int(s) for s in row)
                    if word[-1] not in branch:
                        continue
                    words += 1
                    stream = tuple(chain.value(i, j) for i, j in zip(word, word[1:]))
                    streams.add(stream)
                    assert reconstruct_word(chain, list(stream)) == word
                assert len(streams) == words


def test_criterion_6_conjugacy(fixture_chain_module):
    with criterion(6, "identity self-conjugacy and twin obstruction"):
        rng = np.random.default_rng(15)
        four = counterexample_matrix()
        for _ in range(20):
            chain = random_chain_with_distinct_values(rng, four)
            code = induce_conjugacy(chain, chain)
            assert not isinstance(code, ConjugacyObstruction)
            assert code.is_identity()
        twin = spectral_twin_chain(fixture_chain_module)
        result = induce_conjugacy(fixture_chain_module, twin)
        assert isinstance(result, ConjugacyObstruction)
        assert result.kind == "value_set_mismatch"


def test_criterion_7_full_measure_sampling():
    with criterion(7, "sampled distinctness fraction"):
        assert sampled_distinct_fraction(counterexample_matrix(), 1000, seed=0) == 1.0


def test_criterion_8_spectrum_anchors(fixture_chain_module):
    with criterion(8, "pressure anchors, derivative, convexity"):
        rng = np.random.default_rng(16)
        other = random_chain_with_distinct_values(rng, random_primitive_matrix(rng, 5))
        for chain in (fixture_chain_module, other):
            assert abs(pressure(chain, 1.0)) <= 1e-12
            assert abs(pressure(chain, 0.0) - topological_entropy(chain.base)) <= 1e-10
            curve = spectrum_curve(chain, -3.0, 3.0, 25)
            at_one = int(np.argmin(np.abs(curve.qs - 1.0)))
            h = ks_entropy(chain)
            assert abs(curve.alphas[at_one] - h) <= 1e-8
            assert abs(curve.entropies[at_one] - h) <= 1e-8
            betas = curve.entropies - curve.qs * curve.alphas
            assert (np.diff(betas, 2) >= -1e-9).all()
            step = 1e-5
            for q in curve.qs:
                oracle = (pressure(chain, float(q) + step) - pressure(chain, float(q) - step)) / (2 * step)
                assert abs(pressure_derivative(chain, float(q)) - oracle) <= 1e-6


def test_criterion_9_combinatorics_goldens():
    with criterion(9, "combinatorial golden values"):
        four = counterexample_matrix()
        assert simple_cycles(four) == ((1, 2, 1), (1, 3, 2, 1), (1, 4, 2, 1), (2, 4, 2))
        holds, violations = cycle_intersection_condition(four)
        assert holds and violations == ()
        st = structure(four)
        assert st.in_degrees == (1, 3, 1, 2)
        assert st.branch_symbols == frozenset({2, 4})
        assert len(st.branch_edges) == 5
