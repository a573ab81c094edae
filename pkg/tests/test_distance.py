from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_edit_distance
from conftest import ALPHABET, random_string, random_weight_matrix
from valuecluster.abstraction import AbstractionConfig, abstract
from valuecluster.corpus import corpus_from_values
from valuecluster.distance import (
    CharClass,
    DistanceKind,
    WeightMatrix,
    basic_edit_distance,
    classify_char,
    condensed_index,
    derive_sub_as_indel_sum,
    distance_matrix,
    weighted_levenshtein,
)
from valuecluster.errors import ConfigError


def identity_mapping(values):
    return abstract(corpus_from_values(values), AbstractionConfig())


# --- weight matrix contract -------------------------------------------------


def test_weight_matrix_requires_trailing_catchall():
    with pytest.raises(ConfigError, match="catch-all"):
        WeightMatrix(classes=(CharClass.of("Letters", "ab"),), indel=(1,))
    with pytest.raises(ConfigError, match="catch-all"):
        WeightMatrix(classes=(CharClass.other(), CharClass.of("X", "x")), indel=(1, 1))


def test_weight_matrix_rejects_asymmetric_sub():
    with pytest.raises(ConfigError, match="symmetric"):
        WeightMatrix(
            classes=(CharClass.of("A", "a"), CharClass.other()),
            indel=(1, 1),
            sub=((0, 1), (2, 0)),
        )


def test_weight_matrix_rejects_negative_weights():
    with pytest.raises(ConfigError):
        WeightMatrix(classes=(CharClass.other(),), indel=(-1,))


def test_classify_char_first_match_with_other_fallback(unit_weights, artist_weights):
    assert unit_weights.classes[classify_char("7", unit_weights)].name == "Digits"
    assert unit_weights.classes[classify_char("?", unit_weights)].name == "Special"
    assert artist_weights.classes[classify_char("Ł", artist_weights)].name == "Other"
    assert artist_weights.classes[classify_char(",", artist_weights)].name == "Comma"


def test_weight_matrix_json_roundtrip(unit_weights, artist_weights):
    for w in (unit_weights, artist_weights):
        assert WeightMatrix.from_json_dict(w.to_json_dict()) == w


# --- single-pair distances ---------------------------------------------------


def test_levenshtein_identity(unit_weights):
    assert weighted_levenshtein("cm", "cm", unit_weights) == 0
    assert weighted_levenshtein("", "", unit_weights) == 0


def test_levenshtein_substitutes_letter(unit_weights):
    assert weighted_levenshtein("cm", "mm", unit_weights) == 1


def test_levenshtein_prefers_cheap_substitution(dating_weights):
    # one other-to-other substitution (4) beats delete+insert (8)
    assert weighted_levenshtein("0/0", "0-0", dating_weights) == 4


def test_empty_against_one_char_is_indel_weight(unit_weights):
    assert weighted_levenshtein("", "a", unit_weights) == 1
    assert weighted_levenshtein("7", "", unit_weights) == 2
    assert weighted_levenshtein("", "?", unit_weights) == 2


def test_basic_distance_deletes_letter(artist_weights):
    assert basic_edit_distance("cm", "m", artist_weights) == 1


def test_basic_distance_has_no_substitution_shortcut():
    w = WeightMatrix(classes=(CharClass.other("Letters"),), indel=(1,))
    assert basic_edit_distance("a", "b", w) == 2
    assert basic_edit_distance("x", "x", w) == 0


def test_levenshtein_requires_sub_weights(artist_weights):
    with pytest.raises(ConfigError, match="substitution"):
        weighted_levenshtein("a", "b", artist_weights)


def test_oracle_equivalence_sample():
    rng = random.Random(7)
    for _ in range(10):
        w = random_weight_matrix(rng)
        for _ in range(60):
            a, b = random_string(rng), random_string(rng)
            assert weighted_levenshtein(a, b, w) == enumerate_edit_distance(a, b, w)


def test_symmetry_random():
    rng = random.Random(21)
    for _ in range(20):
        w = random_weight_matrix(rng)
        for _ in range(20):
            a, b = random_string(rng), random_string(rng)
            assert weighted_levenshtein(a, b, w) == weighted_levenshtein(b, a, w)
            assert basic_edit_distance(a, b, w) == basic_edit_distance(b, a, w)


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet=ALPHABET, max_size=8))
def test_identity_axiom(a):
    rng = random.Random(len(a))
    w = random_weight_matrix(rng)
    assert weighted_levenshtein(a, a, w) == 0
    assert basic_edit_distance(a, a, w) == 0


def metric_weight_matrix(rng: random.Random) -> WeightMatrix:
    """Random weights whose per-character cost is a pseudo-metric.

    Triangle closure over the character classes plus the gap symbol: this
    enforces the substitution triangle, sub <= del + ins, and the coupling
    indel(z) <= indel(y) + sub(y, z) that insertion detours require.
    """
    n = 3
    m = [[rng.randint(0, 12) for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            m[j][i] = m[i][j]
    m[n][n] = 0
    for k in range(n + 1):
        for i in range(n + 1):
            for j in range(n + 1):
                if m[i][k] + m[k][j] < m[i][j]:
                    m[i][j] = m[i][k] + m[k][j]
    return WeightMatrix(
        classes=(CharClass.of("Letters", "ab"), CharClass.of("Digits", "12"), CharClass.other()),
        indel=tuple(m[i][n] for i in range(n)),
        sub=tuple(tuple(m[i][j] for j in range(n)) for i in range(n)),
    )


def test_triangle_inequality_on_metric_weights():
    rng = random.Random(5)
    for _ in range(40):
        w = metric_weight_matrix(rng)
        for _ in range(25):
            a, b, c = (random_string(rng, 5) for _ in range(3))
            dab = weighted_levenshtein(a, b, w)
            dbc = weighted_levenshtein(b, c, w)
            dac = weighted_levenshtein(a, c, w)
            assert dac <= dab + dbc


def test_reduction_law_random():
    rng = random.Random(13)
    for _ in range(30):
        w = random_weight_matrix(rng)
        derived = derive_sub_as_indel_sum(w)
        for _ in range(40):
            a, b = random_string(rng), random_string(rng)
            assert basic_edit_distance(a, b, w) == weighted_levenshtein(a, b, derived)


def test_ratio_only_semantics_exact_with_fractions():
    rng = random.Random(3)
    base = random_weight_matrix(rng)
    exact = WeightMatrix(
        classes=base.classes,
        indel=tuple(Fraction(x) for x in base.indel),
        sub=tuple(tuple(Fraction(x) for x in row) for row in base.sub),
    )
    for c in (Fraction(2), Fraction(1, 3), Fraction(10)):
        scaled = exact.scaled(c)
        for _ in range(60):
            a, b = random_string(rng), random_string(rng)
            assert weighted_levenshtein(a, b, scaled) == c * weighted_levenshtein(a, b, exact)
            assert basic_edit_distance(a, b, scaled) == c * basic_edit_distance(a, b, exact)


# --- condensed matrix --------------------------------------------------------


def test_condensed_index_layout():
    assert condensed_index(0, 1, 4) == 0
    assert condensed_index(0, 3, 4) == 2
    assert condensed_index(2, 3, 4) == 5
    with pytest.raises(IndexError):
        condensed_index(2, 2, 4)


def test_distance_matrix_single_value(unit_weights):
    d = distance_matrix(identity_mapping(["cm"]), unit_weights)
    assert d.n == 1
    assert len(d.condensed) == 0


def test_distance_matrix_three_values(unit_weights):
    d = distance_matrix(identity_mapping(["cm", "mm", "m"]), unit_weights)
    assert len(d.condensed) == 3
    assert d.get(0, 1) == d.get(1, 0)
    assert d.get(1, 1) == 0


def test_distance_matrix_pair_count_for_22_values(unit_weights):
    values = [f"v{i}" for i in range(22)]
    d = distance_matrix(identity_mapping(values), unit_weights)
    assert len(d.condensed) == 22 * 21 // 2 == 231


def test_distance_matrix_empty_mapping_rejected(unit_weights):
    mapping = identity_mapping([])
    with pytest.raises(ValueError):
        distance_matrix(mapping, unit_weights)


def test_kernel_matches_pure_python(unit_weights, dating_weights):
    rng = random.Random(17)
    values = list({random_string(rng, 10) for _ in range(40)})
    values += ["", "Ł 10,5 cm", "ünïcode"]
    mapping = identity_mapping(values)
    for w, kind, ref in (
        (unit_weights, DistanceKind.LEVENSHTEIN, weighted_levenshtein),
        (dating_weights, DistanceKind.LEVENSHTEIN, weighted_levenshtein),
        (unit_weights, DistanceKind.BASIC, basic_edit_distance),
    ):
        d = distance_matrix(mapping, w, kind)
        vals = mapping.abstracted_values
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                assert d.get(i, j) == ref(vals[i], vals[j], w), (vals[i], vals[j], kind)


def test_parallel_determinism(unit_weights):
    rng = random.Random(29)
    values = list({random_string(rng, 12) for _ in range(120)})
    mapping = identity_mapping(values)
    base = distance_matrix(mapping, unit_weights, threads=1)
    for threads in (2, 4):
        other = distance_matrix(mapping, unit_weights, threads=threads)
        assert np.array_equal(base.condensed, other.condensed)


def test_progress_callback_reaches_total(unit_weights):
    mapping = identity_mapping([f"v{i}" for i in range(30)])
    seen = []
    distance_matrix(mapping, unit_weights, progress=lambda done, total: seen.append((done, total)))
    assert seen[-1] == (435, 435)
    assert all(d1 <= d2 for (d1, _), (d2, _) in zip(seen, seen[1:]))


def test_matrix_fingerprint_chains(unit_weights):
    mapping = identity_mapping(["a", "b"])
    d = distance_matrix(mapping, unit_weights)
    assert d.mapping_fingerprint == mapping.fingerprint
    assert d.weights_fingerprint == unit_weights.fingerprint


def test_scaled_matrix():
    from conftest import random_condensed

    d = random_condensed(random.Random(1), 5)
    s = d.scaled(2)
    assert all(s.condensed[i] == 2 * d.condensed[i] for i in range(len(d.condensed)))
