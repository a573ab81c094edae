from __future__ import annotations

import pytest

from valuecluster.abstraction import RuleLevel, abstract, load_questionnaire, questionnaire_to_config
from valuecluster.clustering import Algorithm, Linkage
from valuecluster.distance import DistanceKind, classify_char
from valuecluster.profiles import FIXTURES, PROFILES, get_profile, load_fixture


def test_four_profiles_shipped():
    assert set(PROFILES) == {"artist-name", "dating", "measurement-unit", "attribution-qualifier"}
    assert set(FIXTURES) == set(PROFILES)


def test_unknown_profile_and_fixture():
    with pytest.raises(KeyError):
        get_profile("nope")
    with pytest.raises(KeyError):
        load_fixture("nope")


def test_artist_name_weight_table_verbatim():
    p = get_profile("artist-name")
    assert p.kind is DistanceKind.BASIC
    assert [c.name for c in p.weights.classes] == [
        "Letters", "HyphenApostrophe", "Digits", "Space", "Special", "Comma", "Other",
    ]
    assert p.weights.indel == (1, 1, 10, 15, 100, 200, 1)
    assert p.weights.sub is None


def test_dating_weight_table_verbatim():
    p = get_profile("dating")
    assert p.kind is DistanceKind.LEVENSHTEIN
    assert [c.name for c in p.weights.classes] == ["Digits", "Other"]
    assert p.weights.indel == (1, 4)
    assert p.weights.sub == ((2, 4), (4, 4))


def test_measurement_unit_weight_table_verbatim():
    p = get_profile("measurement-unit")
    assert p.kind is DistanceKind.LEVENSHTEIN
    assert [c.name for c in p.weights.classes] == ["Digits", "Letters", "Special"]
    assert p.weights.indel == (2, 1, 2)
    assert p.weights.sub == ((0, 3, 4), (3, 1, 3), (4, 3, 2))


def test_attribution_qualifier_weight_table_verbatim():
    p = get_profile("attribution-qualifier")
    assert p.kind is DistanceKind.BASIC
    assert [c.name for c in p.weights.classes] == ["Letters", "Space", "Digits", "Special"]
    assert p.weights.indel == (1, 20, 30, 100)


def test_artist_classes_route_unexpected_letters_to_other():
    w = get_profile("artist-name").weights
    assert w.classes[classify_char("Ł", w)].name == "Other"
    assert w.classes[classify_char("ß", w)].name == "Other"
    assert w.classes[classify_char("a", w)].name == "Letters"
    assert w.classes[classify_char("-", w)].name == "HyphenApostrophe"
    assert w.classes[classify_char("'", w)].name == "HyphenApostrophe"
    assert w.classes[classify_char(" ", w)].name == "Space"
    assert w.classes[classify_char("?", w)].name == "Special"


def test_clustering_configs_per_profile():
    expectations = {
        "artist-name": ("distance_threshold", 700.0),
        "dating": ("n_clusters", 25),
        "measurement-unit": ("distance_threshold", 3.5),
        "attribution-qualifier": ("distance_threshold", 100.0),
    }
    for name, (field, value) in expectations.items():
        cfg = get_profile(name).clustering
        assert cfg.algorithm is Algorithm.HIERARCHICAL
        assert cfg.hierarchical.linkage is Linkage.COMPLETE
        assert getattr(cfg.hierarchical, field) == value


def test_abstraction_rules_per_profile():
    artist = get_profile("artist-name").abstraction
    assert not artist.case_fold
    assert [(r.group.value, r.level) for r in artist.enabled_rules] == [
        ("letter", RuleLevel.SEQUENCE_WITH_SEPARATORS),
        ("digit", RuleLevel.CHAR_OF_GROUP),
    ]

    dating = get_profile("dating").abstraction
    assert dating.case_fold
    assert [(r.group.value, r.level) for r in dating.enabled_rules] == [
        ("digit", RuleLevel.SEQUENCE_OF_GROUP)
    ]

    attribution = get_profile("attribution-qualifier").abstraction
    assert not attribution.case_fold
    assert [(r.group.value, r.level) for r in attribution.enabled_rules] == [
        ("letter", RuleLevel.CHAR_OF_GROUP),
        ("digit", RuleLevel.CHAR_OF_GROUP),
    ]


def test_unit_profile_equals_questionnaire_answers():
    answers = {q["id"]: True for q in load_questionnaire()["questions"]}
    answers.update({"digit_chars": False, "digit_length": False, "digit_separated": True})
    assert questionnaire_to_config(answers) == get_profile("measurement-unit").abstraction


def test_fixture_sizes():
    assert load_fixture("measurement-unit").total_occurrences == 40
    assert len(load_fixture("measurement-unit")) == 22
    # the dating profile stops at 25 clusters, so its fixture must abstract
    # to at least 25 distinct values
    dating = load_fixture("dating")
    mapping = abstract(dating, get_profile("dating").abstraction)
    assert len(mapping) >= 25


def test_abstraction_examples_per_profile():
    artist = get_profile("artist-name").abstraction
    from valuecluster.abstraction import compile_rules

    program = compile_rules(artist)
    assert program.apply("Zindel, Peter (1841)") == "a, a (0000)"
    assert program.apply("Grass, A. / Graß, Adolf / Grohs, A.") == "a, a. / a, a / a, a."

    dating_program = compile_rules(get_profile("dating").abstraction)
    assert dating_program.apply("1847 (Original 1846)") == "0 (original 0)"
    assert dating_program.apply("1686.10.24") == "0.0.0"

    unit_program = compile_rules(get_profile("measurement-unit").abstraction)
    assert unit_program.apply("-10,5 cm") == "-1 cm"
    assert unit_program.apply("x 55 cm") == "x 0 cm"
    assert unit_program.apply("100 m?") == "0 m?"

    attribution_program = compile_rules(get_profile("attribution-qualifier").abstraction)
    assert attribution_program.apply("attributed?") == "aaaaaaaaaa?"
