"""Built-in analysis profiles and small example corpora.

Each profile bundles an abstraction configuration, a distance weight matrix
with its distance kind, and a clustering configuration for one well-known
kind of cultural-heritage field.  The weight tables are shipped verbatim;
treat them as starting points to iterate on, not as universal truths.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources

from .abstraction import AbstractionConfig, AbstractionRule, CharGroup, RuleLevel
from .clustering import Algorithm, ClusteringConfig, HierarchicalOptions, Linkage
from .corpus import ValueCorpus, corpus_from_values
from .distance import CharClass, DistanceKind, WeightMatrix

__all__ = ["Profile", "PROFILES", "FIXTURES", "get_profile", "load_fixture"]

ASCII_LETTERS = string.ascii_letters
DIGITS = string.digits


@dataclass(frozen=True)
class Profile:
    name: str
    description: str
    abstraction: AbstractionConfig
    weights: WeightMatrix
    kind: DistanceKind
    clustering: ClusteringConfig


def _hierarchical(threshold: float | None = None, n_clusters: int | None = None) -> ClusteringConfig:
    return ClusteringConfig(
        algorithm=Algorithm.HIERARCHICAL,
        hierarchical=HierarchicalOptions(
            linkage=Linkage.COMPLETE,
            distance_threshold=threshold,
            n_clusters=n_clusters,
        ),
    )


# Artist names: letter sequences (possibly space-separated name parts)
# collapse to one letter, each digit becomes the same digit so the length of
# digit runs survives, special characters are kept as-is.  Commas separate
# "last, first" from "first last" entries, so they weigh heaviest.
_ARTIST_SPECIAL = "".join(c for c in string.punctuation if c not in ",-'")

ARTIST_NAME = Profile(
    name="artist-name",
    description="person-name fields with optional uniqueness annotations",
    abstraction=AbstractionConfig(
        case_fold=False,
        enabled_rules=(
            AbstractionRule(
                id="letter_any_sequence",
                level=RuleLevel.SEQUENCE_WITH_SEPARATORS,
                group=CharGroup.LETTER,
                separators=frozenset(" "),
                placeholder="a",
            ),
            AbstractionRule(
                id="digit_char",
                level=RuleLevel.CHAR_OF_GROUP,
                group=CharGroup.DIGIT,
                placeholder="0",
            ),
        ),
    ),
    weights=WeightMatrix(
        classes=(
            CharClass.of("Letters", ASCII_LETTERS),
            CharClass.of("HyphenApostrophe", "-'"),
            CharClass.of("Digits", DIGITS),
            CharClass.of("Space", " "),
            CharClass.of("Special", _ARTIST_SPECIAL),
            CharClass.of("Comma", ","),
            CharClass.other(),
        ),
        indel=(1, 1, 10, 15, 100, 200, 1),
        sub=None,
    ),
    kind=DistanceKind.BASIC,
    clustering=_hierarchical(threshold=700.0),
)

# Datings: case is irrelevant, digit runs collapse to one digit, letters and
# special characters are kept.  Insertion/deletion/substitution of anything
# but digits is uniformly expensive, so same-length values with swapped
# separators stay relatively similar.
DATING = Profile(
    name="dating",
    description="date fields with spans, uncertainty prefixes and placeholders",
    abstraction=AbstractionConfig(
        case_fold=True,
        enabled_rules=(
            AbstractionRule(
                id="digit_sequence",
                level=RuleLevel.SEQUENCE_OF_GROUP,
                group=CharGroup.DIGIT,
                placeholder="0",
            ),
        ),
    ),
    weights=WeightMatrix(
        classes=(
            CharClass.of("Digits", DIGITS),
            CharClass.other(),
        ),
        indel=(1, 4),
        sub=((2, 4), (4, 4)),
    ),
    kind=DistanceKind.LEVENSHTEIN,
    clustering=_hierarchical(n_clusters=25),
)

# Measurement units: letters are preserved, plain digit runs become '0',
# decimal-separated digit runs become '1'.  Letters are expected and cheap;
# digits and special characters are unexpected and expensive.
MEASUREMENT_UNIT = Profile(
    name="measurement-unit",
    description="unit-of-measurement fields expected to hold short abbreviations",
    abstraction=AbstractionConfig(
        case_fold=False,
        enabled_rules=(
            AbstractionRule(
                id="digit_separated_sequence",
                level=RuleLevel.SEQUENCE_WITH_SEPARATORS,
                group=CharGroup.DIGIT,
                separators=frozenset(",."),
                placeholder="1",
            ),
            AbstractionRule(
                id="digit_sequence",
                level=RuleLevel.SEQUENCE_OF_GROUP,
                group=CharGroup.DIGIT,
                placeholder="0",
            ),
        ),
    ),
    weights=WeightMatrix(
        classes=(
            CharClass.of("Digits", DIGITS),
            CharClass.of("Letters", ASCII_LETTERS),
            CharClass.other("Special"),
        ),
        indel=(2, 1, 2),
        sub=((0, 3, 4), (3, 1, 3), (4, 3, 2)),
    ),
    kind=DistanceKind.LEVENSHTEIN,
    clustering=_hierarchical(threshold=3.5),
)

# Attribution qualifiers: every letter becomes the same letter (entry
# lengths stay comparable), every digit the same digit, specials are kept.
ATTRIBUTION_QUALIFIER = Profile(
    name="attribution-qualifier",
    description="qualifier fields expected to hold a small controlled vocabulary",
    abstraction=AbstractionConfig(
        case_fold=False,
        enabled_rules=(
            AbstractionRule(
                id="letter_char",
                level=RuleLevel.CHAR_OF_GROUP,
                group=CharGroup.LETTER,
                placeholder="a",
            ),
            AbstractionRule(
                id="digit_char",
                level=RuleLevel.CHAR_OF_GROUP,
                group=CharGroup.DIGIT,
                placeholder="0",
            ),
        ),
    ),
    weights=WeightMatrix(
        classes=(
            CharClass.of("Letters", ASCII_LETTERS),
            CharClass.of("Space", " "),
            CharClass.of("Digits", DIGITS),
            CharClass.other("Special"),
        ),
        indel=(1, 20, 30, 100),
        sub=None,
    ),
    kind=DistanceKind.BASIC,
    clustering=_hierarchical(threshold=100.0),
)

PROFILES: dict[str, Profile] = {
    p.name: p for p in (ARTIST_NAME, DATING, MEASUREMENT_UNIT, ATTRIBUTION_QUALIFIER)
}

FIXTURES: dict[str, str] = {
    "artist-name": "artist_name.txt",
    "dating": "dating.txt",
    "measurement-unit": "measurement_unit.txt",
    "attribution-qualifier": "attribution_qualifier.txt",
}


def get_profile(name: str) -> Profile:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown profile {name!r}, available: {sorted(PROFILES)}") from None


def load_fixture(name: str) -> ValueCorpus:
    """One of the small example corpora shipped with the package."""
    try:
        filename = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}, available: {sorted(FIXTURES)}") from None
    text = resources.files("valuecluster").joinpath(f"data/fixtures/{filename}").read_text("utf-8")
    values = text.split("\n")
    if values and values[-1] == "":
        values.pop()
    return corpus_from_values(values, source_label=f"fixture:{name}")
