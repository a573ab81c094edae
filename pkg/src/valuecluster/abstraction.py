"""Rule-based abstraction of data values.

Original values are rewritten into a smaller set of shorter abstracted
values.  Each rule replaces matches of a derived regular expression by a
single placeholder character; rewriting is a single left-to-right pass, so
a placeholder emitted by one rule is never re-matched by another.  Values
whose abstracted forms coincide are merged into one group, keeping the full
mapping back to the original values.
"""

from __future__ import annotations

import enum
import json
import re
import warnings
from dataclasses import dataclass, field
from importlib import resources

from .corpus import ValueCorpus
from .errors import ConfigError, PlaceholderCollisionError
from .fingerprint import fingerprint

__all__ = [
    "CharGroup",
    "RuleLevel",
    "AbstractionRule",
    "AbstractionConfig",
    "AbstractionGroup",
    "AbstractionMapping",
    "RuleProgram",
    "compile_rules",
    "abstract",
    "preview",
    "questionnaire_to_config",
    "load_questionnaire",
]


class CharGroup(enum.Enum):
    """Top-level character groups; they partition the non-control codepoints.

    Classification is first-match: digit, then letter, then special (which
    absorbs whitespace, punctuation and everything else).  The private-use
    range U+E000..U+F8FF is reserved for placeholders and belongs to no
    group, so default placeholders can never be re-matched by a rule.
    """

    LETTER = "letter"
    DIGIT = "digit"
    SPECIAL = "special"

    @property
    def atom(self) -> str:
        if self is CharGroup.DIGIT:
            return r"\d"
        if self is CharGroup.LETTER:
            return r"[^\W\d_]"
        return r"(?:(?![-])[\W_])"

    def contains(self, c: str) -> bool:
        return classify_group(c) is self


def classify_group(c: str) -> CharGroup | None:
    """Group of a codepoint; None for the reserved placeholder range."""
    if "" <= c <= "":
        return None
    if re.fullmatch(r"\d", c):
        return CharGroup.DIGIT
    if re.fullmatch(r"[^\W\d_]", c):
        return CharGroup.LETTER
    return CharGroup.SPECIAL


class RuleLevel(enum.Enum):
    CHAR_OF_GROUP = "char"
    SEQUENCE_OF_GROUP = "sequence"
    SEQUENCE_WITH_SEPARATORS = "separated_sequence"


# Rule priority within a group: separated sequences first, then plain
# sequences, then single characters, so the longest construct wins.
_LEVEL_ORDER = {
    RuleLevel.SEQUENCE_WITH_SEPARATORS: 0,
    RuleLevel.SEQUENCE_OF_GROUP: 1,
    RuleLevel.CHAR_OF_GROUP: 2,
}

# Default placeholders come from the private-use area so they can never
# collide with data characters.
_PRIVATE_BASE = 0xE000
_GROUP_OFFSET = {CharGroup.LETTER: 0, CharGroup.DIGIT: 16, CharGroup.SPECIAL: 32}


def default_placeholder(group: CharGroup, level: RuleLevel) -> str:
    return chr(_PRIVATE_BASE + _GROUP_OFFSET[group] + _LEVEL_ORDER[level])


@dataclass(frozen=True)
class AbstractionRule:
    id: str
    level: RuleLevel
    group: CharGroup
    separators: frozenset[str] = frozenset()
    placeholder: str = ""

    def __post_init__(self):
        if self.placeholder == "":
            object.__setattr__(self, "placeholder", default_placeholder(self.group, self.level))
        if len(self.placeholder) != 1:
            raise ConfigError(f"rule {self.id}: placeholder must be a single codepoint")
        if self.level is RuleLevel.SEQUENCE_WITH_SEPARATORS and not self.separators:
            raise ConfigError(f"rule {self.id}: separated-sequence rule needs separators")
        if self.level is not RuleLevel.SEQUENCE_WITH_SEPARATORS and self.separators:
            raise ConfigError(f"rule {self.id}: separators are only valid for separated sequences")

    def pattern(self, require_separator: bool = False) -> str:
        """Derive the regular expression this rule replaces."""
        atom = self.group.atom
        if self.level is RuleLevel.CHAR_OF_GROUP:
            return atom
        if self.level is RuleLevel.SEQUENCE_OF_GROUP:
            return f"{atom}+"
        seps = "[" + "".join(re.escape(s) for s in sorted(self.separators)) + "]"
        quant = "+" if require_separator else "*"
        return f"{atom}+(?:{seps}{atom}+){quant}"

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "level": self.level.value,
            "group": self.group.value,
            "separators": sorted(self.separators),
            "placeholder": self.placeholder,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "AbstractionRule":
        return cls(
            id=d["id"],
            level=RuleLevel(d["level"]),
            group=CharGroup(d["group"]),
            separators=frozenset(d.get("separators", [])),
            placeholder=d.get("placeholder", ""),
        )


@dataclass(frozen=True)
class AbstractionConfig:
    case_fold: bool = False
    enabled_rules: tuple[AbstractionRule, ...] = ()
    dedupe: bool = True

    def to_json_dict(self) -> dict:
        return {
            "case_fold": self.case_fold,
            "dedupe": self.dedupe,
            "rules": [r.to_json_dict() for r in self.enabled_rules],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "AbstractionConfig":
        return cls(
            case_fold=d.get("case_fold", False),
            enabled_rules=tuple(AbstractionRule.from_json_dict(r) for r in d.get("rules", [])),
            dedupe=d.get("dedupe", True),
        )

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.to_json_dict())


class RuleProgram:
    """A compiled, deterministic rewriting program.

    Rewriting scans the value once, left to right.  At each position the
    rules are tried in configured order; the first rule that matches
    consumes its (greedy, hence longest) match and emits its placeholder.
    """

    def __init__(self, config: AbstractionConfig, compiled: list[tuple[AbstractionRule, "re.Pattern[str]"]]):
        self.config = config
        self._compiled = compiled

    def apply(self, value: str) -> str:
        if self.config.case_fold:
            value = value.lower()
        if not self._compiled:
            return value
        out: list[str] = []
        i = 0
        n = len(value)
        while i < n:
            for rule, pat in self._compiled:
                m = pat.match(value, i)
                if m and m.end() > i:
                    out.append(rule.placeholder)
                    i = m.end()
                    break
            else:
                out.append(value[i])
                i += 1
        return "".join(out)


def compile_rules(config: AbstractionConfig) -> RuleProgram:
    """Validate a configuration and compile it to a rewriting program.

    Placeholders must be pairwise distinct across enabled rules, and rules
    for the same group must be ordered longest-construct first (separated
    sequences, then sequences, then single characters).
    """
    rules = config.enabled_rules
    seen: dict[str, str] = {}
    for r in rules:
        if r.placeholder in seen:
            raise PlaceholderCollisionError(
                f"rules {seen[r.placeholder]!r} and {r.id!r} share placeholder {r.placeholder!r}"
            )
        seen[r.placeholder] = r.id

    last_order: dict[CharGroup, int] = {}
    for r in rules:
        order = _LEVEL_ORDER[r.level]
        if last_order.get(r.group, -1) > order:
            raise ConfigError(
                f"rule {r.id}: rules for group {r.group.value} must be ordered "
                "separated-sequence, sequence, char (longest match first)"
            )
        last_order[r.group] = order

    if not rules and not config.dedupe:
        warnings.warn("empty rule set with dedupe disabled is the identity mapping", stacklevel=2)

    # A separated-sequence rule only insists on a separator when a plain
    # sequence rule for the same group handles the separator-free runs;
    # standing alone it covers both shapes.
    groups_with_seq = {r.group for r in rules if r.level is RuleLevel.SEQUENCE_OF_GROUP}
    compiled = []
    for r in rules:
        require_sep = (
            r.level is RuleLevel.SEQUENCE_WITH_SEPARATORS and r.group in groups_with_seq
        )
        compiled.append((r, re.compile(r.pattern(require_separator=require_sep))))
    return RuleProgram(config, compiled)


@dataclass(frozen=True)
class AbstractionGroup:
    abstracted: str
    originals: tuple[tuple[str, int], ...]
    representative: str

    @property
    def total_count(self) -> int:
        return sum(c for _, c in self.originals)


@dataclass(frozen=True)
class AbstractionMapping:
    groups: tuple[AbstractionGroup, ...]
    config_fingerprint: str
    source_label: str = ""

    def __len__(self) -> int:
        return len(self.groups)

    @property
    def abstracted_values(self) -> list[str]:
        return [g.abstracted for g in self.groups]

    @property
    def total_occurrences(self) -> int:
        return sum(g.total_count for g in self.groups)

    @property
    def fingerprint(self) -> str:
        return fingerprint(
            {
                "config": self.config_fingerprint,
                "groups": [[g.abstracted, list(map(list, g.originals))] for g in self.groups],
            }
        )

    def to_json_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "config_fingerprint": self.config_fingerprint,
            "source_label": self.source_label,
            "groups": [
                {
                    "abstracted": g.abstracted,
                    "representative": g.representative,
                    "originals": [[v, c] for v, c in g.originals],
                }
                for g in self.groups
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "AbstractionMapping":
        return cls(
            groups=tuple(
                AbstractionGroup(
                    abstracted=g["abstracted"],
                    originals=tuple((v, c) for v, c in g["originals"]),
                    representative=g["representative"],
                )
                for g in d["groups"]
            ),
            config_fingerprint=d["config_fingerprint"],
            source_label=d.get("source_label", ""),
        )


def _build_groups(pairs: list[tuple[str, tuple[str, int]]], dedupe: bool) -> tuple[AbstractionGroup, ...]:
    merged: dict = {}
    if dedupe:
        for abstracted, (value, count) in pairs:
            merged.setdefault(abstracted, []).append((value, count))
        items = list(merged.items())
    else:
        items = [(abstracted, [vc]) for abstracted, vc in pairs]

    groups = []
    for abstracted, originals in items:
        originals.sort(key=lambda vc: (-vc[1], vc[0]))
        groups.append(
            AbstractionGroup(
                abstracted=abstracted,
                originals=tuple(originals),
                representative=originals[0][0],
            )
        )
    groups.sort(key=lambda g: (-g.total_count, g.abstracted, g.representative))
    return tuple(groups)


def abstract(corpus: ValueCorpus, config: AbstractionConfig) -> AbstractionMapping:
    """Apply the configured rules to every corpus value and group the results."""
    program = compile_rules(config)
    pairs = [(program.apply(value), (value, count)) for value, count in corpus.entries]
    return AbstractionMapping(
        groups=_build_groups(pairs, config.dedupe),
        config_fingerprint=config.fingerprint,
        source_label=corpus.source_label,
    )


def preview(corpus: ValueCorpus, config: AbstractionConfig, limit: int) -> AbstractionMapping:
    """Abstraction restricted to the first ``limit`` corpus entries, for live preview."""
    if limit < 1:
        raise ConfigError("preview limit must be >= 1")
    sub = ValueCorpus(entries=corpus.entries[:limit], source_label=corpus.source_label)
    return abstract(sub, config)


# --- binary questionnaire -> configuration -------------------------------

_QUESTIONNAIRE = None


def load_questionnaire() -> dict:
    """The versioned question catalogue shipped with the package."""
    global _QUESTIONNAIRE
    if _QUESTIONNAIRE is None:
        text = resources.files("valuecluster").joinpath("data/questionnaire.json").read_text("utf-8")
        _QUESTIONNAIRE = json.loads(text)
    return _QUESTIONNAIRE


_GROUP_SEPARATORS = {
    CharGroup.LETTER: frozenset(" "),
    CharGroup.DIGIT: frozenset(",."),
    CharGroup.SPECIAL: frozenset(" "),
}

# Friendly placeholders keep previews readable: digit sequences become '0',
# separator-containing digit sequences (decimals) '1', letter sequences 'a'.
_FRIENDLY = {
    (CharGroup.LETTER, "char"): "a",
    (CharGroup.LETTER, "seq"): "a",
    (CharGroup.LETTER, "sep"): "b",
    (CharGroup.LETTER, "sep_alone"): "a",
    (CharGroup.DIGIT, "char"): "0",
    (CharGroup.DIGIT, "seq"): "0",
    (CharGroup.DIGIT, "sep"): "1",
    (CharGroup.DIGIT, "sep_alone"): "1",
    (CharGroup.SPECIAL, "char"): "*",
    (CharGroup.SPECIAL, "seq"): "*",
    (CharGroup.SPECIAL, "sep"): "+",
    (CharGroup.SPECIAL, "sep_alone"): "*",
}


def _placeholder(group: CharGroup, kind: str, friendly: bool) -> str:
    if friendly:
        return _FRIENDLY[(group, kind)]
    level = {
        "char": RuleLevel.CHAR_OF_GROUP,
        "seq": RuleLevel.SEQUENCE_OF_GROUP,
        "sep": RuleLevel.SEQUENCE_WITH_SEPARATORS,
        "sep_alone": RuleLevel.SEQUENCE_WITH_SEPARATORS,
    }[kind]
    return default_placeholder(group, level)


def questionnaire_to_config(answers, friendly_placeholders: bool = True) -> AbstractionConfig:
    """Translate binary questionnaire answers into an abstraction config.

    ``answers`` maps question ids to booleans (True = the syntactic feature
    is decisive and must be preserved).  Unanswered questions default to
    True, so an empty answer set yields the identity configuration.  The
    derivation per character group, documented in the shipped question
    catalogue:

    * concrete characters decisive: no abstraction for this group;
    * characters irrelevant, length decisive: each character becomes the
      group placeholder;
    * length irrelevant, separator distinction decisive: plain sequences
      and separator-containing sequences become two distinct placeholders;
    * separator distinction irrelevant: every sequence, separators
      included, collapses to one placeholder.
    """
    if not isinstance(answers, dict):
        answers = dict(answers)
    known = {q["id"] for q in load_questionnaire()["questions"]}
    unknown = set(answers) - known
    if unknown:
        raise ConfigError(f"unknown questionnaire ids: {sorted(unknown)}")

    def ans(qid: str) -> bool:
        return bool(answers.get(qid, True))

    rules: list[AbstractionRule] = []
    for group in (CharGroup.LETTER, CharGroup.DIGIT, CharGroup.SPECIAL):
        g = group.value
        seps = _GROUP_SEPARATORS[group]
        if ans(f"{g}_chars"):
            continue
        if ans(f"{g}_length"):
            rules.append(
                AbstractionRule(
                    id=f"{g}_char",
                    level=RuleLevel.CHAR_OF_GROUP,
                    group=group,
                    placeholder=_placeholder(group, "char", friendly_placeholders),
                )
            )
        elif ans(f"{g}_separated"):
            rules.append(
                AbstractionRule(
                    id=f"{g}_separated_sequence",
                    level=RuleLevel.SEQUENCE_WITH_SEPARATORS,
                    group=group,
                    separators=seps,
                    placeholder=_placeholder(group, "sep", friendly_placeholders),
                )
            )
            rules.append(
                AbstractionRule(
                    id=f"{g}_sequence",
                    level=RuleLevel.SEQUENCE_OF_GROUP,
                    group=group,
                    placeholder=_placeholder(group, "seq", friendly_placeholders),
                )
            )
        else:
            rules.append(
                AbstractionRule(
                    id=f"{g}_any_sequence",
                    level=RuleLevel.SEQUENCE_WITH_SEPARATORS,
                    group=group,
                    separators=seps,
                    placeholder=_placeholder(group, "sep_alone", friendly_placeholders),
                )
            )

    config = AbstractionConfig(case_fold=not ans("case"), enabled_rules=tuple(rules), dedupe=True)
    compile_rules(config)  # always valid by construction; fail loudly if not
    return config
