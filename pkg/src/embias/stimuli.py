"""Built-in stimulus sets, user spec loading, and vocabulary resolution.

The built-in word lists are the published IAT stimuli: Greenwald, McGhee &
Schwartz (1998) for the valence tests, Bertrand & Mullainathan (2004) for
the resume names, and Nosek, Banaji & Greenwald (2002) for the gender
tests. Name lists ship in their final form: names too rare in web-scale
corpora, plus an equal number of contrast names deleted at random, are
already excluded. The generic :func:`resolve` procedure applies the same
miss-and-rebalance treatment to custom specs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ResolutionError, UsageError
from .store import EmbeddingStore


@dataclass(frozen=True)
class WordSet:
    """A labeled, ordered, duplicate-free list of tokens."""

    label: str
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.words:
            raise UsageError(f"word set {self.label!r} is empty")
        seen = set()
        for w in self.words:
            if w in seen:
                raise UsageError(f"duplicate word {w!r} in set {self.label!r}")
            seen.add(w)

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class WeatSpec:
    """Two target word sets and two attribute word sets.

    ``aliases`` maps a word to alternate spellings tried, in order, after
    the word itself fails to resolve.
    """

    test_id: str
    target_x: WordSet
    target_y: WordSet
    attribute_a: WordSet
    attribute_b: WordSet
    source: str = ""
    aliases: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        overlap = set(self.target_x.words) & set(self.target_y.words)
        if overlap:
            raise UsageError(f"targets overlap: {sorted(overlap)}")
        overlap = set(self.attribute_a.words) & set(self.attribute_b.words)
        if overlap:
            raise UsageError(f"attributes overlap: {sorted(overlap)}")

    def sets(self) -> tuple[WordSet, WordSet, WordSet, WordSet]:
        return (self.target_x, self.target_y, self.attribute_a, self.attribute_b)


@dataclass(frozen=True)
class ResolvedSpec:
    """A spec restricted to in-vocabulary words, plus the resolution log.

    ``token_map`` maps each resolved word to the stored token actually used
    (differs from the word only for alias or case-fallback hits, all of
    which are listed in ``fallback_hits``).
    """

    spec: WeatSpec
    missing: tuple[tuple[str, str], ...]
    rebalance_deletions: tuple[tuple[str, str], ...]
    seed_used: int
    token_map: Mapping[str, str]
    fallback_hits: tuple[tuple[str, str, str], ...] = ()

    def tokens(self, words: Sequence[str]) -> list[str]:
        return [self.token_map[w] for w in words]


# ---------------------------------------------------------------------------
# Built-in stimuli
# ---------------------------------------------------------------------------

_PLEASANT_25 = (
    "caress", "freedom", "health", "love", "peace", "cheer", "friend",
    "heaven", "loyal", "pleasure", "diamond", "gentle", "honest", "lucky",
    "rainbow", "diploma", "gift", "honor", "miracle", "sunrise", "family",
    "happy", "laughter", "paradise", "vacation",
)

# Valence attributes for the object tests (flowers, instruments).
_UNPLEASANT_25 = (
    "abuse", "crash", "filth", "murder", "sickness", "accident", "death",
    "grief", "poison", "stink", "assault", "disaster", "hatred", "pollute",
    "tragedy", "divorce", "jail", "poverty", "ugly", "cancer", "kill",
    "rotten", "vomit", "agony", "prison",
)

# The name tests use a variant unpleasant list (bomb/evil in place of
# agony/prison).
_UNPLEASANT_25_NAMES = (
    "abuse", "crash", "filth", "murder", "sickness", "accident", "death",
    "grief", "poison", "stink", "assault", "disaster", "hatred", "pollute",
    "tragedy", "bomb", "divorce", "jail", "poverty", "ugly", "cancer",
    "evil", "kill", "rotten", "vomit",
)

_FLOWERS = (
    "aster", "clover", "hyacinth", "marigold", "poppy", "azalea", "crocus",
    "iris", "orchid", "rose", "bluebell", "daffodil", "lilac", "pansy",
    "tulip", "buttercup", "daisy", "lily", "peony", "violet", "carnation",
    "gladiola", "magnolia", "petunia", "zinnia",
)

_INSECTS = (
    "ant", "caterpillar", "flea", "locust", "spider", "bedbug", "centipede",
    "fly", "maggot", "tarantula", "bee", "cockroach", "gnat", "mosquito",
    "termite", "beetle", "cricket", "hornet", "moth", "wasp", "blackfly",
    "dragonfly", "horsefly", "roach", "weevil",
)

_INSTRUMENTS = (
    "bagpipe", "cello", "guitar", "lute", "trombone", "banjo", "clarinet",
    "harmonica", "mandolin", "trumpet", "bassoon", "drum", "harp", "oboe",
    "tuba", "bell", "fiddle", "harpsichord", "piano", "viola", "bongo",
    "flute", "horn", "saxophone", "violin",
)

_WEAPONS = (
    "arrow", "club", "gun", "missile", "spear", "axe", "dagger", "harpoon",
    "pistol", "sword", "blade", "dynamite", "hatchet", "rifle", "tank",
    "bomb", "firearm", "knife", "shotgun", "teargas", "cannon", "grenade",
    "mace", "slingshot", "whip",
)

# Greenwald et al. (1998) p. 1479 name lists, post-deletion: corpus-rare
# names and an equal number of randomly deleted contrast names are already
# excluded, leaving 32 + 32.
_EURO_AMERICAN_NAMES = (
    "Adam", "Harry", "Josh", "Roger", "Alan", "Frank", "Justin", "Ryan",
    "Andrew", "Jack", "Matthew", "Stephen", "Brad", "Greg", "Paul",
    "Jonathan", "Peter", "Amanda", "Courtney", "Heather", "Melanie",
    "Katie", "Betsy", "Kristin", "Nancy", "Stephanie", "Ellen", "Lauren",
    "Colleen", "Emily", "Megan", "Rachel",
)

# "Tvree" is shipped verbatim as printed in the source list; an alias
# "Tyree" is tried second during resolution (see _ALIASES).
_AFRICAN_AMERICAN_NAMES = (
    "Alonzo", "Jamel", "Theo", "Alphonse", "Jerome", "Leroy", "Torrance",
    "Darnell", "Lamar", "Lionel", "Tvree", "Deion", "Lamont", "Malik",
    "Terrence", "Tyrone", "Lavon", "Marcellus", "Wardell", "Nichelle",
    "Shereen", "Ebony", "Latisha", "Shaniqua", "Jasmine", "Tanisha", "Tia",
    "Lakisha", "Latoya", "Yolanda", "Malika", "Yvette",
)

# Names absent from the final lists above (the African American exclusions
# were corpus-frequency misses; the European American ones the matching
# random deletions). Shipped for users re-deriving the deletion procedure
# with resolve() against their own store.
RACE_TEST_EXCLUDED_EUROPEAN_NAMES = (
    "Chip", "Ian", "Fred", "Jed", "Todd", "Brandon", "Hank", "Wilbur",
    "Sara", "Amber", "Crystal", "Meredith", "Shannon", "Donna",
    "Bobbie-Sue", "Peggy", "Sue-Ellen", "Wendy",
)

RACE_TEST_EXCLUDED_AFRICAN_NAMES = (
    "Lerone", "Percell", "Rasaan", "Rashaun", "Everol", "Terryl", "Aiesha",
    "Lashelle", "Temeka", "Tameisha", "Teretha", "Latonya", "Shanise",
    "Sharise", "Tashika", "Lashandra", "Shavonn", "Tawanda",
)

RESUME_TEST_EXCLUDED_EUROPEAN_NAMES = ("Jay", "Kristen")
RESUME_TEST_EXCLUDED_AFRICAN_NAMES = ("Tremayne", "Latonya")

# Bertrand & Mullainathan (2004) p. 1012 resume names, post-deletion.
_BERTRAND_EURO_NAMES = (
    "Brad", "Brendan", "Geoffrey", "Greg", "Brett", "Matthew", "Neil",
    "Todd", "Allison", "Anne", "Carrie", "Emily", "Jill", "Laurie",
    "Meredith", "Sarah",
)

_BERTRAND_AFRICAN_NAMES = (
    "Darnell", "Hakim", "Jermaine", "Kareem", "Jamal", "Leroy", "Rasheed",
    "Tyrone", "Aisha", "Ebony", "Keisha", "Kenya", "Lakisha", "Latoya",
    "Tamika", "Tanisha",
)

# Nosek et al. (2002) p. 114 short valence lists.
_NOSEK_PLEASANT = (
    "joy", "love", "peace", "wonderful", "pleasure", "friend", "laughter",
    "happy",
)

_NOSEK_UNPLEASANT = (
    "agony", "terrible", "horrible", "nasty", "evil", "war", "awful",
    "failure",
)

_MALE_NAMES = ("John", "Paul", "Mike", "Kevin", "Steve", "Greg", "Jeff", "Bill")
_FEMALE_NAMES = ("Amy", "Joan", "Lisa", "Sarah", "Diana", "Kate", "Ann", "Donna")

_CAREER_WORDS = (
    "executive", "management", "professional", "corporation", "salary",
    "office", "business", "career",
)

_FAMILY_WORDS = (
    "home", "parents", "children", "family", "cousins", "marriage",
    "wedding", "relatives",
)

_MATH_WORDS = (
    "math", "algebra", "geometry", "calculus", "equations", "computation",
    "numbers", "addition",
)

_ARTS_WORDS_MATH = (
    "poetry", "art", "dance", "literature", "novel", "symphony", "drama",
    "sculpture",
)

_MALE_ATTRIBUTES = ("male", "man", "boy", "brother", "he", "him", "his", "son")
_FEMALE_ATTRIBUTES = (
    "female", "woman", "girl", "sister", "she", "her", "hers", "daughter",
)

_SCIENCE_WORDS = (
    "science", "technology", "physics", "chemistry", "Einstein", "NASA",
    "experiment", "astronomy",
)

_ARTS_WORDS_SCIENCE = (
    "poetry", "art", "Shakespeare", "dance", "literature", "novel",
    "symphony", "drama",
)

_MALE_ATTRIBUTES_FAMILIAL = (
    "brother", "father", "uncle", "grandfather", "son", "he", "his", "him",
)

_FEMALE_ATTRIBUTES_FAMILIAL = (
    "sister", "mother", "aunt", "grandmother", "daughter", "she", "hers",
    "her",
)

_OCCUPATIONS = (
    "technician", "accountant", "supervisor", "engineer", "worker",
    "educator", "clerk", "counselor", "inspector", "mechanic", "manager",
    "therapist", "administrator", "salesperson", "receptionist",
    "librarian", "advisor", "pharmacist", "janitor", "psychologist",
    "physician", "carpenter", "nurse", "investigator", "bartender",
    "specialist", "electrician", "officer", "pathologist", "teacher",
    "lawyer", "planner", "practitioner", "plumber", "instructor", "surgeon",
    "veterinarian", "paramedic", "examiner", "chemist", "machinist",
    "appraiser", "nutritionist", "architect", "hairdresser", "baker",
    "programmer", "paralegal", "hygienist", "scientist",
)

_ANDROGYNOUS_NAMES = (
    "Kelly", "Tracy", "Jamie", "Jackie", "Jesse", "Courtney", "Lynn",
    "Taylor", "Leslie", "Shannon", "Stacey", "Jessie", "Shawn", "Stacy",
    "Casey", "Bobby", "Terry", "Lee", "Ashley", "Eddie", "Chris", "Jody",
    "Pat", "Carey", "Willie", "Morgan", "Robbie", "Joan", "Alexis", "Kris",
    "Frankie", "Bobbie", "Dale", "Robin", "Billie", "Adrian", "Kim",
    "Jaime", "Jean", "Francis", "Marion", "Dana", "Rene", "Johnnie",
    "Jordan", "Carmen", "Ollie", "Dominique", "Jimmie", "Shelby",
)

_GREENWALD_1998 = "Greenwald, McGhee & Schwartz (1998), p. 1479"
_BERTRAND_2004 = "Bertrand & Mullainathan (2004), p. 1012"
_NOSEK_2002 = "Nosek, Banaji & Greenwald (2002), p. 114"
_NOSEK_2002_MATH = "Nosek, Banaji & Greenwald (2002), math attitudes study, p. 59"


def _spec(test_id, x_label, x, y_label, y, a_label, a, b_label, b, source,
          aliases=None):
    return WeatSpec(
        test_id=test_id,
        target_x=WordSet(x_label, tuple(x)),
        target_y=WordSet(y_label, tuple(y)),
        attribute_a=WordSet(a_label, tuple(a)),
        attribute_b=WordSet(b_label, tuple(b)),
        source=source,
        aliases=dict(aliases or {}),
    )


_WEAT_BUILTINS: dict[str, WeatSpec] = {
    "flowers_insects": _spec(
        "flowers_insects",
        "flowers", _FLOWERS, "insects", _INSECTS,
        "pleasant", _PLEASANT_25, "unpleasant", _UNPLEASANT_25,
        _GREENWALD_1998,
    ),
    "instruments_weapons": _spec(
        "instruments_weapons",
        "instruments", _INSTRUMENTS, "weapons", _WEAPONS,
        "pleasant", _PLEASANT_25, "unpleasant", _UNPLEASANT_25,
        _GREENWALD_1998,
    ),
    "race_names_valence": _spec(
        "race_names_valence",
        "european_american_names", _EURO_AMERICAN_NAMES,
        "african_american_names", _AFRICAN_AMERICAN_NAMES,
        "pleasant", _PLEASANT_25, "unpleasant", _UNPLEASANT_25_NAMES,
        _GREENWALD_1998,
        aliases={"Tvree": ("Tyree",)},
    ),
    "bertrand_greenwald": _spec(
        "bertrand_greenwald",
        "european_american_names", _BERTRAND_EURO_NAMES,
        "african_american_names", _BERTRAND_AFRICAN_NAMES,
        "pleasant", _PLEASANT_25, "unpleasant", _UNPLEASANT_25_NAMES,
        f"names: {_BERTRAND_2004}; attributes: {_GREENWALD_1998}",
    ),
    "bertrand_nosek": _spec(
        "bertrand_nosek",
        "european_american_names", _BERTRAND_EURO_NAMES,
        "african_american_names", _BERTRAND_AFRICAN_NAMES,
        "pleasantness", _NOSEK_PLEASANT, "unpleasantness", _NOSEK_UNPLEASANT,
        f"names: {_BERTRAND_2004}; attributes: {_NOSEK_2002}",
    ),
    "career_family": _spec(
        "career_family",
        "male_names", _MALE_NAMES, "female_names", _FEMALE_NAMES,
        "career", _CAREER_WORDS, "family", _FAMILY_WORDS,
        _NOSEK_2002,
    ),
    "math_arts": _spec(
        "math_arts",
        "math", _MATH_WORDS, "arts", _ARTS_WORDS_MATH,
        "male", _MALE_ATTRIBUTES, "female", _FEMALE_ATTRIBUTES,
        _NOSEK_2002,
    ),
    "science_arts": _spec(
        "science_arts",
        "science", _SCIENCE_WORDS, "arts", _ARTS_WORDS_SCIENCE,
        "male", _MALE_ATTRIBUTES_FAMILIAL, "female", _FEMALE_ATTRIBUTES_FAMILIAL,
        _NOSEK_2002_MATH,
    ),
}

_WEFAT_BUILTINS: dict[str, tuple[WordSet, WordSet, WordSet, str]] = {
    "occupations": (
        WordSet("occupations", _OCCUPATIONS),
        WordSet("female", _FEMALE_ATTRIBUTES),
        WordSet("male", _MALE_ATTRIBUTES),
        "occupation words from 2015 U.S. Bureau of Labor Statistics "
        f"categories; gender attributes: {_NOSEK_2002}",
    ),
    "androgynous_names": (
        WordSet("androgynous_names", _ANDROGYNOUS_NAMES),
        WordSet("female", _FEMALE_ATTRIBUTES),
        WordSet("male", _MALE_ATTRIBUTES),
        "most popular androgynous names per 1990 U.S. Census gender window; "
        f"gender attributes: {_NOSEK_2002}",
    ),
}

WEAT_TEST_IDS = tuple(_WEAT_BUILTINS)
WEFAT_TEST_IDS = tuple(_WEFAT_BUILTINS)


def builtin_weat(test_id: str) -> WeatSpec:
    """Return a built-in association-test spec by id."""
    try:
        return _WEAT_BUILTINS[test_id]
    except KeyError:
        raise UsageError(
            f"unknown test id {test_id!r}; valid: {', '.join(WEAT_TEST_IDS)}"
        ) from None


def builtin_wefat(test_id: str) -> tuple[WordSet, WordSet, WordSet]:
    """Return (targets, attribute_a, attribute_b) for a built-in factual test."""
    try:
        targets, attr_a, attr_b, _ = _WEFAT_BUILTINS[test_id]
    except KeyError:
        raise UsageError(
            f"unknown test id {test_id!r}; valid: {', '.join(WEFAT_TEST_IDS)}"
        ) from None
    return targets, attr_a, attr_b


def builtin_wefat_source(test_id: str) -> str:
    try:
        return _WEFAT_BUILTINS[test_id][3]
    except KeyError:
        raise UsageError(
            f"unknown test id {test_id!r}; valid: {', '.join(WEFAT_TEST_IDS)}"
        ) from None


# ---------------------------------------------------------------------------
# JSON spec files
# ---------------------------------------------------------------------------


def _wordset_from_json(doc: dict, key: str) -> WordSet:
    if key not in doc:
        raise UsageError(f"spec document is missing field {key!r}")
    entry = doc[key]
    if not isinstance(entry, dict) or "words" not in entry:
        raise UsageError(f"field {key!r} must be an object with 'label' and 'words'")
    words = entry["words"]
    if (not isinstance(words, list) or not words
            or not all(isinstance(w, str) for w in words)):
        raise UsageError(f"field {key!r}: 'words' must be a non-empty string list")
    label = entry.get("label", key)
    if not isinstance(label, str):
        raise UsageError(f"field {key!r}: 'label' must be a string")
    seen = set()
    for w in words:
        if w in seen:
            raise UsageError(f"field {key!r}: duplicate word {w!r}")
        seen.add(w)
    return WordSet(label, tuple(words))


def spec_to_json(spec: WeatSpec) -> dict:
    """The JSON document form of a spec (the load_spec schema)."""
    doc = {
        "test_id": spec.test_id,
        "X": {"label": spec.target_x.label, "words": list(spec.target_x.words)},
        "Y": {"label": spec.target_y.label, "words": list(spec.target_y.words)},
        "A": {"label": spec.attribute_a.label, "words": list(spec.attribute_a.words)},
        "B": {"label": spec.attribute_b.label, "words": list(spec.attribute_b.words)},
        "source": spec.source,
    }
    if spec.aliases:
        doc["aliases"] = {w: list(alts) for w, alts in spec.aliases.items()}
    return doc


def load_spec(source) -> WeatSpec:
    """Load and validate a JSON test spec.

    The document carries ``test_id`` plus objects ``X``, ``Y``, ``A``, ``B``
    each with ``label`` and ``words``; optional ``source`` and ``aliases``.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    elif isinstance(source, dict):
        doc = source
    else:
        doc = json.load(source)
    if not isinstance(doc, dict):
        raise UsageError("spec document must be a JSON object")
    if "test_id" not in doc or not isinstance(doc["test_id"], str):
        raise UsageError("spec document is missing string field 'test_id'")
    target_x = _wordset_from_json(doc, "X")
    target_y = _wordset_from_json(doc, "Y")
    attribute_a = _wordset_from_json(doc, "A")
    attribute_b = _wordset_from_json(doc, "B")
    overlap = set(target_x.words) & set(target_y.words)
    if overlap:
        raise UsageError(f"words in both X and Y: {sorted(overlap)}")
    overlap = set(attribute_a.words) & set(attribute_b.words)
    if overlap:
        raise UsageError(f"words in both A and B: {sorted(overlap)}")
    aliases = doc.get("aliases", {})
    if not isinstance(aliases, dict):
        raise UsageError("'aliases' must map words to lists of alternates")
    parsed_aliases = {}
    for word, alts in aliases.items():
        if not isinstance(alts, list) or not all(isinstance(a, str) for a in alts):
            raise UsageError(f"aliases for {word!r} must be a string list")
        parsed_aliases[word] = tuple(alts)
    return WeatSpec(
        test_id=doc["test_id"],
        target_x=target_x,
        target_y=target_y,
        attribute_a=attribute_a,
        attribute_b=attribute_b,
        source=doc.get("source", ""),
        aliases=parsed_aliases,
    )


# ---------------------------------------------------------------------------
# Resolution against a store
# ---------------------------------------------------------------------------


def _resolve_word(
    word: str,
    spec: WeatSpec,
    store: EmbeddingStore,
    fallback_chain: Sequence[str],
) -> tuple[str | None, list[str]]:
    """Return (matched stored token or None, attempted forms)."""
    attempts = []
    for candidate in (word, *spec.aliases.get(word, ())):
        result = store.lookup(candidate, fallback_chain)
        attempts.append(candidate)
        if result.hit:
            return result.matched, attempts
    return None, attempts


def resolve(
    spec: WeatSpec,
    store: EmbeddingStore,
    fallback_chain: Sequence[str] = ("exact",),
    seed: int = 0,
) -> ResolvedSpec:
    """Restrict a spec to the store's vocabulary.

    Missing words are dropped and recorded per set. If the target sets then
    differ in size, words are deleted uniformly at random (seeded) from the
    larger target set until sizes match; attribute sets are never rebalanced.
    Any set resolving to fewer than 2 words is an error.
    """
    token_map: dict[str, str] = {}
    fallback_hits: list[tuple[str, str, str]] = []
    missing: list[tuple[str, str]] = []
    kept: list[list[str]] = []
    for word_set in spec.sets():
        kept_words = []
        for word in word_set.words:
            matched, _attempts = _resolve_word(word, spec, store, fallback_chain)
            if matched is None:
                missing.append((word_set.label, word))
            else:
                kept_words.append(word)
                token_map[word] = matched
                if matched != word:
                    fallback_hits.append((word_set.label, word, matched))
        kept.append(kept_words)

    kept_x, kept_y, kept_a, kept_b = kept
    deletions: list[tuple[str, str]] = []
    rng = np.random.default_rng(seed)
    if len(kept_x) != len(kept_y):
        larger, larger_label = (
            (kept_x, spec.target_x.label)
            if len(kept_x) > len(kept_y)
            else (kept_y, spec.target_y.label)
        )
        excess = abs(len(kept_x) - len(kept_y))
        doomed = sorted(rng.choice(len(larger), size=excess, replace=False))
        deletions = [(larger_label, larger[i]) for i in doomed]
        for i in reversed(doomed):
            del larger[i]

    for word_set, kept_words in zip(spec.sets(), kept):
        if len(kept_words) < 2:
            raise ResolutionError(
                f"set {word_set.label!r} resolved to fewer than 2 words "
                f"({kept_words}); statistics would be degenerate"
            )

    resolved = WeatSpec(
        test_id=spec.test_id,
        target_x=WordSet(spec.target_x.label, tuple(kept_x)),
        target_y=WordSet(spec.target_y.label, tuple(kept_y)),
        attribute_a=WordSet(spec.attribute_a.label, tuple(kept_a)),
        attribute_b=WordSet(spec.attribute_b.label, tuple(kept_b)),
        source=spec.source,
        aliases=spec.aliases,
    )
    return ResolvedSpec(
        spec=resolved,
        missing=tuple(missing),
        rebalance_deletions=tuple(deletions),
        seed_used=seed,
        token_map=token_map,
        fallback_hits=tuple(fallback_hits),
    )
