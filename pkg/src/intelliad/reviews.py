"""Review mining: ad-review filtering, phrase candidates, keyword cost labels."""

import datetime
import enum
import json
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .errors import InvalidReview, UnmappedApp

DEFAULT_RATING_CUTOFF = 3

AD_PATTERN = re.compile(r"\bad(?:s|vert\w*)?\b")
_WORD = re.compile(r"[a-z0-9]+(?:'[a-z]+)*")


class CostType(enum.Enum):
    NUM_ADS = "NumAds"
    MEM_CPU = "MemCpu"
    TRAFFIC = "Traffic"
    BATTERY = "Battery"


@dataclass(frozen=True)
class ReviewRecord:
    app_id: str
    rating: int
    date: str
    text: str

    def __post_init__(self):
        if isinstance(self.rating, bool) or not isinstance(self.rating, int) \
                or not 1 <= self.rating <= 5:
            raise InvalidReview(f"rating must be an integer 1-5, got {self.rating!r}")
        try:
            datetime.date.fromisoformat(self.date)
        except (TypeError, ValueError):
            raise InvalidReview(f"date must be YYYY-MM-DD, got {self.date!r}") from None

    def to_json(self):
        return {"app_id": self.app_id, "rating": self.rating, "date": self.date, "text": self.text}


def load_reviews(path):
    """Read JSON-lines reviews; raises InvalidReview naming the bad line."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out.append(ReviewRecord(str(obj["app_id"]), obj["rating"], obj["date"], obj["text"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InvalidReview(f"{path}:{n}: {exc!r}") from exc
            except InvalidReview as exc:
                raise InvalidReview(f"{path}:{n}: {exc}") from exc
    return out


def tokenize(text):
    return _WORD.findall(text.lower())


def is_ad_review(text):
    return AD_PATTERN.search(text.lower()) is not None


def filter_ad_reviews(reviews):
    return [r for r in reviews if is_ad_review(r.text)]


# phrase candidates

class PhraseCandidate(NamedTuple):
    tokens: tuple
    count: int

    @property
    def text(self):
        return " ".join(self.tokens)


def load_stopwords(path=None):
    if path is None:
        text = (resources.files("intelliad") / "data" / "stopwords.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines()
                     if w.strip() and not w.startswith("#"))


def content_tokens(text, stopwords):
    return [w for w in tokenize(text) if w not in stopwords]


def extract_phrase_candidates(reviews, stopwords):
    """Adjacent word pairs left after stopword removal, most frequent first."""
    counts = Counter()
    for r in reviews:
        words = content_tokens(r.text, stopwords)
        counts.update(zip(words, words[1:]))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [PhraseCandidate(pair, n) for pair, n in ranked]


# keyword classification

class KeywordTable:
    """Keywords / key phrases per cost type, matched case-insensitively.

    A keyword matches whole words; its last word may carry a plural "s"/"es",
    so "many ad" matches "many ads" while "ram" matches neither "program"
    nor "ramp" and "drain" does not match "drainage" (the table lists both).
    """

    def __init__(self, mapping):
        table = {}
        for key, words in mapping.items():
            cost = key if isinstance(key, CostType) else CostType(key)
            cleaned = tuple(w.strip().lower() for w in words if w.strip())
            if not cleaned:
                raise ValueError(f"cost type {cost.value} has no keywords")
            table[cost] = cleaned
        missing = set(CostType) - set(table)
        if missing:
            raise ValueError("keyword table lacks " + ", ".join(sorted(c.value for c in missing)))
        self.table = table

    def __getitem__(self, cost):
        return self.table[cost]

    def patterns(self):
        return _compile(tuple((c, self.table[c]) for c in CostType))

    def to_json(self):
        return {c.value: list(self.table[c]) for c in CostType}

    @classmethod
    def load(cls, path=None):
        if path is None:
            ref = resources.files("intelliad") / "data" / "keywords.json"
            return cls(json.loads(ref.read_text(encoding="utf-8")))
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=32)
def _compile(items):
    out = {}
    for cost, words in items:
        alts = sorted({r"\s+".join(re.escape(part) for part in w.split()) for w in words})
        out[cost] = re.compile(r"(?<![a-z0-9])(?:" + "|".join(alts) + r")(?:e?s)?(?![a-z0-9])")
    return out


def normalize(text):
    return " ".join(tokenize(text))


def matched_cost_types(text, table):
    norm = normalize(text)
    return {cost for cost, pat in table.patterns().items() if pat.search(norm)}


def classify_review(review, table, rating_cutoff=DEFAULT_RATING_CUTOFF):
    """Cost types a dissatisfied review (rating < cutoff) complains about."""
    if review.rating >= rating_cutoff:
        return set()
    return matched_cost_types(review.text, table)


def aggregate_cost_ratings(reviews, table, scheme_of_app, rating_cutoff=DEFAULT_RATING_CUTOFF):
    """Mean rating of classified reviews per (scheme id, cost type)."""
    sums = defaultdict(list)
    for r in reviews:
        if r.app_id not in scheme_of_app:
            raise UnmappedApp(r.app_id)
        for cost in classify_review(r, table, rating_cutoff):
            sums[(scheme_of_app[r.app_id], cost)].append(r.rating)
    return {key: math.fsum(v) / len(v) for key, v in sorted(
        sums.items(), key=lambda kv: (kv[0][0], list(CostType).index(kv[0][1])))}


def cost_type_means(reviews, table, rating_cutoff=DEFAULT_RATING_CUTOFF):
    """Mean rating of classified reviews per cost type over the whole corpus."""
    ratings = defaultdict(list)
    for r in reviews:
        for cost in classify_review(r, table, rating_cutoff):
            ratings[cost].append(r.rating)
    return {c: math.fsum(ratings[c]) / len(ratings[c]) for c in CostType if ratings[c]}


def concern_ratios(ad_reviews, terms=("annoying", "uninstall")):
    """Share of ad reviews mentioning each term (prefix match on word starts)."""
    n = len(ad_reviews)
    out = {}
    for term in terms:
        pat = re.compile(r"(?<![a-z0-9])" + re.escape(term))
        hits = sum(1 for r in ad_reviews if pat.search(normalize(r.text)))
        out[term] = hits / n if n else 0.0
    return out
