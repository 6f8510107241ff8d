"""Bundled desk-scale corpus, synthesized deterministically.

Five clearly separated themes share a pool of function words; most
documents stay on one theme, a fraction straddles two. Small enough to
train every model in seconds, structured enough that topic models find
the themes.
"""

from __future__ import annotations

from topicgen.rng import stream

THEME_WORDS = {
    "football": [
        "football", "team", "player", "league", "coach", "season", "goal",
        "match", "stadium", "fans", "score", "win", "defense", "striker", "cup",
    ],
    "politics": [
        "government", "election", "senate", "policy", "president", "vote",
        "party", "congress", "law", "campaign", "minister", "debate", "bill",
        "state", "leader",
    ],
    "music": [
        "music", "band", "album", "song", "concert", "guitar", "singer",
        "melody", "rhythm", "festival", "record", "stage", "chorus", "piano",
        "tour",
    ],
    "physics": [
        "energy", "quantum", "particle", "theory", "field", "electron",
        "wave", "experiment", "measurement", "radiation", "photon", "mass",
        "velocity", "orbit", "laboratory",
    ],
    "transport": [
        "car", "engine", "road", "fuel", "vehicle", "driver", "traffic",
        "train", "highway", "wheel", "station", "bus", "speed", "journey",
        "garage",
    ],
}

FUNCTION_WORDS = [
    "the", "a", "of", "to", "and", "in", "is", "was", "that", "it",
    "for", "on", "with", "as", "at", "this", "are", "be", "has", "had",
]

DEFAULT_SEED = 20240801


def theme_names() -> list[str]:
    return list(THEME_WORDS)


def desk_corpus(
    n_docs: int = 800,
    seed: int = DEFAULT_SEED,
    mixed_fraction: float = 0.2,
) -> list[str]:
    """One document per list entry; themes assigned round-robin-free."""
    rng = stream(seed)
    themes = list(THEME_WORDS)
    docs = []
    for _ in range(n_docs):
        primary = themes[rng.integers(len(themes))]
        pools = [THEME_WORDS[primary]]
        if rng.random() < mixed_fraction:
            other = themes[rng.integers(len(themes))]
            if other != primary:
                pools.append(THEME_WORDS[other])
        sentences = []
        for _ in range(rng.integers(2, 5)):
            length = int(rng.integers(8, 15))
            words = []
            for _ in range(length):
                if rng.random() < 0.45:
                    pool = pools[rng.integers(len(pools))]
                    words.append(pool[rng.integers(len(pool))])
                else:
                    words.append(FUNCTION_WORDS[rng.integers(len(FUNCTION_WORDS))])
            sentences.append(" ".join(words) + ".")
        docs.append(" ".join(sentences))
    return docs
