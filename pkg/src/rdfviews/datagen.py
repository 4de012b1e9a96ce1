"""Seeded generator of music-catalogue datasets in three source shapes.

The shapes reproduce the heterogeneity that views are meant to hide:

* ``jamendo`` states authorship with ``foaf:made``, ``foaf:maker`` or both,
  depending on the record;
* ``magnatune`` only ever states ``foaf:maker``;
* ``peel`` describes performances: performer, place, the recorded signal and
  the tracks it was published as.

Which optional attributes an entity carries depends only on its index, so
the triple count of a profile has a closed form (:func:`expected_triple_count`).
The seed drives literal values and a few IRI choices.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field

from .graph import Dataset, Graph
from .terms import (
    BIO,
    DBTUNE,
    DC,
    EVENT,
    FOAF,
    MO,
    OWL,
    RDF_TYPE,
    RDFS,
    RDFS_DOMAIN,
    RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF,
    TERMS,
    XSD_INTEGER,
    IRI,
    Literal,
)

SHAPES = ("jamendo", "magnatune", "peel")
GRAPH_NAMES = {shape: IRI(DBTUNE + shape) for shape in SHAPES}
USA = IRI("http://dbpedia.org/resource/USA")

# share of each shape in a mixed corpus
CORPUS_MIX = {"jamendo": 0.50, "magnatune": 0.31, "peel": 0.19}

SCHEMA = (
    (IRI(MO + "Record"), RDFS_SUBCLASSOF, IRI(MO + "MusicalManifestation")),
    (IRI(MO + "Track"), RDFS_SUBCLASSOF, IRI(MO + "MusicalManifestation")),
    (IRI(MO + "singer"), RDFS_SUBPROPERTYOF, IRI(MO + "performer")),
    (IRI(MO + "performer"), RDFS_SUBPROPERTYOF, IRI(EVENT + "agent")),
    (IRI(MO + "chart_position"), RDFS_DOMAIN, IRI(MO + "MusicalManifestation")),
)

_WORDS = [
    "Amber", "Blue", "Crimson", "Delta", "Echo", "Falcon", "Golden", "Harbor",
    "Iron", "Jade", "Kite", "Lunar", "Marble", "Night", "Orbit", "Prism",
    "Quiet", "River", "Silver", "Tidal", "Umbra", "Velvet", "Willow", "Zephyr",
]


@dataclass(frozen=True)
class GenProfile:
    shape: str
    artist_count: int
    records_per_artist: int = 2
    tracks_per_record: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {', '.join(SHAPES)}")
        if min(self.artist_count, self.records_per_artist, self.tracks_per_record) < 0:
            raise ValueError("counts must be non-negative")


@dataclass
class Manifest:
    """Ground truth recorded while generating."""

    profile: dict
    triples: int = 0
    authored: list = field(default_factory=list)  # (artist IRI, record IRI)
    colleagues: list = field(default_factory=list)  # (artist IRI, artist IRI), both orders

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        data = json.loads(text)
        return cls(
            data["profile"],
            data["triples"],
            [tuple(p) for p in data["authored"]],
            [tuple(p) for p in data["colleagues"]],
        )


def _count(n: int, m: int, r: int = 0) -> int:
    """Number of i in range(n) with i % m == r."""
    if n <= r:
        return 0
    return (n - 1 - r) // m + 1


def _count_pairs(a: int, b: int, m: int, r: int) -> int:
    """Number of (i, j) in range(a) x range(b) with (i + j) % m == r."""
    total = 0
    for i_mod in range(m):
        ni = _count(a, m, i_mod)
        if ni:
            total += ni * _count(b, m, (r - i_mod) % m)
    return total


def expected_triple_count(p: GenProfile) -> int:
    """Closed-form triple count of :func:`generate` for a profile."""
    a, r, t = p.artist_count, p.records_per_artist, p.tracks_per_record
    n = len(SCHEMA)
    if p.shape == "jamendo":
        # type, name, based_near + img/biography/olb/sameAs on some artists
        n += 3 * a + _count(a, 2) + _count(a, 3) + _count(a, 5) + _count(a, 7)
        # type, title + one or two authorship edges + availability
        n += 2 * a * r + a * r + _count_pairs(a, r, 3, 2) + _count_pairs(a, r, 2, 0)
        # record->track, type, title
        n += 3 * a * r * t
    elif p.shape == "magnatune":
        n += 3 * a + _count(a, 2)
        n += 3 * a * r
        n += 2 * a * r * t
    else:
        places = _place_count(a)
        # artist: type, name; place: label
        n += 2 * a + places
        # performance: type, performer (or singer), performed, place, recorded_as;
        # signal: type
        n += 6 * a * r
        # per published track: published_as, type, track_number + chart position on some
        n += 3 * a * r * t + a * r * _count(t, 4)
    return n


def _place_count(artists: int) -> int:
    return max(1, artists // 3) if artists else 0


class _Emitter:
    def __init__(self):
        self.ids: set = set()
        self._cache: dict = {}

    def term(self, t) -> int:
        tid = self._cache.get(t)
        if tid is None:
            tid = self._cache[t] = TERMS.intern(t)
        return tid

    def iri(self, value: str) -> int:
        return self.term(IRI(value))

    def emit(self, s: int, p: int, o: int) -> None:
        self.ids.add((s, p, o))


def _name(rng: random.Random, i: int) -> str:
    words = f"{rng.choice(_WORDS)} {rng.choice(_WORDS)}"
    # every fourth artist has a "The ..." name so REGEX(^the) filters select something
    return f"The {words}" if i % 4 == 0 else f"{words} {i}"


def generate(p: GenProfile):
    """Generate ``(Graph, Manifest)`` for a profile; deterministic per profile."""
    rng = random.Random(f"{p.shape}:{p.seed}")
    e = _Emitter()
    for s, pr, o in SCHEMA:
        e.emit(e.term(s), e.term(pr), e.term(o))
    manifest = Manifest(asdict(p))
    base = f"{DBTUNE}{p.shape}/"
    a_type = e.term(RDF_TYPE)
    iri = e.iri
    lit = lambda v: e.term(Literal(v))  # noqa: E731
    MUSIC_ARTIST, RECORD, TRACK = iri(MO + "MusicArtist"), iri(MO + "Record"), iri(MO + "Track")
    NAME, MADE, MAKER = iri(FOAF + "name"), iri(FOAF + "made"), iri(FOAF + "maker")
    TITLE, HAS_TRACK, BASED_NEAR = iri(DC + "title"), iri(MO + "track"), iri(FOAF + "based_near")

    if p.shape in ("jamendo", "magnatune"):
        for i in range(p.artist_count):
            artist = iri(f"{base}artist/{i}")
            artist_iri = f"{base}artist/{i}"
            e.emit(artist, a_type, MUSIC_ARTIST)
            e.emit(artist, NAME, lit(_name(rng, i)))
            if p.shape == "jamendo":
                if i % 6 == 0:
                    place = e.term(USA)
                elif i % 4 == 3:
                    place = lit(f"{rng.choice(_WORDS)} county")
                else:
                    place = iri(f"http://sws.geonames.org/{rng.randrange(10**6)}/")
                e.emit(artist, BASED_NEAR, place)
                if i % 2 == 0:
                    e.emit(artist, iri(FOAF + "img"), iri(f"{base}img/{i}.jpg"))
                if i % 3 == 0:
                    e.emit(artist, iri(MO + "biography"), lit(f"Biography of artist {i}"))
                if i % 5 == 0:
                    e.emit(artist, iri(BIO + "olb"), lit(f"{rng.choice(_WORDS)} musician"))
                if i % 7 == 0:
                    e.emit(artist, iri(OWL + "sameAs"), iri(f"{DBTUNE}musicbrainz/artist/{rng.randrange(10**6)}"))
            else:
                place = e.term(USA) if i % 3 == 0 else iri(f"http://sws.geonames.org/{rng.randrange(10**6)}/")
                e.emit(artist, BASED_NEAR, place)
                if i % 2 == 0:
                    e.emit(artist, iri(MO + "biography"), lit(f"Biography of artist {i}"))
            for j in range(p.records_per_artist):
                rec_iri = f"{base}record/{i}_{j}"
                record = iri(rec_iri)
                e.emit(record, a_type, RECORD)
                e.emit(record, TITLE, lit(f"{rng.choice(_WORDS)} {rng.choice(_WORDS)} {j}"))
                manifest.authored.append((artist_iri, rec_iri))
                if p.shape == "jamendo":
                    mode = (i + j) % 3  # 0 made only, 1 maker only, 2 both
                    if mode in (0, 2):
                        e.emit(artist, MADE, record)
                    if mode in (1, 2):
                        e.emit(record, MAKER, artist)
                    if (i + j) % 2 == 0:
                        e.emit(record, iri(MO + "available_as"), iri(f"{base}download/{i}_{j}"))
                else:
                    e.emit(record, MAKER, artist)
                for k in range(p.tracks_per_record):
                    track = iri(f"{base}track/{i}_{j}_{k}")
                    e.emit(record, HAS_TRACK, track)
                    e.emit(track, a_type, TRACK)
                    if p.shape == "jamendo":
                        e.emit(track, TITLE, lit(f"Track {k + 1} of {i}_{j}"))
    else:
        places = [iri(f"{base}place/{n}") for n in range(_place_count(p.artist_count))]
        for n, pl in enumerate(places):
            e.emit(pl, iri(RDFS + "label"), lit(f"{rng.choice(_WORDS)} Hall {n}"))
        PERFORMANCE, SIGNAL = iri(MO + "Performance"), iri(MO + "Signal")
        PERFORMER, SINGER, PERFORMED = iri(MO + "performer"), iri(MO + "singer"), iri(MO + "performed")
        PLACE, RECORDED_AS = iri(EVENT + "place"), iri(MO + "recorded_as")
        PUBLISHED_AS, TRACK_NUMBER = iri(MO + "published_as"), iri(MO + "track_number")
        CHART = iri(MO + "chart_position")
        venues: dict = {}
        for i in range(p.artist_count):
            artist_iri = f"{base}artist/{i}"
            artist = iri(artist_iri)
            e.emit(artist, a_type, MUSIC_ARTIST)
            e.emit(artist, NAME, lit(_name(rng, i)))
            for j in range(p.records_per_artist):
                perf = iri(f"{base}performance/{i}_{j}")
                e.emit(perf, a_type, PERFORMANCE)
                # some sessions only state the more specific mo:singer
                e.emit(perf, SINGER if (i + j) % 5 == 0 else PERFORMER, artist)
                e.emit(artist, PERFORMED, perf)
                place_no = (i + j) % len(places)
                e.emit(perf, PLACE, places[place_no])
                venues.setdefault(place_no, set()).add(artist_iri)
                signal = iri(f"{base}signal/{i}_{j}")
                e.emit(perf, RECORDED_AS, signal)
                e.emit(signal, a_type, SIGNAL)
                for k in range(p.tracks_per_record):
                    track = iri(f"{base}track/{i}_{j}_{k}")
                    e.emit(signal, PUBLISHED_AS, track)
                    e.emit(track, a_type, TRACK)
                    e.emit(track, TRACK_NUMBER, e.term(Literal(str(k + 1), XSD_INTEGER)))
                    if k % 4 == 0:
                        e.emit(track, CHART, e.term(Literal(str(rng.randrange(1, 41)), XSD_INTEGER)))
        pairs = set()
        for members in venues.values():
            for x in members:
                for y in members:
                    if x != y:
                        pairs.add((x, y))
        manifest.colleagues = sorted(pairs)

    graph = Graph.from_ids(e.ids)
    manifest.triples = len(graph)
    return graph, manifest


def artists_for_size(shape: str, target: int, records_per_artist: int = 2, tracks_per_record: int = 3) -> int:
    """Smallest artist count whose profile reaches ``target`` triples."""
    lo, hi = 0, 1
    probe = lambda a: expected_triple_count(  # noqa: E731
        GenProfile(shape, a, records_per_artist, tracks_per_record)
    )
    while probe(hi) < target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid) < target:
            lo = mid + 1
        else:
            hi = mid
    return lo


def build_corpus(target_triples: int, seed: int = 0):
    """Mixed dataset of roughly ``target_triples`` triples.

    Each shape goes into its own named graph (``http://dbtune.org/<shape>``)
    and the default graph holds the union of all three.  Returns
    ``(Dataset, {shape: Manifest})``.
    """
    ds = Dataset()
    manifests = {}
    parts = []
    for shape in SHAPES:
        share = max(1, int(round(target_triples * CORPUS_MIX[shape])))
        profile = GenProfile(shape, artists_for_size(shape, share), seed=seed)
        g, m = generate(profile)
        ds.named[GRAPH_NAMES[shape]] = g
        manifests[shape] = m
        parts.append(g.id_triples())
    ds.default_graph = Graph.from_ids(set().union(*parts))
    return ds, manifests


__all__ = [
    "GenProfile",
    "Manifest",
    "SHAPES",
    "GRAPH_NAMES",
    "SCHEMA",
    "CORPUS_MIX",
    "generate",
    "expected_triple_count",
    "artists_for_size",
    "build_corpus",
]
