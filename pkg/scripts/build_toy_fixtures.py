#!/usr/bin/env python3
"""Build the packaged toy fixtures: taxonomy, corpus, lexicons, patterns,
gold questions, the definition-interpretation suite and the golden entity
library.

Everything here is authored data; the golden library is derived from the
entity tables below (not by running the library builder), so tests compare
the builder against an independent hand derivation. The script is
deterministic: rerunning it reproduces byte-identical files.

Document DSL
------------
A document is a list of sentence strings. Tokens are space-separated;
``[`` ... ``]`` wraps a nominal group, ``{`` ... ``}`` a coordination
group (groups may nest), ``*`` prefixes the semantic-head token of the
innermost group, and ``<p>`` is a paragraph break. A token may carry
``surface|lemma|class`` overrides; otherwise the shared lexicon decides,
with capitalized unknowns treated as proper names (lemma = surface) and
digit strings as numerals.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from entityqa.corpus import (AnnotatedDocument, Segment, SyntacticGroup,
                             serialize_document)

OUT = ROOT / "fixtures" / "toy"
SUITE_OUT = ROOT / "fixtures" / "definitions"

DETERMINERS = ("a", "an", "the")

# --- shared toy-language lexicon: word -> (lemma, tag class) -----------------

NOUNS = {
    "king": "king", "kings": "king", "monarch": "monarch", "monarchs": "monarch",
    "person": "person", "persons": "person", "people": "person",
    "bird": "bird", "birds": "bird", "seabird": "seabird", "seabirds": "seabird",
    "tern": "tern", "terns": "tern", "unit": "unit", "units": "unit",
    "kilogram": "kilogram", "kilograms": "kilogram",
    "watt": "watt", "watts": "watt",
    "vehicle": "vehicle", "vehicles": "vehicle",
    "submarine": "submarine", "submarines": "submarine",
    "crew": "crew", "sailor": "sailor", "sailors": "sailor",
    "year": "year", "years": "year", "country": "country",
    "minister": "minister", "republic": "republic", "navy": "navy",
    "fleet": "fleet", "museum": "museum", "wreck": "wreck",
    "station": "station", "stations": "station", "harbour": "harbour",
    "city": "city", "family": "family", "coast": "coast", "coasts": "coast",
    "island": "island", "islands": "island", "sea": "sea", "seas": "sea",
    "ocean": "ocean", "cliff": "cliff", "cliffs": "cliff",
    "water": "water", "waters": "water", "fish": "fish", "reef": "reef",
    "beak": "beak", "head": "head", "dance": "dance", "ship": "ship",
    "ships": "ship", "forest": "forest", "worm": "worm", "worms": "worm",
    "air": "air", "pirate": "pirate", "storm": "storm", "land": "land",
    "lands": "land", "weather": "weather", "ice": "ice", "map": "map",
    "maps": "map", "patrol": "patrol", "day": "day", "days": "day",
    "trial": "trial", "trials": "trial", "load": "load", "loads": "load",
    "mountain": "mountain", "mountains": "mountain", "bell": "bell",
    "corner": "corner", "court": "court", "crown": "crown", "crowns": "crown",
    "bridge": "bridge", "river": "river", "castle": "castle",
    "castles": "castle", "army": "army", "infantry": "infantry",
    "fjord": "fjord", "summer": "summer", "winter": "winter",
    "book": "book", "books": "book", "depository": "depository",
    "painting": "painting", "paintings": "painting", "ray": "ray",
    "rays": "ray", "laboratory": "laboratory", "kingdom": "kingdom",
    "kingdoms": "kingdom", "union": "union", "peace": "peace",
    "wave": "wave", "waves": "wave", "height": "height", "night": "night",
    "voyage": "voyage", "admiral": "admiral", "gate": "gate",
    "gates": "gate", "cavalry": "cavalry", "force": "force",
    "pressure": "pressure", "mass": "mass", "power": "power",
    "engine": "engine", "goods": "goods", "cargo": "cargo",
    "grain": "grain", "scale": "scale", "market": "market",
    "lighthouse": "lighthouse", "tower": "tower", "fortress": "fortress",
    "warship": "warship", "vessel": "vessel", "vessels": "vessel",
    "mill": "mill", "road": "road", "roads": "road", "hill": "hill",
    "hills": "hill", "pier": "pier", "yard": "yard", "mine": "mine",
    "barn": "barn", "grove": "grove", "forge": "forge", "house": "house",
    "rope": "rope", "salt": "salt", "wool": "wool", "tar": "tar",
    "oak": "oak", "glass": "glass", "stone": "stone", "copper": "copper",
    "clock": "clock", "trade": "trade", "boat": "boat", "boats": "boat",
    "net": "net", "nets": "net", "lamp": "lamp", "lamps": "lamp",
    "candle": "candle", "candles": "candle", "wind": "wind",
    "rain": "rain", "snow": "snow", "fog": "fog", "tide": "tide",
    "tides": "tide", "line": "line", "lines": "line", "flight": "flight",
    "program": "program", "reign": "reign", "war": "war",
    "state": "state", "letter": "letters", "letters": "letters",
    "science": "science", "talent": "talent", "north": "north",
    "south": "south", "metre": "metre", "gauge": "gauge",
    "gauges": "gauge", "reading": "reading", "readings": "reading",
    "queen": "queen", "cards": "card", "mind": "mind", "bay": "bay",
    "prey": "prey", "rock": "rock", "service": "service",
}

ADJECTIVES = (
    "russian", "exiled", "european", "whole", "maiden", "northern",
    "southern", "eastern", "western", "warm", "cold", "old", "first",
    "grey", "white", "royal", "common", "silent", "deep", "great", "tall",
    "swedish", "orange", "small", "heavy", "new", "long", "prime", "rough",
    "open", "coral", "high", "little", "wet", "dry", "dark", "quiet",
    "early", "late", "narrow", "wide", "sea",
)

VERBS = {
    "is": "be", "was": "be", "are": "be", "were": "be", "be": "be",
    "did": "do", "does": "do", "do": "do", "has": "have", "had": "have",
    "kill": "kill", "killed": "kill", "sink": "sink", "sank": "sink",
    "crowned": "crown", "led": "lead", "lead": "lead", "built": "build",
    "build": "build", "designed": "design", "design": "design",
    "served": "serve", "serve": "serve", "migrates": "migrate",
    "migrate": "migrate", "breeds": "breed", "breed": "breed",
    "measures": "measure", "measure": "measure", "emits": "emit",
    "emit": "emit", "shows": "show", "shown": "show", "show": "show",
    "explores": "explore", "explore": "explore", "guards": "guard",
    "guard": "guard", "returned": "return", "return": "return",
    "began": "begin", "begin": "begin", "lasted": "last",
    "sailed": "sail", "united": "unite", "reformed": "reform",
    "collected": "collect", "worked": "work", "studied": "study",
    "ruled": "rule", "vanished": "vanish", "fly": "fly", "digs": "dig",
    "steals": "steal", "hunts": "hunt", "carries": "carry",
    "carried": "carry", "rings": "ring", "stops": "stop",
    "stayed": "stay", "crossed": "cross", "escaped": "escape",
    "dives": "dive", "nests": "nest", "glides": "glide", "nods": "nod",
    "signed": "sign", "moves": "move", "operates": "operate",
    "weighed": "weigh", "produced": "produce", "describes": "describe",
    "arrived": "arrive", "winds": "wind", "used": "use", "use": "use",
    "came": "come", "kept": "keep", "burns": "burn", "turns": "turn",
    "dries": "dry", "mends": "mend", "sells": "sell", "hums": "hum",
    "creaks": "creak", "leans": "lean", "rests": "rest", "born": "bear",
    "could": "can", "cannot": "can", "can": "can", "lost": "lose",
}

FUNCTION_WORDS = (
    "the", "a", "an", "of", "in", "on", "at", "to", "from", "with", "its",
    "his", "her", "as", "by", "for", "and", "or", "not", "no", "it", "he",
    "she", "they", "this", "that", "after", "before", "during", "under",
    "over", "every", "all", "both", "who", "whom", "whose", "which",
    "what", "when", "where", "how", "many", "much", "into", "near",
    "along", "through", "between", "without", "beneath", "against",
    "other", "far", "then", "there", "up", "down", "out", "off", "about",
    "high", "one",
)

NUMERAL_WORDS = ("ten", "fifteen", "twenty", "ninety", "hundred",
                 "thousand", "million", "several")

LEXICON: dict[str, tuple[str, str]] = {}
for word, lemma in NOUNS.items():
    LEXICON[word] = (lemma, "nominal")
for word in ADJECTIVES:
    LEXICON.setdefault(word, (word, "nominal"))
for word, lemma in VERBS.items():
    LEXICON[word] = (lemma, "other")
for word in FUNCTION_WORDS:
    LEXICON[word] = (word, "other")
for word in NUMERAL_WORDS:
    LEXICON[word] = (word, "numeral")


def _token_fields(token: str) -> tuple[str, str, str]:
    if "|" in token:
        surface, lemma, tag_class = token.split("|")
        return surface, lemma or surface, tag_class or "nominal"
    low = token.lower()
    if low in LEXICON and not token[:1].isupper():
        lemma, tag_class = LEXICON[low]
        return token, lemma, tag_class
    if low in LEXICON and token[:1].isupper():
        # Sentence-initial known word: keep the lexicon reading.
        lemma, tag_class = LEXICON[low]
        return token, lemma, tag_class
    if token[:1].isupper():
        return token, token, "nominal"
    if token.isdigit():
        return token, token, "numeral"
    if any(c.isalnum() for c in token):
        return token, low, "other"
    return token, token, "other"


def parse_sentence(dsl: str, base: int, sentence_index: int):
    """One DSL sentence -> (segments, groups with absolute spans)."""
    segments: list[Segment] = []
    groups: list[SyntacticGroup] = []
    stack: list[dict] = []
    expanded: list[str] = []
    for raw in dsl.split():
        closers = []
        while len(raw) > 1 and raw[-1] in "]}":
            closers.append(raw[-1])
            raw = raw[:-1]
        while raw[:1] in "[{" or raw[:2] in ("*[", "*{"):
            if raw[:1] in "[{":
                expanded.append(raw[0])
                raw = raw[1:]
            else:
                expanded.append(raw[:2])
                raw = raw[2:]
        if raw:
            expanded.append(raw)
        expanded.extend(reversed(closers))
    for raw in expanded:
        if raw in ("[", "{", "*[", "*{"):
            starred = raw.startswith("*")
            bracket = raw[-1]
            stack.append({"kind": "nominal" if bracket == "[" else "coordination",
                          "start": base + len(segments), "head": None,
                          "head_span": None, "starred": starred})
            continue
        if raw in ("]", "}"):
            info = stack.pop()
            end = base + len(segments)
            if info["head_span"] is not None:
                head_span = info["head_span"]
            elif info["head"] is not None:
                head_span = (info["head"], info["head"] + 1)
            else:
                head_span = (end - 1, end)
            span_segments = segments[info["start"] - base:end - base]
            lemmas = [s.lemma for s in span_segments]
            while lemmas and lemmas[0] in DETERMINERS:
                lemmas = lemmas[1:]
            groups.append(SyntacticGroup(
                span=(info["start"], end),
                kind=info["kind"],
                head_span=head_span,
                lemma=" ".join(lemmas) or None,
            ))
            if info["starred"] and stack:
                stack[-1]["head_span"] = (info["start"], end)
            continue
        head_marked = raw.startswith("*")
        token = raw[1:] if head_marked else raw
        if token == "<p>":
            segments.append(Segment(surface="¶", lemma="¶", tag="PARA",
                                    tag_class="other",
                                    sentence_index=sentence_index))
            continue
        surface, lemma, tag_class = _token_fields(token)
        if head_marked and stack:
            stack[-1]["head"] = base + len(segments)
        segments.append(Segment(surface=surface, lemma=lemma, tag=tag_class,
                                tag_class=tag_class,
                                sentence_index=sentence_index))
    assert not stack, f"unbalanced group markers in: {dsl}"
    return segments, groups


def make_document(doc_id: str, title: str, sentences: list[str],
                  page_kind: str = "article", redirect_target: str | None = None,
                  ne: list | None = None) -> AnnotatedDocument:
    segments: list[Segment] = []
    groups: list[SyntacticGroup] = []
    sentence_index = 0
    for dsl in sentences:
        segs, grps = parse_sentence(dsl, len(segments), sentence_index)
        segments.extend(segs)
        groups.extend(grps)
        sentence_index += 1
    ne_annotations = None
    if ne is not None:
        ne_annotations = []
        for item in ne:
            label, phrase = item[0], item[1]
            occurrence = item[2] if len(item) > 2 else 0
            words = phrase.split()
            found = -1
            hits = 0
            for i in range(len(segments) - len(words) + 1):
                if all(segments[i + k].surface == words[k]
                       for k in range(len(words))):
                    if hits == occurrence:
                        found = i
                        break
                    hits += 1
            assert found >= 0, f"{doc_id}: NE phrase {phrase!r} not found"
            ne_annotations.append((label, (found, found + len(words))))
        ne_annotations = tuple(ne_annotations)
    return AnnotatedDocument(
        doc_id=doc_id, title=title, page_kind=page_kind,
        segments=tuple(segments), groups=tuple(groups),
        ne_annotations=ne_annotations, redirect_target=redirect_target,
    )


# --- taxonomy -----------------------------------------------------------------

TAXONOMY = """\
# Toy taxonomy: 11 synsets, 10 hypernym edges.
S\t100\tentity:1
S\t110\tperson:1
S\t111\tmonarch:1
S\t112\tking:1
S\t120\tbird:1
S\t121\tseabird:1
S\t122\ttern:1
S\t130\tunit:1,unit of measurement:1
S\t131\tkilogram:1,watt:1
S\t140\tvehicle:1
S\t141\tsubmarine:1
H\t110\t100
H\t111\t110
H\t112\t111
H\t120\t100
H\t121\t120
H\t122\t121
H\t130\t100
H\t131\t130
H\t140\t100
H\t141\t140
"""

# --- the corpus -----------------------------------------------------------------
# (doc id, title, synsets in the golden library or None, sentences, ne)

DEFINABLE = [
    ("d001", "Casimir", {"112"}, [
        "Casimir – [a *king of Polonia] .",
        "<p>",
        "Casimir was crowned king of Polonia in 1058 .",
        "[The *reign] of Casimir began in 1058 .",
    ], [("person", "Casimir", 1), ("date", "1058", 1)]),
    ("d002", "John Sobieski", {"112"}, [
        "John Sobieski – [a *king of Polonia] .",
        "<p>",
        "John Sobieski led the winged cavalry at the gates of Vienna .",
    ], [("person", "John Sobieski", 1)]),
    ("d003", "Boleslav", {"112"}, [
        "Boleslav – [a *king of the western lands] .",
        "<p>",
        "Boleslav built many castles along the river .",
    ], [("person", "Boleslav", 1)]),
    ("d004", "Stephen Bathory", {"112"}, [
        "Stephen Bathory – [a *king of Polonia] .",
        "<p>",
        "Stephen Bathory reformed the army with new infantry .",
    ], [("person", "Stephen Bathory", 1)]),
    ("d005", "Harald", {"112"}, [
        "Harald – [a *king of the north] .",
        "<p>",
        "Harald united the fjord lands under one crown .",
    ], None),
    ("d006", "Olaf", {"112"}, [
        "Olaf – [a *king of the coast] .",
        "<p>",
        "Olaf sailed to the southern seas every summer .",
    ], None),
    ("d007", "Simeon", {"111"}, [
        "Simeon – [an exiled *monarch of Bulgaria] .",
        "<p>",
        "Simeon returned to his country as a prime minister of a republic .",
    ], [("person", "Simeon", 1)]),
    ("d008", "Christina", {"111", "110"}, [
        "Christina – [a *monarch] , [a *person of letters] .",
        "<p>",
        "Christina collected books and paintings from many lands .",
    ], [("person", "Christina", 1)]),
    ("d009", "Drzewiecki", {"110"}, [
        "Drzewiecki – [a *person of great talent] .",
        "<p>",
        "Drzewiecki designed the first submarine of the navy of Polonia .",
    ], [("person", "Drzewiecki", 1)]),
    ("d010", "John Kennedy", {"110"}, [
        "John Kennedy – [a *person of the state of Massachusetts] .",
        "<p>",
        "John Kennedy was killed in Dallas in 1963 .",
    ], [("person", "John Kennedy", 1), ("date", "1963"), ("place", "Dallas")]),
    ("d011", "Lee Oswald", {"110"}, [
        "Lee Oswald – [a *person of Dallas] .",
        "<p>",
        "Lee Oswald worked in the book depository .",
    ], [("person", "Lee Oswald", 1)]),
    ("d012", "Maria Curie", {"110"}, [
        "Maria Curie – [a *person of great science] .",
        "<p>",
        "Maria Curie studied the new rays in her laboratory .",
    ], [("person", "Maria Curie", 1)]),
    ("d013", "Mieszko", {"112"}, [
        "Mieszko – [the first *king of the old state] .",
        "<p>",
        "Mieszko came from the quiet river lands .",
    ], None),
    ("d014", "Wladyslaw", {"112"}, [
        "Wladyslaw – [a *king of two crowns] .",
        "<p>",
        "Wladyslaw ruled both kingdoms after the union .",
    ], None),
    ("d015", "Anna Regent", {"111"}, [
        "Anna Regent – [a *monarch of the north] .",
        "<p>",
        "Anna Regent signed the peace of the long winter .",
    ], [("person", "Anna Regent", 1)]),
    ("d016", "Arctic Tern", {"121"}, [
        "[The Arctic *Tern] ( Sterna paradisaea ) is [a *seabird of the [tern family]] .",
        "<p>",
        "[The Arctic *Tern] migrates from the Arctic to the Antarctic and back every year .",
    ], None),
    ("d017", "Common Tern", {"121"}, [
        "[The Common *Tern] is [a *seabird of the [tern family]] .",
        "<p>",
        "[The Common *Tern] breeds on the coasts of the northern sea .",
    ], None),
    ("d018", "Albatross", {"121"}, [
        "[The *Albatross] is [a *seabird of the southern ocean] .",
        "<p>",
        "[The *Albatross] glides over the waves for many days .",
    ], None),
    ("d019", "Fulmar", {"121"}, [
        "Fulmar – [a *seabird of the cold cliffs] .",
        "<p>",
        "The Fulmar nests high on the grey cliffs .",
    ], None),
    ("d020", "Gannet", {"121"}, [
        "Gannet – [a *seabird of the open water] .",
        "<p>",
        "The Gannet dives from great height into the water .",
    ], None),
    ("d021", "Eagle Tern", {"122"}, [
        "Eagle Tern – [a *tern of the eastern islands] .",
        "<p>",
        "The Eagle Tern hunts small fish near the reef .",
    ], None),
    ("d022", "Royal Tern", {"122"}, [
        "Royal Tern – [a *tern of the warm coasts] .",
        "<p>",
        "The Royal Tern carries an orange beak .",
    ], None),
    ("d023", "Noddy", {"122"}, [
        "Noddy – [a *tern of the coral islands] .",
        "<p>",
        "The Noddy nods its head during the dance .",
    ], None),
    ("d024", "Dodo", {"120"}, [
        "Dodo – [a *bird of the southern islands] . It could not fly .",
        "<p>",
        "The Dodo vanished after the ships arrived .",
    ], None),
    ("d025", "Kiwi", {"120"}, [
        "Kiwi – [a *bird of the night forest] .",
        "<p>",
        "The Kiwi cannot fly and digs for worms .",
    ], None),
    ("d026", "Skua", {"121"}, [
        "Skua – {[a *seabird] and [a *pirate of the air]} .",
        "<p>",
        "The Skua steals fish from other birds .",
    ], None),
    ("d027", "Petrel", {"121"}, [
        "Petrel – [a *seabird of the storm] .",
        "<p>",
        "The Petrel flies far from land in rough weather .",
    ], None),
    ("d028", "Kursk", {"141"}, [
        "Kursk – [a russian *submarine] .",
        "<p>",
        "[The *Kursk] sank in 2000 with its whole crew .",
        "A crew of 118 sailors served on the Kursk .",
    ], [("date", "2000")]),
    ("d029", "Nautilus", {"141"}, [
        "Nautilus – [a *submarine of the ' silent service ' fleet] .",
        "<p>",
        "The Nautilus crossed beneath the northern ice .",
    ], None),
    ("d030", "Orzel", {"141"}, [
        "Orzel – [a *submarine of the navy of Polonia] .",
        "<p>",
        "The Orzel escaped from the harbour without maps .",
    ], None),
    ("d031", "Steel Shark", {"141"}, [
        "Steel Shark – [a *submarine of the deep patrol] .",
        "<p>",
        "The Steel Shark stayed below for ninety days .",
    ], None),
    ("d032", "Thresher", {"141"}, [
        "Thresher – [a *submarine of the trial fleet] .",
        "<p>",
        "The Thresher was lost during deep trials .",
    ], None),
    ("d033", "Albatross Bomber", {"140"}, [
        "Albatross Bomber – [a *vehicle of the air force] .",
        "<p>",
        "The Albatross Bomber carried heavy loads over the mountains .",
    ], None),
    ("d034", "Red Tram", {"140"}, [
        "Red Tram – [a *vehicle of the city lines] .",
        "<p>",
        "The Red Tram rings its bell at every corner .",
    ], None),
    ("d035", "Silver Coach", {"140"}, [
        "Silver Coach – [a *vehicle of the royal court] .",
        "<p>",
        "The Silver Coach carried the crown across the bridge .",
    ], None),
    ("d036", "Blue Bus", {"140"}, [
        "Blue Bus – [a *vehicle of the island roads] .",
        "<p>",
        "The Blue Bus stops at the old lighthouse .",
    ], None),
    ("d037", "Kilogram", {"130"}, [
        "Kilogram – [a *unit of mass] .",
        "<p>",
        "Kilogram is the unit used to measure the mass of goods .",
        "The cargo weighed 1 . 698 , 88 kilograms .",
    ], None),
    ("d038", "Watt", {"130"}, [
        "Watt – [a *unit of power] .",
        "<p>",
        "Watt measures the power of an engine .",
    ], None),
    ("d039", "Newton", {"130"}, [
        "Newton – [a *unit of force] .",
        "<p>",
        "One newton|newton|nominal moves a small mass one metre .",
    ], None),
    ("d040", "Pascal", {"130"}, [
        "Pascal – [a *unit of pressure] .",
        "<p>",
        "The pascal|pascal|nominal describes pressure in deep water .",
    ], None),
]

DISAMBIGUATION = [
    ("d041", "Albatross", [
        "Albatross Bomber – [a *vehicle of the air force] .",
        "<p>",
        "Albatross Glider – [a *vehicle of silent flight] .",
        "<p>",
        "Steel Albatross – [a *submarine of the deep research patrol] .",
    ]),
    ("d042", "Eagle", [
        "Eagle Tern – [a *tern of the eastern islands] .",
        "<p>",
        "Eagle Nine – [a *vehicle of the space program] .",
    ]),
]

REDIRECTS = [
    ("d043", "Sobieski", "John Sobieski"),
    ("d044", "JFK", "John Kennedy"),
    ("d045", "Sterna", "Arctic Tern"),
    ("d046", "Oswald", "Lee Oswald"),
    ("d047", "The Restorer", "Casimir"),
    ("d048", "K-141", "Kursk"),
]

SPECIAL_FILLERS = [
    ("d049", "Grey Fort", [
        "Grey Fort – [a *fortress of the harbour] .",
        "<p>",
        "The Grey Fort guards the harbour of Nordland .",
    ], [("place", "Grey Fort", 1), ("place", "Nordland")]),
    ("d050", "Vasa", [
        "Vasa – [a swedish *warship of the royal navy] .",
        "<p>",
        "[The *Vasa] sank in 1628 on its maiden voyage .",
        "The admiral Henrik Hybertsson built the Vasa for the navy .",
    ], [("date", "1628"), ("person", "Henrik Hybertsson")]),
    ("d051", "Submarine Museum", [
        "The Submarine Museum keeps old vessels .",
        "<p>",
        "The museum of the navy shows the wreck of the Kurska .",
    ], None),
    ("d052", "Research Fleet", [
        "The Research Fleet operates in cold waters .",
        "<p>",
        "The Steel Albatross explores the stations of the research fleet .",
    ], None),
    ("d053", "Dallas", [
        "Dallas – [a *city of the south] .",
        "<p>",
        "Dallas grew around the cattle trade .",
    ], [("place", "Dallas")]),
    ("d054", "Bergen Lighthouse", [
        "Bergen Lighthouse – [a tall *tower of the harbour] .",
        "<p>",
        "The lighthouse at Bergen emits 5 000 watts of power .",
    ], [("place", "Bergen", 0)]),
    ("d055", "Salt Market", [
        "Salt Market – [a *market by the long pier] .",
        "<p>",
        "The market scale showed fifteen kilograms of grain .",
    ], None),
]

FILLER_TEMPLATES = [
    ("{t} – [a {a} *{n} of the {b}] .", "The {n} rests near the {c} ."),
    ("{t} – [a {a} *{n} by the {b}] .", "Every {c} passes the {n} at dawn|dawn|nominal ."),
    ("The {n} of {t2} turns in the {a} wind .", "Rain and fog keep the {c} wet ."),
    ("{t} – [an old *{n} of the {b}] .", "Traders|trader|nominal sell rope and tar near the {c} ."),
    ("The {a} {n} leans against the {b} .", "Nobody|nobody|other counts the {c} there ."),
]

FILLER_NOUNS = ["mill", "forge", "pier", "yard", "barn", "grove", "house",
                "tower", "bell", "lamp", "boat", "net", "candle", "road",
                "market", "mine", "bridge", "castle", "harbour", "gate"]
FILLER_ADJS = ["old", "grey", "tall", "quiet", "narrow", "wide", "dark",
               "little", "late", "early"]
FILLER_PLACES = ["river", "bay", "hill", "coast", "forest", "market",
                 "harbour", "road", "grove", "pier"]
FILLER_TITLES = [
    "Old Mill", "Stone Bridge", "North Road", "Glass Forge", "Long Pier",
    "Rope Yard", "Clock Tower", "Copper Mine", "Wool Barn", "Tar House",
    "Oak Grove", "Iron Gate", "Low Bell", "Night Lamp", "Round Boat",
    "Twin Net", "Wax Candle", "Flat Road", "Corn Market", "Deep Well",
    "Quiet Court", "Rain Roof", "Fish Pier", "Goat Path", "Moss Wall",
    "Reed Bank", "Chalk Hill", "Birch Row", "Cold Spring", "Turf Field",
    "Hay Loft", "Brick Kiln", "Slate Quarry", "Elm Walk", "Pond Gate",
    "Mud Flat", "Gull Rock", "Pine Ridge", "Ash Lane", "Fern Dell",
    "Crag Point", "Dune Strip", "Loam Patch", "Peat Bog", "Shale Cove",
]


def build_fillers() -> list:
    docs = []
    for i, title in enumerate(FILLER_TITLES):
        doc_id = f"d{56 + i:03d}"
        template = FILLER_TEMPLATES[i % len(FILLER_TEMPLATES)]
        noun = FILLER_NOUNS[i % len(FILLER_NOUNS)]
        adj = FILLER_ADJS[i % len(FILLER_ADJS)]
        place = FILLER_PLACES[(i * 3) % len(FILLER_PLACES)]
        other = FILLER_PLACES[(i * 7 + 2) % len(FILLER_PLACES)]
        sentences = [
            template[0].format(t=title, t2=title, n=noun, a=adj, b=place, c=other),
            "<p>",
            template[1].format(t=title, t2=title, n=noun, a=adj, b=place, c=other),
        ]
        docs.append((doc_id, title, sentences, None))
    return docs


# --- golden library (hand-derived from the tables above) -------------------------
# Step 1 creates one entity per definable article in file order; Step 2 adds
# page-title aliases where a disambiguation item names an existing entity and
# creates entities 41-43 for the new items; redirects become aliases.

STEP2_EXTENSIONS = {     # entity id -> (page title alias, extra synsets)
    33: ("Albatross", {"140"}),   # item 1 of d041 names Albatross Bomber
    21: ("Eagle", {"122"}),       # item 1 of d042 names Eagle Tern
}
STEP2_NEW = [            # (id, main name, synsets, source page)
    (41, "Albatross Glider", {"140"}, "d041"),
    (42, "Steel Albatross", {"141"}, "d041"),
    (43, "Eagle Nine", {"140"}, "d042"),
]
REDIRECT_ALIASES = {     # redirect title -> entity id of its target
    "Sobieski": 2, "JFK": 10, "Sterna": 16, "Oswald": 11,
    "The Restorer": 1, "K-141": 28,
}


def golden_library() -> dict:
    entities = {}
    for position, (doc_id, title, synsets, _sentences, _ne) in enumerate(
        DEFINABLE, start=1
    ):
        entities[position] = {
            "id": position,
            "mainName": title,
            "aliases": set(),
            "url": f"corpus://{doc_id}",
            "synsets": set(synsets),
        }
    for entity_id, (alias, extra) in STEP2_EXTENSIONS.items():
        entities[entity_id]["synsets"] |= extra
        entities[entity_id]["aliases"].add(alias)
    for entity_id, name, synsets, page in STEP2_NEW:
        entities[entity_id] = {
            "id": entity_id, "mainName": name, "aliases": set(),
            "url": f"corpus://{page}", "synsets": set(synsets),
        }
    for alias, entity_id in REDIRECT_ALIASES.items():
        entities[entity_id]["aliases"].add(alias)
    return {
        "entities": [
            {
                "id": e["id"],
                "mainName": e["mainName"],
                "aliases": sorted(e["aliases"]),
                "url": e["url"],
                "synsets": sorted(e["synsets"]),
            }
            for e in (entities[i] for i in sorted(entities))
        ]
    }


# --- question-side fixtures ---------------------------------------------------------

PATTERNS = """\
# regex<TAB>generalType[<TAB>neType] — tried in file order.
^Did\\b\tVERIFICATION
^Was\\b\tVERIFICATION
^Were\\b\tVERIFICATION
^Is\\b\tVERIFICATION
^Are\\b\tVERIFICATION
^Do\\b\tVERIFICATION
^Does\\b\tVERIFICATION
^Which one .* :\tOPTION
^Either\\b\tOPTION
^Who\\b\tNAMED_ENTITY\tPERSON
^Whom\\b\tNAMED_ENTITY\tPERSON
^Whose\\b\tNAMED_ENTITY\tPERSON
^When was\\b\tNAMED_ENTITY\tTIME
^When did\\b\tNAMED_ENTITY\tTIME
^When\\b\tNAMED_ENTITY\tTIME
^Where was\\b\tNAMED_ENTITY\tPLACE
^Where\\b\tNAMED_ENTITY\tPLACE
^In which year\\b\tNAMED_ENTITY\tYEAR
^In what year\\b\tNAMED_ENTITY\tYEAR
^What year\\b\tNAMED_ENTITY\tYEAR
^In which century\\b\tNAMED_ENTITY\tCENTURY
^In what century\\b\tNAMED_ENTITY\tCENTURY
^How many\\b\tNAMED_ENTITY\tCOUNT
^How much\\b\tNAMED_ENTITY\tQUANTITY
^How long\\b\tNAMED_ENTITY\tPERIOD
^What was the surname of\\b\tNAMED_ENTITY\tSURNAME
^What is the surname of\\b\tNAMED_ENTITY\tSURNAME
^What was the first name of\\b\tNAMED_ENTITY\tNAME
^What nickname\\b\tOTHER_NAME
^What other name\\b\tOTHER_NAME
^List\\b\tMULTIPLE
^Name all\\b\tMULTIPLE
"""

AMBIGUOUS_PRONOUNS = "which\nwhat\n"

OPENING_CONSTRUCTIONS = """\
one of
a type of
a kind of
a class of
type of
kind of
out of
"""

DEFINITION_PATTERNS = "–\n—\n-\nis a\nis an\nis the\njest to\n"

SYNSET_NE_TYPES = "110\tPERSON\n120\tANIMAL\n140\tVEHICLE\n"

NE_MAPPING = """\
PLACE\tplace
CONTINENT\t
RIVER\t
LAKE\t
MOUNTAIN\t
RANGE\t
ISLAND\t
ARCHIPELAGO\t
SEA\t
CELESTIAL_BODY\t
COUNTRY\tplace
STATE\tplace
CITY\tplace
NATIONALITY\t
PERSON\tperson
NAME\tperson
SURNAME\tperson
BAND\t
DYNASTY\t
ORGANISATION\t
COMPANY\t
EVENT\t
TIME\tdate
CENTURY\tdate
YEAR\tdate
PERIOD\tquant:quantity
COUNT\tquant:number
QUANTITY\tquant:quantity
VEHICLE\t
ANIMAL\t
TITLE\t
"""

NUMERALS = """\
ten\t10
fifteen\t15
twenty\t20
ninety\t90
hundred\t100\tscale
thousand\t1000\tscale
million\t1000000\tscale
several\t?
"""

GOLD_QUESTIONS = [
    ("q01", "Which bird migrates from the Arctic to the Antarctic every year ?",
     "Arctic Tern", "NAMED_ENTITY", "ANIMAL", "d016"),
    ("q02", "Which russian submarine sank in 2000 with its whole crew ?",
     "Kursk", "NAMED_ENTITY", "VEHICLE", "d028"),
    ("q03", "Which exiled monarch returned to his country as a prime minister of a republic ?",
     "Simeon", "NAMED_ENTITY", "PERSON", "d007"),
    ("q04", "Who was crowned king of Polonia in 1058 ?",
     "Casimir", "NAMED_ENTITY", "PERSON", "d001"),
    ("q05", "In which year did the Vasa sink on its maiden voyage ?",
     "1628", "NAMED_ENTITY", "YEAR", "d050"),
    ("q06", "How many sailors served on the Kursk ?",
     "118", "NAMED_ENTITY", "COUNT", "d028"),
    ("q07", "How much power does the lighthouse at Bergen emit ?",
     "5000 watts", "NAMED_ENTITY", "QUANTITY", "d054"),
    ("q08", "What was the surname of the admiral who built the Vasa ?",
     "Hybertsson", "NAMED_ENTITY", "SURNAME", "d050"),
    ("q09", "Which unit is used to measure the mass of goods ?",
     "Kilogram", "UNNAMED_ENTITY", None, "d037"),
    ("q10", "Which unit measures the power of an engine ?",
     "Watt", "UNNAMED_ENTITY", None, "d038"),
    ("q11", "Which seabird breeds on the coasts of the northern sea ?",
     "Common Tern", "NAMED_ENTITY", "ANIMAL", "d017"),
    ("q12", "Did Lee Oswald kill John Kennedy ?",
     "no", "VERIFICATION", None, "d010"),
    ("q13", "List all the kings of Polonia .",
     "Casimir", "MULTIPLE", None, "d001"),
    ("q14", "Who designed the first submarine of the navy of Polonia ?",
     "Drzewiecki", "NAMED_ENTITY", "PERSON", "d009"),
    ("q15", "Which submarine is shown in the museum of the navy ?",
     "Kursk", "NAMED_ENTITY", "VEHICLE", "d051"),
    ("q16", "Who led the winged cavalry at the gates of Vienna ?",
     "Sobieski", "NAMED_ENTITY", "PERSON", "d002"),
    ("q17", "In which century did the reign of Casimir begin ?",
     "11", "NAMED_ENTITY", "CENTURY", "d001"),
    ("q18", "When was John Kennedy killed ?",
     "1963", "NAMED_ENTITY", "TIME", "d010"),
    ("q19", "Which submarine explores the stations of the research fleet ?",
     "Steel Albatross", "NAMED_ENTITY", "VEHICLE", "d052"),
    ("q20", "Which fortress guards the harbour of Nordland ?",
     "Grey Fort", "NAMED_ENTITY", "PLACE", "d049"),
]

CONFIG_YAML = """\
paths:
  taxonomy: taxonomy.tsv
  corpus: corpus.jsonl
  manifest: corpus_manifest.json
  library: build/library.eql
  index: build/index.eqi
  question_lexicon: question_lexicon.tsv
  patterns: patterns.tsv
  ambiguous_pronouns: ambiguous_pronouns.txt
  opening_constructions: opening_constructions.txt
  synset_ne_types: synset_ne_types.tsv
  ne_mapping: ne_mapping.tsv
  numeral_lexicon: numerals.tsv
  definition_patterns: definition_patterns.txt
  gold_questions: gold_questions.jsonl
  output_dir: build/out

params:
  document_count: 20
  min_confidence: 0.0
  context_strategy: sentence
  include_title: true
  window_ratio: 1.5
  sources: [deeper, ner, quant]
  fuzzy_max_distance: 3
  fuzzy_prefix_length: 1
  window_cap: 8
  unit_synset: "130"
  bootstrap_iterations: 10000
  bootstrap_seed: 20240613
"""

# --- definition-interpretation golden suite (25 hand-annotated paragraphs) -------

DEFINITION_SUITE = [
    ("dash, simple nominal group",
     "Rex – [a *king of the south] .", {"112"}),
    ("copula with bracketed latin name",
     "[The Arctic *Tern] ( Sterna paradisaea ) is [a *seabird of the [tern family]] .",
     {"121"}),
    ("head not in taxonomy",
     "Tower Rock – [a *cliff of the bay] .", set()),
    ("no definition pattern",
     "The winter was long that year .", set()),
    ("entirely quoted paragraph",
     "' Rex – a king . '", set()),
    ("coordination of nominal groups",
     "Skua – {[a *seabird] and [a *pirate of the air]} .", {"121"}),
    ("bare-word coordination",
     "Gavin – {king and seabird} .", {"112", "121"}),
    ("semantic-head recursion",
     "Leon – [an exiled european *monarch] .", {"111"}),
    ("two-level head recursion",
     "Ava – [a *[sea *bird] of prey] .", {"120"}),
    ("non-nominal chunk stops the scan",
     "Rex – [a *king] . He was born in the castle .", {"112"}),
    ("stop excludes later nominal chunks",
     "Rex – [a *king] . He ruled . [a *seabird] .", {"112"}),
    ("multiple chunks accumulate",
     "Iris – [a *monarch] , [a *person of letters] .", {"111", "110"}),
    ("prefix construction stripped",
     "Vulcan – one of [the *kings of the forge] .", {"112"}),
    ("longer prefix construction stripped",
     "Vade – a type of [*vehicle of the mind] .", {"140"}),
    ("copula 'is an' with nested group",
     "[The *Albatross] is [an [enormous *seabird]] .", {"121"}),
    ("copula 'is the'",
     "[The *Watt] is [the *unit of power] .", {"130"}),
    ("copula 'jest to'",
     "Graf jest to [a *king of cards] .", {"112"}),
    ("em dash variant",
     "Nils — [a *king of the ice] .", {"112"}),
    ("brackets inside the body",
     "Pi – [a *person] ( born long ago ) .", {"110"}),
    ("bracket hides a separator",
     "Ada – [a *king] ( crowned in 1100 , by the sea ) .", {"112"}),
    ("unmatched opening bracket",
     "Bo – [a *king] ( and then .", {"112"}),
    ("numeral chunk is not nominal",
     "Deka – 10 [units of mass] .", set()),
    ("multiword lexeme matched directly",
     "Udo – [a *unit of measurement] .", {"130"}),
    ("bare word body",
     "Taw – watt .", {"131"}),
    ("pattern at the end, empty body",
     "Rex –", set()),
]


# --- writing ----------------------------------------------------------------------

def write_corpus() -> list:
    docs = []
    for doc_id, title, _synsets, sentences, ne in DEFINABLE:
        docs.append(make_document(doc_id, title, sentences, ne=ne))
    for doc_id, title, sentences in DISAMBIGUATION:
        docs.append(make_document(doc_id, title, sentences,
                                  page_kind="disambiguation"))
    for doc_id, title, target in REDIRECTS:
        docs.append(make_document(doc_id, title, [], page_kind="redirect",
                                  redirect_target=target))
    for doc_id, title, sentences, ne in SPECIAL_FILLERS:
        docs.append(make_document(doc_id, title, sentences, ne=ne))
    for doc_id, title, sentences, ne in build_fillers():
        docs.append(make_document(doc_id, title, sentences, ne=ne))
    docs.sort(key=lambda d: d.doc_id)
    return docs


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    SUITE_OUT.mkdir(parents=True, exist_ok=True)

    (OUT / "taxonomy.tsv").write_text(TAXONOMY, encoding="utf-8")

    docs = write_corpus()
    assert len(docs) == 100, f"expected 100 documents, built {len(docs)}"
    (OUT / "corpus.jsonl").write_text(
        "".join(serialize_document(doc) + "\n" for doc in docs),
        encoding="utf-8",
    )

    kinds = {"article": 0, "disambiguation": 0, "redirect": 0}
    for doc in docs:
        kinds[doc.page_kind] += 1
    library = golden_library()
    alias_total = sum(len(e["aliases"]) for e in library["entities"])
    names = [e["mainName"] for e in library["entities"]]
    for e in library["entities"]:
        names.extend(e["aliases"])
    manifest = {
        "documents": len(docs),
        "pageKinds": kinds,
        "definableArticles": len(DEFINABLE),
        "disambiguationItems": 5,
        "entities": len(library["entities"]),
        "aliases": alias_total,
        "namesTotal": len(names),
        "namesUnique": len(set(names)),
    }
    (OUT / "corpus_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (OUT / "golden_library.json").write_text(
        json.dumps(library, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    lexicon_lines = [f"{word}\t{lemma}\t{tag_class}"
                     for word, (lemma, tag_class) in sorted(LEXICON.items())]
    (OUT / "question_lexicon.tsv").write_text(
        "\n".join(lexicon_lines) + "\n", encoding="utf-8")

    (OUT / "patterns.tsv").write_text(PATTERNS, encoding="utf-8")
    (OUT / "ambiguous_pronouns.txt").write_text(AMBIGUOUS_PRONOUNS,
                                                encoding="utf-8")
    (OUT / "opening_constructions.txt").write_text(OPENING_CONSTRUCTIONS,
                                                   encoding="utf-8")
    (OUT / "definition_patterns.txt").write_text(DEFINITION_PATTERNS,
                                                 encoding="utf-8")
    (OUT / "synset_ne_types.tsv").write_text(SYNSET_NE_TYPES, encoding="utf-8")
    (OUT / "ne_mapping.tsv").write_text(NE_MAPPING, encoding="utf-8")
    (OUT / "numerals.tsv").write_text(NUMERALS, encoding="utf-8")

    gold_lines = []
    for qid, text, answer, general, ne_type, doc_id in GOLD_QUESTIONS:
        record = {"id": qid, "text": text, "expectedAnswer": answer,
                  "generalType": general, "expectedDocId": doc_id}
        if ne_type is not None:
            record["neType"] = ne_type
        gold_lines.append(json.dumps(record, ensure_ascii=False,
                                     sort_keys=True))
    (OUT / "gold_questions.jsonl").write_text(
        "\n".join(gold_lines) + "\n", encoding="utf-8")

    (OUT / "config.yaml").write_text(CONFIG_YAML, encoding="utf-8")

    suite_lines = []
    for i, (label, dsl, expected) in enumerate(DEFINITION_SUITE, start=1):
        doc = make_document(f"def{i:03d}", f"Suite {i}",
                            [dsl] if dsl else [])
        from entityqa.corpus import document_to_record
        suite_lines.append(json.dumps({
            "label": label,
            "doc": document_to_record(doc),
            "expected": sorted(expected),
        }, ensure_ascii=False, sort_keys=True))
    (SUITE_OUT / "definition_suite.jsonl").write_text(
        "\n".join(suite_lines) + "\n", encoding="utf-8")

    print(f"wrote {len(docs)} documents, {len(library['entities'])} golden "
          f"entities, {len(DEFINITION_SUITE)} suite paragraphs")
    print(f"fixtures in {OUT} and {SUITE_OUT}")


if __name__ == "__main__":
    main()

