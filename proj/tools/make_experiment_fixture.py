#!/usr/bin/env python3
"""Regenerate data/fixtures/experiment.jsonl.

Builds a 24-participant, four-condition tagging session whose aggregate
counts (accepted/rejected tags per condition, label frequencies, tag
codings, map split) match the reference study tables. Deterministic.
"""
import json
import random
import sys
from datetime import datetime, timedelta, timezone

CONDITIONS = ["LT", "ST", "SMT", "SMT_CTX"]
PARTICIPANTS = 24
CAP = 15

ACCEPTED = {"LT": 65, "ST": 26, "SMT": 57, "SMT_CTX": 73}
REJECTED = {"LT": 0, "ST": 146, "SMT": 35, "SMT_CTX": 60}

REPEATED = {
    "LT": {"Ithaca": 6, "Cornell University": 3, "New York": 2},
    "ST": {"Culture": 2, "historical differences": 2, "New Jersey": 2},
    "SMT": {"India": 3, "Japan": 3, "New York City": 2, "United States": 2},
    "SMT_CTX": {"Capital City": 2, "Geographical pole": 2, "Hudson River": 2,
                "North America": 2, "Pennsylvania": 2, "United States": 2},
}
# Singletons shared with another condition's frequent tags.
SHARED = {"SMT": ["Pennsylvania"], "SMT_CTX": ["New York City"]}

TYPES = {"LT": (29, 36), "ST": (14, 12), "SMT": (29, 28), "SMT_CTX": (33, 40)}
CATEGORIES = {  # event, location, other, people, time
    "LT": (4, 38, 17, 5, 1), "ST": (0, 14, 11, 1, 0),
    "SMT": (1, 33, 17, 6, 0), "SMT_CTX": (0, 34, 35, 4, 0),
}
CATEGORY_NAMES = ["event", "location", "other", "people", "time"]

LT_POOL = """
Finger Lakes|Cayuga Lake|gorges|Ithaca Falls|Taughannock Falls|my hometown|home|summer trip|
road trip|college town|Buffalo|Rochester|Syracuse|Albany|Binghamton|Lake Erie|Lake Ontario|
Niagara Falls|Adirondacks|Catskills|Long Island|Brooklyn|Manhattan|Central Park|Statue of Liberty|
Erie Canal|colonial era|old borders|hand drawn|coastline|mountains|river valley|harbor|
farmland|wine country|apple orchards|snow|winter|family|grandparents|where I grew up|
visited in 2010|first job|campus|library|hiking|sailing|Delaware|Maryland|Virginia|
Chesapeake Bay|Boston Harbor|Cape Cod|Maine|Vermont|New Hampshire|Connecticut|Rhode Island
"""
ST_POOL = """
trade routes|exploration|old world|new world|mapmaking|navigation|empire|colonies|
sea monsters|religion|language|borders|ancient history|migration|cartography|
printing|latin|astronomy|geography|wars|commerce|ports|islands
"""
SMT_POOL = """
Africa|Europe|Asia|China|Arabia|Persia|Egypt|Ethiopia|Madagascar|Ceylon|Indian Ocean|
Pacific Ocean|Atlantic Ocean|Mediterranean Sea|Red Sea|Caspian Sea|Black Sea|Nile|
Ptolemy|Amerigo Vespucci|Christopher Columbus|Portugal|Spain|Venice|Genoa|Greenland|
Iceland|Scandinavia|Russia|Tartary|Cathay|Zipangu|Java|Sumatra|Malay Peninsula|
Cape of Good Hope|Equator|Tropic of Cancer|Tropic of Capricorn|Brazil|Caribbean Sea|
Cuba|Hispaniola|Gulf of Mexico|Florida|Saint-Dié-des-Vosges|Holy Roman Empire|Jerusalem
"""
CTX_POOL = """
Massachusetts|Connecticut River|Delaware River|Susquehanna River|Potomac River|
Chesapeake Bay area|Appalachian Mountains|Allegheny Mountains|Lake Champlain|Mohawk River|
Albany, New York|Philadelphia|Boston|Baltimore|Charleston, South Carolina|Savannah, Georgia|
Williamsburg, Virginia|Jamestown, Virginia|Plymouth Colony|Province of New York|
Province of Pennsylvania|Province of New Jersey|Colony of Virginia|Province of Maryland|
Province of Carolina|Province of Georgia|New England|New Netherland|New France|Quebec|
Montreal|Nova Scotia|Newfoundland|Atlantic Seaboard|Long Island Sound|Cape Cod Bay|
Gulf of Maine|Outer Banks|Cape Hatteras|Thirteen Colonies|Iroquois Confederacy|
Lenape|Mohawk people|French and Indian War|American Revolutionary War|Treaty of Paris|
British Empire|Kingdom of Great Britain|George Washington|William Penn|Benjamin Franklin|
Mason–Dixon line|Ohio Country|Great Lakes|Lake Ontario region|Hudson Valley|Staten Island|
Manhattan Island|New Amsterdam|Fort Orange|Fort Ticonderoga|Saratoga|Lexington and Concord
"""
REJECTED_POOL = """
Apple Inc.|Mercury (planet)|Paris Hilton|Java (programming language)|Python (genus)|
Jordan (band)|Georgia (country)|Amazon.com|Nile (band)|Victoria (Australia)|
Cambridge, Ontario|Moscow, Idaho|Athens, Georgia|Rome, New York|Troy (film)|
Phoenix (mythology)|Columbia Records|Sahara (film)|Orion (constellation)|Titan (moon)|
Delta Air Lines|Venus (mythology)|Eden (band)|Atlas (mythology)|Ararat (film)|
Carthage, Missouri|Babylon 5|Sparta, New Jersey|Memphis, Tennessee|Alexandria, Virginia|
Cairo, Illinois|Lisbon, Ohio|Dublin, Ohio|Versailles, Kentucky|Toledo, Ohio|
Florence, Alabama|Berlin, New Hampshire|Lima, Ohio|Peru, Indiana|Damascus, Maryland
"""


def pool(text):
    return [p.strip() for p in text.split("|") if p.strip()]


def wiki(label):
    return "http://en.wikipedia.org/wiki/" + label.replace(" ", "_")


def balanced_latin_square(k):
    first, lo, hi = [0], 1, k - 1
    while len(first) < k:
        first.append(lo)
        lo += 1
        if len(first) < k:
            first.append(hi)
            hi -= 1
    return [[(c + r) % k for c in first] for r in range(k)]


def spread(total, limits, rng):
    counts = [0] * len(limits)
    order = list(range(len(limits)))
    for n in range(total):
        free = [i for i in order if counts[i] < limits[i]]
        if not free:
            raise SystemExit("cap exceeded")
        # Mostly even, with some jitter.
        i = min(free, key=lambda j: (counts[j] + rng.random() * 2.2, j))
        counts[i] += 1
    return counts


def deal(repeated, singles, slots):
    """Assign labels to annotations; a label never appears twice on one annotation."""
    free = list(slots)
    out = [[] for _ in slots]
    for label, n in repeated.items():
        targets = sorted(range(len(free)), key=lambda i: (-free[i], i))[:n]
        if any(free[i] == 0 for i in targets):
            raise SystemExit("not enough annotations for " + label)
        for i in targets:
            out[i].append(label)
            free[i] -= 1
    it = iter(singles)
    for i in range(len(free)):
        for _ in range(free[i]):
            out[i].append(next(it))
    if next(it, None) is not None:
        raise SystemExit("unused singles")
    return out


def main(path):
    rng = random.Random(20121001)
    pools = {"LT": pool(LT_POOL), "ST": pool(ST_POOL), "SMT": pool(SMT_POOL), "SMT_CTX": pool(CTX_POOL)}
    reserved = {l for r in REPEATED.values() for l in r} | {l for s in SHARED.values() for l in s}
    used = set(reserved)
    singles = {}
    for c in CONDITIONS:
        n = ACCEPTED[c] - sum(REPEATED[c].values())
        chosen = list(SHARED.get(c, []))
        for label in pools[c]:
            if len(chosen) == n:
                break
            if label not in used:
                chosen.append(label)
                used.add(label)
        if len(chosen) != n:
            raise SystemExit(f"pool for {c} too small: {len(chosen)} < {n}")
        singles[c] = chosen

    rejected_pool = pool(REJECTED_POOL)
    if used & set(rejected_pool):
        raise SystemExit("rejected pool overlaps accepted labels")

    square = balanced_latin_square(4)
    slots = [(p, k, CONDITIONS[square[p % 4][k]]) for p in range(PARTICIPANTS) for k in range(4)]

    per_cond_idx = {c: [i for i, s in enumerate(slots) if s[2] == c] for c in CONDITIONS}
    accepted_n, rejected_n, labels = {}, {}, {}
    for c in CONDITIONS:
        idx = per_cond_idx[c]
        rej = spread(REJECTED[c], [CAP - 4] * len(idx), rng)
        acc = spread(ACCEPTED[c], [CAP - r for r in rej], rng)
        lab = deal(REPEATED[c], singles[c], acc)
        for j, i in enumerate(idx):
            accepted_n[i], rejected_n[i], labels[i] = acc[j], rej[j], lab[j]

    codings = {}
    for c in CONDITIONS:
        f, p = TYPES[c]
        types = ["factual"] * f + ["personal"] * p
        cats = [name for name, n in zip(CATEGORY_NAMES, CATEGORIES[c]) for _ in range(n)]
        rng.shuffle(types)
        rng.shuffle(cats)
        codings[c] = list(zip(types, cats))

    maps = {"waldseemuller": (12000, 6600), "east-coast": (8000, 6000)}
    start = datetime(2012, 10, 1, 9, 0, tzinfo=timezone.utc)
    rej_cursor = 0
    coding_cursor = {c: 0 for c in CONDITIONS}
    lines = []
    for i, (p, k, c) in enumerate(slots):
        map_id = "waldseemuller" if (i * 45) // 96 != ((i + 1) * 45) // 96 else "east-coast"
        w, h = maps[map_id]
        x0, y0 = rng.randint(0, w - 800), rng.randint(0, h - 600)
        x1, y1 = x0 + rng.randint(120, 780), y0 + rng.randint(90, 580)
        tags = []
        for label in labels[i]:
            t = {"label": label, "polarity": "accepted"}
            if c in ("SMT", "SMT_CTX"):
                t["uri"] = wiki(label)
            ty, cat = codings[c][coding_cursor[c]]
            coding_cursor[c] += 1
            t["coding"] = {"type": ty, "category": cat}
            tags.append(t)
        for _ in range(rejected_n[i]):
            label = rejected_pool[rej_cursor % len(rejected_pool)]
            rej_cursor += 1
            tags.append({"label": label, "uri": wiki(label), "polarity": "rejected"})
        if labels[i]:
            body = f"Note on {labels[i][0]} in this part of the map."
        else:
            body = "Detail in this part of the map."
        lines.append({
            "map_id": map_id,
            "creator": f"p{p + 1:02d}",
            "creator_name": f"Participant {p + 1}",
            "condition": c,
            "created_at": (start + timedelta(minutes=7 * i)).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "body": body,
            "shape": [[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
            "tags": tags,
        })

    with open(path, "w", encoding="utf-8") as f:
        f.write("# Synthetic tagging session: 24 participants x 4 conditions. "
                "Regenerate with tools/make_experiment_fixture.py\n")
        for rec in lines:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures/experiment.jsonl")
