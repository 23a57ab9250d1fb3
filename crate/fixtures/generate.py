"""Regenerates the bundled fixtures. Deterministic; stdlib only.

    python3 fixtures/generate.py
"""

import csv
import json
import math
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parent

POSITIVE = ["dobry", "super", "piekny", "radosc", "sukces", "wspanialy", "kochac", "brawo", "nadzieja", "swietny"]
NEGATIVE = ["zly", "smutny", "porazka", "fatalny", "wstyd", "strach", "klamstwo", "nienawidzic", "gniew", "okropny"]
NEUTRAL = ["wybory", "glos", "kandydat", "partia", "dzisiaj", "lokal", "kraj", "polityka", "sejm", "miasto",
           "niedziela", "komisja", "lista", "wynik", "frekwencja"]
CONJUNCTIONS = ["i", "a", "ale", "oraz", "lub", "ze"]
STOP_WORDS = ["i", "a", "oraz", "to", "jest", "sie", "na", "w"]
LEMMAS = {
    "dobra": "dobry", "dobre": "dobry", "zla": "zly", "zle": "zly", "smutna": "smutny",
    "piekne": "piekny", "wyborach": "wybory", "wyborow": "wybory", "partii": "partia",
    "kandydata": "kandydat", "glosy": "glos", "kraju": "kraj", "wstydu": "wstyd",
}
EMOJI_POLARITY = {"😀": "positive", "👍": "positive", "❤️": "positive", "😢": "negative",
                  "😡": "negative", "🤔": "ambiguous", "🇵🇱": "ambiguous"}
TYPOS = ["xzqw", "wybrry", "kndydat", "plityka"]
HASHTAGS = ["wybory2019", "polska", "glosuje", "debata"]

REGIONS = [
    # region_id, commune names, posts weight, positive share before, after
    ("0201", ["wroclaw"], 70, 0.60, 0.45),
    ("0261", ["jelenia gora"], 45, 0.50, 0.50),
    ("0401", ["bydgoszcz"], 60, 0.40, 0.55),
    ("0601", ["lublin"], 40, 0.55, 0.55),
    ("0801", ["zielona gora"], 30, 0.45, 0.40),
    ("1001", ["lodz"], 55, 0.50, 0.60),
    ("1201", ["krakow"], 50, 0.65, 0.50),
    ("1401", ["warszawa"], 60, 0.55, 0.45),
    ("1601", ["opole"], 25, 0.50, 0.50),
    ("1801", ["rzeszow"], 30, 0.35, 0.45),
    ("2001", ["bialystok"], 20, 0.45, 0.45),
    ("2201", ["gdansk"], 35, 0.60, 0.60),
    ("2401", ["katowice"], 15, 0.50, 0.40),
    ("2601", ["kielce"], 8, 0.50, 0.50),
]
EVENT = datetime(2019, 10, 13, tzinfo=timezone.utc)


def write_lines(path, lines):
    path.write_text("".join(f"{l}\n" for l in lines), encoding="utf-8")


def inflect(rng, word):
    forms = [f for f, l in LEMMAS.items() if l == word]
    return rng.choice(forms) if forms and rng.random() < 0.3 else word


def sentence(rng, positive, n_words):
    pool = POSITIVE if positive else NEGATIVE
    words = []
    for _ in range(n_words):
        r = rng.random()
        if r < 0.40:
            words.append(inflect(rng, rng.choice(pool)))
        elif r < 0.85:
            words.append(inflect(rng, rng.choice(NEUTRAL)))
        else:
            words.append(rng.choice(CONJUNCTIONS + STOP_WORDS))
    return words


def decorate(rng, words, positive):
    extra = []
    if rng.random() < 0.25:
        extra.append("#" + rng.choice(HASHTAGS))
    if rng.random() < 0.10:
        extra.append("@" + rng.choice(["ola_k", "janek", "redakcja"]))
    if rng.random() < 0.08:
        extra.append("https://example.org/" + str(rng.randrange(1000)))
    if rng.random() < 0.30:
        extra.append(rng.choice(["😀", "👍", "❤️"] if positive else ["😢", "😡"]))
    if rng.random() < 0.05:
        extra.append(rng.choice(["🤔", "🇵🇱"]))
    text = " ".join(words)
    if rng.random() < 0.3:
        text = text[0].upper() + text[1:] + rng.choice(["!", ".", "?!"])
    return " ".join([text] + extra)


def demo():
    rng = random.Random(20191013)
    out = ROOT / "demo"
    dictionary = sorted(set(POSITIVE + NEGATIVE + NEUTRAL + CONJUNCTIONS + STOP_WORDS + list(LEMMAS)))
    write_lines(out / "dictionary.txt", dictionary)
    write_lines(out / "conjunctions.txt", CONJUNCTIONS)
    write_lines(out / "stop_words.txt", STOP_WORDS)
    write_lines(out / "lemmas.tsv", [f"{k}\t{v}" for k, v in sorted(LEMMAS.items())])
    write_lines(out / "emoji_polarity.tsv", [f"{k}\t{v}" for k, v in EMOJI_POLARITY.items()])

    with open(out / "gazetteer.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["place_name", "commune", "region_id", "province", "importance", "population"])
        for rid, names, _, _, _ in REGIONS:
            for n in names:
                w.writerow([n.title(), n, rid, rid[:2], 0.9, 100000 + int(rid) * 10])
        # A homonym: the more important entry wins.
        w.writerow(["Nowa Wies", "nowa wies", "0201", "02", 0.3, 900])
        w.writerow(["Nowa Wies", "nowa wies", "1401", "14", 0.6, 1200])

    weights = [r[2] for r in REGIONS]
    posts = []
    start = EVENT - timedelta(days=7)
    for i in range(500):
        pid = f"p{i:04d}"
        region = rng.choices(REGIONS, weights=weights)[0]
        ts = start + timedelta(seconds=rng.randrange(14 * 24 * 3600))
        share = region[3] if ts.date() <= EVENT.date() else region[4]
        positive = rng.random() < share
        r = rng.random()
        if r < 0.06:
            words = sentence(rng, positive, rng.randint(1, 3))
        else:
            words = sentence(rng, positive, rng.randint(5, 11))
        if rng.random() < 0.04:
            words.insert(rng.randrange(len(words) + 1), rng.choice(TYPOS))
        text = decorate(rng, words, positive)
        place = rng.choice(region[1]).title()
        lang = "pl"
        u = rng.random()
        if u < 0.04:
            place = None
        elif u < 0.07:
            lang = "en"
        elif u < 0.09:
            place = "Nowa Wies"
        elif u < 0.10:
            place = "Atlantyda"
        rec = {"id": pid, "text": text, "timestamp": ts.strftime("%Y-%m-%dT%H:%M:%SZ"), "lang": lang}
        if place is not None:
            rec["place"] = place
        posts.append(rec)
    # A few malformed records exercise the loader's skip counts.
    posts.insert(100, {"id": "", "text": "bez id", "timestamp": "2019-10-10T10:00:00Z", "lang": "pl"})
    posts.insert(200, {"id": "p0003", "text": "duplikat", "timestamp": "2019-10-10T10:00:00Z", "lang": "pl"})
    with open(out / "posts.jsonl", "w", encoding="utf-8") as f:
        for p in posts:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")

    with open(out / "training.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "label", "text"])
        for i in range(300):
            r = rng.random()
            if r < 0.35:
                label, words = "positive", sentence(rng, True, rng.randint(5, 10))
            elif r < 0.70:
                label, words = "negative", sentence(rng, False, rng.randint(5, 10))
            else:
                label = "neutral"
                words = [inflect(rng, rng.choice(NEUTRAL)) for _ in range(rng.randint(4, 8))]
                words.append(rng.choice(POSITIVE + NEGATIVE))
            w.writerow([f"t{i:04d}", label, decorate(rng, words, label == "positive")])

    with open(out / "regions.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["region_id", "population", "outcome", "unemployment", "income", "urbanization"])
        for rid, _, _, pb, pa in REGIONS:
            unemp = round(rng.uniform(0.03, 0.12), 4)
            income = round(rng.uniform(3800, 6500), 1)
            urban = round(rng.uniform(0.3, 1.0), 4)
            outcome = 0.75 - 0.3 * urban + 1.2 * unemp - 0.2 * (pb + pa) / 2 + rng.gauss(0, 0.03)
            w.writerow([rid, 100000 + int(rid) * 10, round(outcome, 4), unemp, income, urban])


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def orthonormalize(cols, basis):
    out = []
    for c in cols:
        v = list(c)
        for b in basis + out:
            p = dot(v, b)
            v = [x - p * y for x, y in zip(v, b)]
        norm = math.sqrt(dot(v, v))
        out.append([x / norm for x in v])
    return out


def table6():
    """126 regions whose standardized regressors are mutually uncorrelated
    and whose noise is orthogonal to them, so OLS on the standardized
    design returns the generating coefficients exactly and R^2 = 0.51."""
    rng = random.Random(126)
    n = 126
    features = [
        # name, raw mean, raw sd, coefficient on the standardized scale
        ("sentiment", 0.52, 0.06, -0.0133),
        ("urbanization", 0.45, 0.20, -0.0439),
        ("divorces", 0.0016, 0.0004, -0.0278),
        ("migration_balance", -0.0010, 0.0025, -0.0459),
        ("unemployment", 0.07, 0.03, 0.0),
        ("salary", 4800.0, 600.0, 0.0),
        ("median_age", 41.0, 2.0, -0.0208),
        ("higher_education", 0.17, 0.05, 0.0),
        ("medium_education", 0.33, 0.03, 0.0),
        ("city_rights", 0.17, 0.38, 0.0),
    ]
    ones = [1.0 / math.sqrt(n)] * n
    raw = [[rng.gauss(0, 1) for _ in range(n)] for _ in features + [None]]
    basis = orthonormalize(raw, [ones])
    scale = math.sqrt(n - 1)
    z = [[x * scale for x in col] for col in basis[:-1]]
    noise_dir = basis[-1]
    signal = [sum(f[3] * z[j][i] for j, f in enumerate(features)) for i in range(n)]
    ss_signal = dot(signal, signal)
    r2 = 0.51
    noise_norm = math.sqrt(ss_signal * (1 - r2) / r2)
    y = [0.4246 + s + noise_norm * e for s, e in zip(signal, noise_dir)]

    out = ROOT / "table6"
    with open(out / "regions.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["region_id", "population", "outcome"] + [f[0] for f in features])
        for i in range(n):
            row = [f"{i + 1:04d}", 50000 + 731 * i, repr(y[i])]
            row += [repr(f[1] + f[2] * z[j][i]) for j, f in enumerate(features)]
            w.writerow(row)


if __name__ == "__main__":
    demo()
    table6()
