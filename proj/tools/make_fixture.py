#!/usr/bin/env python3
"""Regenerates the bundled 100-author fixture under data/fixture/.

The corpus is synthetic. It exercises every path of the pipeline: the
birth-year filter, exact and ambiguous OpenLibrary matches, year
mismatches, Goodreads homonyms, ISBN enrichment from Google Books records
given in ISBN-10 and ISBN-13 form, unclassifiable countries and one
malformed line.
"""

import argparse
import json
import random
from pathlib import Path

WESTERN = ["US", "GB", "FR", "DE", "IT", "ES", "NL", "SE", "IE", "CA", "AU", "PT"]
COLONIES = ["NG", "IN", "BR", "MX", "JM", "KE", "ZA", "EG", "PH", "CO", "AR", "SN", "GH", "VN"]
MINORITIES = {"US": ["African Americans", "Native Americans"], "GB": ["British Asians"], "FR": ["Maghrebis"]}

FIRST = ["Amara", "Bruno", "Chiara", "Dmitri", "Elena", "Farid", "Greta", "Hugo", "Ines", "Jonas", "Kemi",
         "Lucía", "Marek", "Nadia", "Oskar", "Priya", "Quentin", "Rosa", "Samuel", "Tomás", "Uma", "Viktor",
         "Wanjiru", "Xavier", "Yara", "Zoë", "Adaeze", "Benedikt", "Céline", "Diego"]
LAST = ["Okafor", "Lindqvist", "Moreau", "Castillo", "Brennan", "Haddad", "Novak", "Ferreira", "Adeyemi",
        "Kowalski", "Rossi", "Nakamura", "Dubois", "Mensah", "Rahman", "Schulz", "Álvarez", "O'Connor",
        "Mwangi", "Bergström", "Da Silva", "Kapoor", "Duarte", "Fontaine"]
SUBJECTS = ["Fiction", "Poetry", "History", "Colonialism", "Family", "Memory", "Migration", "War",
            "Love", "Identity", "Science fiction", "Childhood"]
PUBLISHERS = ["Penguin", "Harvill Secker", "Gallimard", "Heinemann", "Faber & Faber", "Suhrkamp", "Knopf"]


def isbn13(stem12: str) -> str:
    total = sum(int(d) * (1 if i % 2 == 0 else 3) for i, d in enumerate(stem12))
    return stem12 + str((10 - total % 10) % 10)


def isbn10_of(code13: str) -> str:
    body = code13[3:12]
    total = sum(int(d) * (10 - i) for i, d in enumerate(body))
    check = (11 - total % 11) % 11
    return body + ("X" if check == 10 else str(check))


def hyphenate(code: str) -> str:
    return f"{code[:3]}-{code[3:5]}-{code[5:9]}-{code[9:]}" if len(code) == 13 else f"{code[0]}-{code[1:4]}-{code[4:9]}-{code[9:]}"


def generate(seed: int):
    rng = random.Random(seed)
    names = set()
    authors = []

    def fresh_name():
        while True:
            n = f"{rng.choice(FIRST)} {rng.choice(LAST)}"
            if n not in names:
                names.add(n)
                return n

    # Hand-placed authors first.
    authors.append(dict(source_id="Q9001", name="Clarissa Thompson", birth_year=1859, death_year=1930,
                        country_of_birth="US", ethnic_group="African Americans", gender="female"))
    authors.append(dict(source_id="Q9002", name="John Smith", birth_year=1950, country_of_birth="GB",
                        gender="male"))
    authors.append(dict(source_id="Q9003", name="Maria Santos", birth_year=1962, country_of_birth="BR",
                        gender="female"))
    authors.append(dict(source_id="Q9004", name="Maria Santos", birth_year=1978, country_of_birth="PT",
                        gender="female"))
    names.update({"Clarissa Thompson", "John Smith", "Maria Santos"})

    qid = 100
    while len(authors) < 100:
        qid += 1
        transnational = rng.random() < 0.35
        rec = dict(source_id=f"Q{qid}", name=fresh_name(), birth_year=rng.randint(1900, 2000),
                   gender=rng.choice(["male", "female", "female", "male", "nonbinary"]))
        if rng.random() < 0.2:
            rec["death_year"] = rec["birth_year"] + rng.randint(40, 90)
        if transnational and rng.random() < 0.3:
            country = rng.choice(sorted(MINORITIES))
            rec["country_of_birth"] = country
            rec["ethnic_group"] = rng.choice(MINORITIES[country])
        else:
            rec["country_of_birth"] = rng.choice(COLONIES if transnational else WESTERN)
        authors.append(rec)
    # Unclassifiable: no country, and a country the taxonomy leaves out.
    authors[10].pop("country_of_birth", None)
    authors[10].pop("ethnic_group", None)
    authors[11].pop("country_of_birth", None)
    authors[11].pop("ethnic_group", None)
    authors[12]["country_of_birth"] = "JP"
    authors[12].pop("ethnic_group", None)

    # Removed by the birth-year filter.
    ineligible = [
        dict(source_id="Q8001", name="Early Writer", birth_year=1790, country_of_birth="FR"),
        dict(source_id="Q8002", name="Boundary Writer", birth_year=1807, country_of_birth="GB"),
        dict(source_id="Q8003", name="Undated Writer", country_of_birth="US"),
    ]

    ol_authors, gr_authors = [], []
    ol_of, gr_of = {}, {}
    ol_n = gr_n = 0

    def add_ol(name, year, wd=None):
        nonlocal ol_n
        ol_n += 1
        rec = dict(source_id=f"OL{ol_n}A", name=name)
        if year is not None:
            rec["birth_year"] = year
        ol_authors.append(rec)
        if wd:
            ol_of.setdefault(wd, []).append(rec["source_id"])
        return rec

    def add_gr(name, wd=None):
        nonlocal gr_n
        gr_n += 1
        rec = dict(source_id=str(1000 + gr_n), name=name)
        gr_authors.append(rec)
        if wd:
            gr_of.setdefault(wd, []).append(rec["source_id"])
        return rec

    pool = authors[4:]
    for i, a in enumerate(pool):
        r = i % 16
        if r < 8:
            name = a["name"].upper() if r == 0 else ("  " + a["name"].replace(" ", "   ")) if r == 1 else a["name"]
            add_ol(name, a["birth_year"], a["source_id"])
            if r == 2:
                add_gr(a["name"], a["source_id"])  # also on Goodreads, OL takes precedence
        elif r == 8:
            add_ol(a["name"], a["birth_year"] + 1)  # year mismatch
            add_gr(a["name"], a["source_id"])
        elif r == 9:
            add_ol(a["name"], a["birth_year"], a["source_id"])  # ambiguous duplicate
            add_ol(a["name"], a["birth_year"], a["source_id"])
        elif r == 10:
            add_ol(a["name"], None)  # no birth year on the OL side
            add_gr(a["name"], a["source_id"])
        elif r in (11, 12, 13):
            add_gr(a["name"], a["source_id"])
        # r in (14, 15): Wikidata only
    add_gr("Clarissa Thompson", "Q9001")
    add_gr("John Smith")
    add_gr("John Smith")
    add_gr("Maria Santos")
    for _ in range(6):
        add_ol(fresh_name(), rng.randint(1900, 1990))
        add_gr(fresh_name())

    isbn_counter = [0]

    def new_isbn():
        isbn_counter[0] += 1
        return isbn13(f"978{3000000 + isbn_counter[0] * 7:09d}")

    wd_works, ol_works, ol_editions, gr_works, gb_works = [], [], [], [], []
    for a in authors:
        if rng.random() < 0.4:
            wd_works.append(dict(source_id=f"Q{5000 + len(wd_works)}", title=f"{rng.choice(SUBJECTS)} of {a['name']}",
                                 author_source_ids=[a["source_id"]], language="en"))

    gb_n = 0

    def add_gb(code, blurb=True):
        nonlocal gb_n
        gb_n += 1
        rec = dict(source_id=f"GB{gb_n}", title="Google Books record", author_source_ids=[],
                   isbn_list=[code], publish_year=rng.randint(1950, 2020),
                   subjects=rng.sample(SUBJECTS, 2))
        if blurb:
            rec["blurb"] = f"A story told in {rng.randint(2, 40)} chapters."
        gb_works.append(rec)

    for wd_id, ol_ids in sorted(ol_of.items()):
        if len(ol_ids) != 1:
            continue
        for _ in range(rng.randint(1, 3)):
            code = new_isbn()
            wid = f"OL{100 + len(ol_works)}W"
            work = dict(source_id=wid, title=f"The {rng.choice(SUBJECTS)} Book", author_source_ids=ol_ids,
                        subjects=rng.sample(SUBJECTS, rng.randint(0, 2)), isbn_list=[hyphenate(code)])
            if rng.random() < 0.3:
                work["blurb"] = "An OpenLibrary synopsis."
            ol_works.append(work)
            for k in range(rng.randint(1, 2)):
                ed = dict(source_id=f"OL{100 + len(ol_editions)}M", work_source_id=wid,
                          publisher=rng.choice(PUBLISHERS), publish_country=rng.choice(WESTERN + COLONIES))
                if k == 0:
                    ed["isbn"] = isbn10_of(code) if rng.random() < 0.5 else code
                if rng.random() < 0.7:
                    ed["publish_year"] = rng.randint(1950, 2022)
                ol_editions.append(ed)
            if rng.random() < 0.5:
                add_gb(code)

    # One OL work whose author did not align; it is dropped by the collection policy.
    ol_works.append(dict(source_id="OL9999W", title="Orphan", author_source_ids=["OL9999A"]))

    for wd_id, gr_ids in sorted(gr_of.items()):
        if len(gr_ids) != 1:
            continue
        for _ in range(rng.randint(1, 2)):
            code = new_isbn()
            gr_works.append(dict(source_id=str(20000 + len(gr_works)), title=f"{rng.choice(SUBJECTS)} Stories",
                                 author_source_ids=gr_ids, isbn_list=[code],
                                 subjects=rng.sample(SUBJECTS, rng.randint(0, 1))))
            if rng.random() < 0.6 or wd_id == "Q9001":
                add_gb(isbn10_of(code) if rng.random() < 0.5 else code)
    gr_works.append(dict(source_id="29999", title="Shared title", author_source_ids=["1002", "1003"]))

    files = {
        "wd.authors.jsonl": [dict(a, source="WD") for a in authors + ineligible],
        "wd.works.jsonl": wd_works,
        "ol.authors.jsonl": ol_authors,
        "ol.works.jsonl": ol_works,
        "ol.editions.jsonl": ol_editions,
        "gr.authors.jsonl": gr_authors,
        "gr.works.jsonl": gr_works,
        "gb.works.jsonl": gb_works,
    }
    return files


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data" / "fixture", type=Path)
    parser.add_argument("--seed", default=7, type=int)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, records in generate(args.seed).items():
        lines = [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in records]
        if name == "ol.authors.jsonl":
            lines.insert(5, '{"source_id": "OL0A", "name": ')  # truncated export line
            lines.insert(9, json.dumps({"source_id": "OL0B", "name": "Extra Field", "wikipedia": "x"}))
        (args.out / name).write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
