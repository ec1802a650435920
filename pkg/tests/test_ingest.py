import io
import random

import pytest

import oracles
from conftest import FIXTURE_SCHEMA
from coauthnet.exceptions import ConfigError
from coauthnet.ingest import (
    FIELDS,
    PaperRecord,
    author_names,
    build_affiliation_index,
    filter_records,
    parse_records,
    project_coauthorship,
    read_records,
)

HEADER = "\t".join(FIELDS) + "\n"


def tsv(*rows):
    return io.StringIO(HEADER + "".join("\t".join(map(str, r)) + "\n" for r in rows))


def rec(paper, author, year=2005, aff="", field="F1"):
    return PaperRecord(paper, author, author.upper(), aff, f"Inst {aff}" if aff else "", year, field)


def test_parse_happy_path():
    records, skipped = parse_records(tsv(
        ("p1", "a", "Alice", "X", "Inst X", 2001, "F"),
        ("p1", "b", "Bob", "", "", 2001, "F"),
        ("p2", "a", "Alice", "X", "Inst X", 2003, "F"),
    ))
    assert skipped == 0
    assert len(records) == 3
    assert records[0] == PaperRecord("p1", "a", "Alice", "X", "Inst X", 2001, "F")
    assert records[1].affiliation_id == ""


def test_parse_skips_empty_paper_id():
    records, skipped = parse_records(tsv(
        ("", "a", "Alice", "", "", 2001, "F"),
        ("p1", "a", "Alice", "", "", 2001, "F"),
    ))
    assert (len(records), skipped) == (1, 1)


def test_parse_with_schema_and_delimiter():
    text = "PID,AID,NAME,AFF,AFFN,Y,FLD\np1,a,Alice,,,2010,F\n"
    schema = {"paper_id": "PID", "author_id": "AID", "author_name": "NAME",
              "affiliation_id": "AFF", "affiliation_name": "AFFN", "year": "Y", "field_id": "FLD"}
    records, _ = parse_records(io.StringIO(text), schema, delimiter=",")
    assert records == [PaperRecord("p1", "a", "Alice", "", "", 2010, "F")]


def test_parse_missing_mapped_column_is_config_error():
    with pytest.raises(ConfigError, match="year"):
        parse_records(io.StringIO("paper_id\tauthor_id\n"))


def test_parse_unknown_schema_field():
    with pytest.raises(ConfigError):
        parse_records(tsv(), {"paperid": "x"})


def test_parse_generated_fixture_bookkeeping():
    """10k generated rows with injected bad rows: count = generated - bad."""
    rng = random.Random(11)
    rows, bad = [], 0
    for i in range(10_000):
        kind = rng.random()
        row = [f"p{i // 3}", f"a{rng.randint(0, 500)}", "N", "", "", str(rng.randint(1990, 2020)), "F"]
        if kind < 0.02:
            row[0] = ""
            bad += 1
        elif kind < 0.04:
            row[1] = ""
            bad += 1
        elif kind < 0.05:
            row[5] = "20x5"
            bad += 1
        elif kind < 0.06:
            row[5] = "999"
            bad += 1
        elif kind < 0.07:
            row = row[:-1]
            bad += 1
        rows.append(row)
    text = HEADER + "".join("\t".join(r) + "\n" for r in rows)
    records, skipped = parse_records(io.StringIO(text))
    assert skipped == bad
    assert len(records) == 10_000 - bad


def test_read_records_unreadable_path(tmp_path):
    with pytest.raises(OSError):
        read_records([tmp_path / "missing.tsv"])


def test_read_records_concatenates_in_path_order(tmp_path):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    a.write_text(HEADER + "p1\tx\tX\t\t\t2001\tF\n")
    b.write_text(HEADER + "p2\ty\tY\t\t\t2002\tF\n")
    serial, _ = read_records([a, b])
    threaded, _ = read_records([a, b], n_jobs=2)
    assert [r.paper_id for r in serial] == ["p1", "p2"] == [r.paper_id for r in threaded]


def test_filter_year_window():
    records = [rec("p", "a", y) for y in (1999, 2000, 2016, 2017)]
    kept = filter_records(records, 2000, 2016)
    assert [r.year for r in kept] == [2000, 2016]


def test_filter_absent_field_is_empty():
    assert filter_records([rec("p", "a")], 1000, 3000, "nope") == []


def test_filter_inverted_range():
    with pytest.raises(ValueError):
        filter_records([], 2010, 2000)


def test_filter_matches_linear_scan():
    rng = random.Random(5)
    records = [rec(f"p{i}", f"a{i}", rng.randint(1995, 2020), field=rng.choice("ABC"))
               for i in range(500)]
    got = filter_records(records, 2000, 2016, "B")
    expect = []
    for r in records:
        if r.year >= 2000 and r.year <= 2016 and r.field_id == "B":
            expect.append(r)
    assert got == expect


def test_projection_triangle():
    g = project_coauthorship([rec("p", x) for x in "abc"])
    assert g.edge_count == 3
    assert set(g.weights.tolist()) == {1}


def test_projection_multiplicity():
    g = project_coauthorship([rec("p1", "a"), rec("p1", "b"), rec("p2", "b"), rec("p2", "a")])
    assert g.edge_count == 1 and g.weight(0, 1) == 2


def test_projection_single_author_and_duplicate_listing():
    g = project_coauthorship([rec("p1", "a"), rec("p2", "b"), rec("p2", "b")])
    assert g.labels == ("a", "b")
    assert g.edge_count == 0


def _random_papers(seed, n_papers=50, max_authors=6, pool=40):
    rng = random.Random(seed)
    papers = {}
    for i in range(n_papers):
        papers[f"p{i:03d}"] = [f"a{rng.randint(0, pool)}" for _ in range(rng.randint(1, max_authors))]
    return papers


@pytest.mark.parametrize("seed", range(4))
def test_projection_matches_pair_counter(seed):
    papers = _random_papers(seed)
    records = [rec(p, a) for p, authors in papers.items() for a in authors]
    g = project_coauthorship(records)
    got = {frozenset((g.labels[u], g.labels[v])): w for u, v, w in g.edges()}
    assert got == dict(oracles.pair_counter(papers))


def test_projection_is_order_independent():
    papers = _random_papers(9)
    records = [rec(p, a) for p, authors in papers.items() for a in authors]
    shuffled = records[:]
    random.Random(1).shuffle(shuffled)
    assert project_coauthorship(records) == project_coauthorship(shuffled)


def test_projection_author_cap_skips_and_logs(caplog):
    records = [rec("big", f"a{i}") for i in range(6)] + [rec("small", "a0"), rec("small", "b")]
    capped = []
    g = project_coauthorship(records, author_cap=5, capped=capped)
    assert capped == ["big"]
    assert g.node_count == 7 and g.edge_count == 1
    assert "clique expansion skipped" in caplog.text


def test_full_range_filter_then_project_equals_project():
    papers = _random_papers(2)
    records = [rec(p, a, year=2000 + i % 17) for i, (p, authors) in enumerate(papers.items())
               for a in authors]
    assert project_coauthorship(filter_records(records, 1000, 3000)) == project_coauthorship(records)


def test_affiliation_index_counts_distinct_papers():
    records = [rec("p1", "a", aff="X"), rec("p2", "a", aff="X"), rec("p1", "a", aff="X"),
               rec("p3", "a", aff="")]
    idx = build_affiliation_index(records)
    assert idx.entries == {("a", "X"): 2}
    assert idx.names == {"X": "Inst X"}


def test_affiliation_index_matches_group_by():
    rng = random.Random(4)
    records = [rec(f"p{rng.randint(0, 60)}", f"a{rng.randint(0, 20)}",
                   aff=rng.choice(["", "X", "Y", "Z"])) for _ in range(400)]
    groups = {}
    for r in records:
        if r.affiliation_id:
            groups.setdefault((r.author_id, r.affiliation_id), set()).add(r.paper_id)
    idx = build_affiliation_index(records)
    assert idx.entries == {k: len(v) for k, v in groups.items()}
    assert all(c >= 1 for c in idx.entries.values())


def test_affiliation_index_csv_round_trip():
    idx = build_affiliation_index([rec("p1", "a", aff="X"), rec("p2", "b", aff="Y")])
    back = type(idx).from_csv(io.StringIO(idx.to_csv()))
    assert back == idx


def test_author_names_first_seen():
    records = [PaperRecord("p", "a", "", "", "", 2000, ""), PaperRecord("p", "a", "Ann", "", "", 2000, ""),
               PaperRecord("q", "a", "Anne", "", "", 2000, "")]
    assert author_names(records) == {"a": "Ann"}


def test_shipped_fixture_parses(fixture_path):
    records, skipped = read_records([fixture_path], FIXTURE_SCHEMA)
    assert skipped == 3
    assert len({r.paper_id for r in records}) == 50
    window = filter_records(records, 2000, 2016)
    assert len({r.paper_id for r in window}) == 47
