import json
import logging

from redcheck.cache import CountCache, clear, inspect, key_hash


def test_hit_on_second_lookup(tmp_path):
    calls = []

    def compute():
        calls.append(1)
        return 42

    a = CountCache(tmp_path)
    assert a.get_or_compute("k", compute) == 42
    b = CountCache(tmp_path)
    assert b.get_or_compute("k", compute) == 42
    assert len(calls) == 1
    assert (a.misses, b.hits) == (1, 1)


def test_entries_are_content_addressed(tmp_path):
    c = CountCache(tmp_path)
    c.get_or_compute("system text\ne=1", lambda: 7)
    h = key_hash("system text\ne=1")
    entry = json.loads((tmp_path / h[:2] / f"{h}.json").read_text())
    assert (entry["key"], entry["value"]) == ("system text\ne=1", 7)


def test_tampered_entry_is_recomputed_with_warning(tmp_path, caplog):
    CountCache(tmp_path).get_or_compute("k", lambda: 5)
    path = CountCache(tmp_path).path("k")
    entry = json.loads(path.read_text())
    entry["value"] = 6
    path.write_text(json.dumps(entry))
    c = CountCache(tmp_path)
    with caplog.at_level(logging.WARNING):
        assert c.get_or_compute("k", lambda: 5) == 5
    assert c.corrupt == 1 and "corrupt" in caplog.text
    assert CountCache(tmp_path).get_or_compute("k", lambda: -1) == 5


def test_garbage_entry_is_recomputed(tmp_path):
    c = CountCache(tmp_path)
    c.path("k").parent.mkdir(parents=True)
    c.path("k").write_text("not json")
    assert c.get_or_compute("k", lambda: [1, 2]) == [1, 2]
    assert c.corrupt == 1


def test_disabled_cache_writes_nothing(tmp_path):
    c = CountCache(tmp_path, enabled=False)
    assert c.get_or_compute("k", lambda: 3) == 3
    assert not list(tmp_path.iterdir())


def test_inspect_and_clear(tmp_path):
    c = CountCache(tmp_path)
    for i in range(3):
        c.get_or_compute(f"k{i}", lambda i=i: i)
    info = inspect(tmp_path)
    assert info["entries"] == 3 and info["corrupt"] == 0 and info["bytes"] > 0
    c.path("k0").write_text("{}")
    assert inspect(tmp_path)["corrupt"] == 1
    assert clear(tmp_path) == 3
    assert inspect(tmp_path)["entries"] == 0
