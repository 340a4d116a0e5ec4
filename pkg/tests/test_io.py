import json
from concurrent.futures import ThreadPoolExecutor

import pytest

from powapprox.cache import Cache, NullCache, make_key, open_cache
from powapprox.remez import best_rational
from powapprox.serialize import dumps, loads, result_from_dict, result_to_dict
from powapprox.targets import pow_on_unit


@pytest.fixture(scope="module")
def result(ctx128):
    return best_rational(pow_on_unit("1/2"), 4, 3, ctx128)


def test_result_round_trip_is_exact(result):
    back = loads(dumps(result))
    assert back.error == result.error
    assert back.reference == result.reference
    assert back.alternant.points == result.alternant.points
    x = result.ctx.mpf("0.37")
    assert back.approximant(x) == result.approximant(x)
    assert back.target == result.target and back.precision_bits == 128


def test_unknown_format_rejected(result):
    data = result_to_dict(result)
    data["format"] = 99
    with pytest.raises(ValueError):
        result_from_dict(data)


def test_cache_hit_and_version_bump(tmp_path):
    cache = Cache(tmp_path)
    key = make_key("approx", "1/2", 5, 4, 128)
    assert cache.get(key) is None
    cache.put(key, {"E": "1e-5"})
    assert cache.get(key) == {"E": "1e-5"}
    assert cache.get(make_key("approx", "1/2", 5, 4, 128, engine_version="9.9")) is None
    assert cache.get(make_key("approx", "1/2", 5, 4, 256)) is None


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = Cache(tmp_path)
    key = make_key("approx", "1/2", 5, 4, 128)
    path = cache.put(key, {"E": "1"})
    entry = json.loads(path.read_text())
    entry["payload"]["E"] = "2"
    path.write_text(json.dumps(entry))
    assert cache.get(key) is None
    path.write_text("{truncated")
    assert cache.get(key) is None


def test_concurrent_writers_leave_one_entry(tmp_path):
    cache = Cache(tmp_path)
    key = make_key("approx", "1/3", 3, 2, 128)
    payload = {"values": list(range(2000))}
    with ThreadPoolExecutor(8) as pool:
        list(pool.map(lambda _: cache.put(key, payload), range(32)))
    files = [p for p in tmp_path.rglob("*") if p.is_file()]
    assert len(files) == 1
    assert cache.get(key) == payload


def test_null_cache(tmp_path):
    assert isinstance(open_cache(None), NullCache)
    assert isinstance(open_cache(tmp_path), Cache)
    assert NullCache().get({}) is None
