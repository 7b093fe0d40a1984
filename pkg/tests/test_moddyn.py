import pytest

from guildnet.moddyn import (
    classify_modules,
    jaccard_series,
    module_timelines,
    submodule_correlation,
)
from guildnet.modularity import Partition, optimize, MultilayerParams
from guildnet.netcore import BOTH, Guild
from conftest import make_net


def simple_net_and_partition():
    links = {("a1", "b1"): BOTH, ("a2", "b2"): BOTH}
    net = make_net({y: links for y in (2000, 2001, 2002)})
    part = Partition({
        (x, y): (0 if x in ("a1", "b1") else 1)
        for y in (2000, 2001, 2002)
        for x in ("a1", "a2", "b1", "b2")
    })
    return net, part


def test_constant_module_constant_sizes():
    net, part = simple_net_and_partition()
    timelines = module_timelines(net, part)
    assert len(timelines) == 2
    t0 = timelines[0]
    assert [t0.size(Guild.NAG, y) for y in net.years] == [1, 1, 1]
    assert t0.lifespan == (2000, 2002)
    assert t0.distinct_actor_count == 2


def test_gap_year_keeps_lifespan():
    net = make_net({
        2000: {("a1", "b1"): BOTH},
        2001: {("a2", "b2"): BOTH},
        2002: {("a1", "b1"): BOTH},
    })
    part = Partition({
        ("a1", 2000): 0, ("b1", 2000): 0,
        ("a2", 2001): 1, ("b2", 2001): 1,
        ("a1", 2002): 0, ("b1", 2002): 0,
    })
    t0 = module_timelines(net, part)[0]
    assert t0.size(Guild.NAG, 2001) == 0
    assert t0.lifespan == (2000, 2002)


def test_sizes_sum_to_present_actors():
    links = {(f"a{i}", f"b{j}"): BOTH for i in range(4) for j in range(3)}
    net = make_net({2000: links})
    part = optimize(net, MultilayerParams(), 0)
    timelines = module_timelines(net, part)
    total = sum(t.size(Guild.NAG, 2000) for t in timelines)
    assert total == len(net.present_actors(2000, Guild.NAG))


def test_jaccard_values():
    members = {2000: {"x", "y"}, 2001: {"x", "y"}, 2002: {"y", "z"}, 2003: {"w"}}
    net_years = {y: {(m, "hub"): BOTH for m in ms} for y, ms in members.items()}
    net = make_net(net_years)
    part = Partition({key: 0 for key in net.present_pairs()})
    tl = module_timelines(net, part)[0]
    series = dict(jaccard_series(tl, Guild.NAG))
    assert series[2001] == 1.0
    assert series[2002] == pytest.approx(1 / 3)
    assert series[2003] == 0.0


def test_jaccard_skips_empty_years():
    net = make_net({
        2000: {("x", "hub"): BOTH},
        2001: {("other", "hub2"): BOTH},
        2002: {("x", "hub"): BOTH},
    })
    part = Partition({key: (0 if key[0] in ("x", "hub") else 1) for key in net.present_pairs()})
    tl = module_timelines(net, part)[0]
    years = [y for y, _ in jaccard_series(tl, Guild.NAG)]
    assert years == []  # module empty in 2001: both pairs skipped


def test_classification_threshold():
    links_major = {(f"a{i}", "b0"): BOTH for i in range(4)}
    links_minor = {("x1", "y1"): BOTH}
    net = make_net({2000: links_major | links_minor})
    part = Partition({key: (0 if key[0].startswith(("a", "b")) else 1)
                      for key in net.present_pairs()})
    timelines = module_timelines(net, part)
    major, transitory = classify_modules(timelines, major_threshold=3)
    assert [t.module_id for t in major] == [0]      # 5 distinct actors
    assert [t.module_id for t in transitory] == [1]  # 2 actors
    # exactly 3 distinct actors is transitory
    net3 = make_net({2000: {("a1", "b1"): BOTH, ("a2", "b1"): BOTH}})
    part3 = Partition({key: 0 for key in net3.present_pairs()})
    _, trans3 = classify_modules(module_timelines(net3, part3), 3)
    assert len(trans3) == 1
    # classification partitions the list
    assert {t.module_id for t in major} | {t.module_id for t in transitory} == {0, 1}


def test_submodule_correlation_identical_series():
    # both guilds churn identically: J series equal, rho = 1
    members = {
        2000: ({"a1", "a2"}, {"b1", "b2"}),
        2001: ({"a1", "a2"}, {"b1", "b2"}),
        2002: ({"a1", "a3"}, {"b1", "b3"}),
        2003: ({"a1", "a3", "a4"}, {"b1", "b3", "b4"}),
        2004: ({"a4"}, {"b4"}),
    }
    years = {}
    for y, (nags, hss) in members.items():
        years[y] = {(a, b): BOTH for a in nags for b in hss}
    net = make_net(years)
    part = Partition({key: 0 for key in net.present_pairs()})
    tl = module_timelines(net, part)[0]
    rho, p = submodule_correlation(tl)
    assert rho == pytest.approx(1.0)
    assert p < 1e-6


def test_submodule_correlation_needs_three_pairs():
    net, part = simple_net_and_partition()
    tl = module_timelines(net, part)[0]
    with pytest.raises(ValueError):
        submodule_correlation(tl)


def test_independent_series_mostly_uncorrelated():
    import numpy as np

    from guildnet import stats

    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(40):
        a = rng.random(50)
        b = rng.random(50)
        if abs(stats.pearson(a, b)) < 0.3:
            hits += 1
    assert hits >= 36  # 90%+ of independent draws stay small
