from threading import Thread

from dualalpha.utils import metrics


def test_time_block_records(monkeypatch):
    metrics.reset()
    ticks = iter([1.0, 1.5, 2.0, 4.0])
    monkeypatch.setattr(metrics, "perf_counter", lambda: next(ticks))
    with metrics.time_block("build.dim0"):
        pass
    with metrics.time_block("build.dim0"):
        pass
    assert metrics.get_stats("build.dim0") == {"count": 2, "total": 2.5, "max": 2.0}
    assert metrics.labels() == ["build.dim0"]


def test_unknown_label_is_empty():
    metrics.reset()
    assert metrics.get_stats("nothing") == {"count": 0, "total": 0.0, "max": 0.0}


def test_concurrent_records_are_all_counted():
    metrics.reset()

    def work():
        for _ in range(200):
            metrics.record_duration("cech.graph", 0.5)

    threads = [Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    st = metrics.get_stats("cech.graph")
    assert st["count"] == 800
    assert st["total"] == 400.0


def test_build_records_one_label_per_dimension():
    from dualalpha.builder import build_alpha
    from dualalpha.cech import WeightedPoints
    from dualalpha.models.request import BuildParams

    metrics.reset()
    pts = WeightedPoints.unweighted([[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]], 1.0)
    build_alpha(pts, BuildParams(d=2))
    assert metrics.labels() == ["build.dim0", "build.dim1", "build.dim2", "cech.graph"]
