"""Smoke test for the Python extension.

Build and install it first, for example:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/barbilian-*.whl
    python python/smoke_test.py
"""

import math

import barbilian as b


def close(x, y, tol):
    assert abs(x - y) <= tol, f"{x} != {y} (tol {tol})"


def main():
    disk = b.SourceSet.unit_circle()

    r = b.barbilian_distance(disk, (0, 0), (0.5, 0))
    close(r.value, math.log(3), 1e-12)
    close(r.max_ratio, 2.0, 1e-12)
    close(r.min_ratio, 2.0 / 3.0, 1e-12)
    assert not r.degenerate
    close(b.distance_1934(disk, (0, 0), (0.5, 0)).value, math.log(3), 1e-12)

    M, m, argmax, argmin = b.ratio_extrema(disk, (0, 0), (0.5, 0))
    close(argmax[0], 1.0, 1e-9)
    close(argmin[0], -1.0, 1e-9)

    for a, c in [((0.3, -0.2), (-0.6, 0.45)), ((0.9, 0.0), (-0.9, 0.0))]:
        close(b.barbilian_distance(disk, a, c).value, b.poincare_disk_distance(a, c), 1e-9)

    center, radius = b.apollonius_circle((0, 0), (1, 0), 2.0)
    close(center[0], 4 / 3, 1e-15)
    close(radius, 2 / 3, 1e-15)
    apollonius = b.SourceSet.apollonius((0, 0), (1, 0), 2.0)
    r = b.barbilian_distance(apollonius, (0, 0), (1, 0))
    assert r.degenerate and r.value <= 1e-9
    assert b.is_degenerate(apollonius, (0, 0), (1, 0))

    sites = b.SourceSet.points([(0, 2), (0, -2)])
    assert b.barbilian_distance(sites, (0, 0), (1, 0)).value == 0.0

    metric = b.Metric(disk)
    pts = [(0.1 * i, 0.05 * i - 0.2) for i in range(7)]
    report = metric.verify_weak_distance(pts)
    assert report["passed"] and report["triples_checked"] == 35

    squared = b.Metric(disk, influence=2.0)
    close(squared.distance((0, 0), (0.5, 0)).value, 2 * math.log(3), 1e-12)

    gauged = b.Metric(disk, influence=lambda p, a: (2 + p[0]) * math.dist(p, a))
    close(gauged.distance((0, 0), (0.5, 0)).value, math.log(3), 1e-12)

    path = b.approximate_geodesic(disk, (-0.5, 0), (0.5, 0), resolution=64)
    assert 2 * math.log(3) - 1e-9 <= path.length <= 1.05 * 2 * math.log(3)
    assert path.nodes[0] == [-0.5, 0.0] and path.nodes[-1] == [0.5, 0.0]

    try:
        b.barbilian_distance(disk, (1, 0), (0, 0))
    except b.AdmissibilityError as e:
        assert "QueryTouchesSource" in str(e)
    else:
        raise AssertionError("expected AdmissibilityError")

    try:
        b.apollonius_circle((0, 0), (1, 0), 1.0)
    except b.BarbilianError as e:
        assert "AlphaIsOne" in str(e)
    else:
        raise AssertionError("expected BarbilianError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
