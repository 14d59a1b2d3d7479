"""End-to-end smoke tests of the python bindings."""

import math

import numpy as np
import pytest

import lostu


def look_at_view(center, focal=400.0):
    view = lostu.View()
    view.intrinsics = lostu.CameraIntrinsics(focal, focal)
    pose = lostu.CameraPose()
    pose.center = np.asarray(center, dtype=float)
    pose.rotation = lostu.look_at_rotation(pose.center, np.zeros(3))
    view.pose = pose
    return view


def make_two_view_track(sigma_px=0.0):
    views = [look_at_view([0.0, -2.0, -6.0]), look_at_view([0.0, 2.0, -2.0])]
    track = lostu.Track()
    rng = np.random.default_rng(3)
    entries = []
    for view_id, view in enumerate(views):
        obs = lostu.project(np.zeros(3), view)
        px, py = obs.pixel[0], obs.pixel[1]
        cov = np.zeros((2, 2))
        if sigma_px > 0:
            px += sigma_px * rng.standard_normal()
            py += sigma_px * rng.standard_normal()
            cov = sigma_px**2 * np.eye(2)
        entries.append(lostu.TrackEntry(view_id, lostu.Observation(px, py, cov)))
    track.entries = entries
    return track, views


def test_projection_and_los_roundtrip():
    view = look_at_view([0.0, -2.0, -6.0])
    obs = lostu.project(np.zeros(3), view)
    assert obs.pixel[2] == 1.0
    los = lostu.los_direction_world(obs, view)
    expected = -view.pose.center / np.linalg.norm(view.pose.center)
    assert np.allclose(los, expected, atol=1e-12)


def test_all_methods_recover_a_noiseless_point():
    track, views = make_two_view_track()
    for solver in (
        lostu.triangulate_midpoint,
        lostu.triangulate_dlt,
        lostu.triangulate_hs,
    ):
        estimate = solver(track, views)
        assert np.linalg.norm(estimate.position) < 1e-9
    assert np.linalg.norm(lostu.triangulate_lost(track, views, 1.0).position) < 1e-9


def test_lostu_reduces_to_lost_under_pixel_noise_only():
    track, views = make_two_view_track(sigma_px=1.0)
    lost = lostu.triangulate_lost(track, views, 1.0)
    aware = lostu.triangulate_lostu(track, views, lostu.NoiseSources.pixel_only())
    assert np.linalg.norm(lost.position - aware.position) < 1e-8
    assert aware.method == lostu.Method.LOSTU


def test_bootstrap_range_matches_geometry():
    track, views = make_two_view_track()
    assert lostu.bootstrap_range(track, views, 0) == pytest.approx(math.sqrt(40.0))
    assert lostu.bootstrap_range(track, views, 1) == pytest.approx(math.sqrt(8.0))


def test_degenerate_track_raises():
    track, views = make_two_view_track()
    views[1] = views[0]
    track.entries = [track.entries[0], lostu.TrackEntry(1, track.entries[0].obs)]
    with pytest.raises(lostu.DegenerateParallax):
        lostu.triangulate_lost(track, views, 1.0)


def test_resection_recovers_center():
    view = look_at_view([1.0, -2.0, -8.0], focal=600.0)
    points = []
    for offset in ([0, 0, 0], [1, 0.5, 0], [-1, 1, 0.5], [0.5, -1, -0.5]):
        position = np.asarray(offset, dtype=float)
        points.append(lostu.ResectionPoint(position, lostu.project(position, view)))
    result = lostu.estimate_camera_center(view, points)
    assert np.allclose(result.center, view.pose.center, atol=1e-9)


def test_scene_json_roundtrip(tmp_path):
    track, views = make_two_view_track(sigma_px=1.0)
    scene = lostu.Scene()
    scene.views = views
    scene.tracks = [track]
    scene.points = [np.zeros(3)]
    path = tmp_path / "scene.json"
    lostu.save_scene(scene, str(path))
    loaded = lostu.load_scene(str(path))
    assert len(loaded.views) == 2
    assert np.allclose(loaded.views[0].pose.rotation, views[0].pose.rotation)
    assert np.allclose(
        loaded.tracks[0].entries[1].obs.pixel, track.entries[1].obs.pixel
    )
    with pytest.raises(lostu.SchemaError):
        lostu.load_scene(str(tmp_path / "missing.json"))


def test_bench_study_is_deterministic():
    config = lostu.TwoViewConfig()
    config.trials = 40
    config.seed = 9
    reports_a = lostu.run_two_view_study(config)
    reports_b = lostu.run_two_view_study(config)
    assert lostu.bench_csv(reports_a) == lostu.bench_csv(reports_b)
    methods = {stats.method for stats in reports_a[0].methods}
    assert {"midpoint", "dlt", "lost", "lostu", "hs"} <= methods
