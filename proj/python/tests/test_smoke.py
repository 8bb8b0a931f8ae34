import math

import numpy as np
import pytest

import streamcpd as cp


def test_detects_generated_changepoints_exactly():
    stream = cp.generate.normal_switch(30000, 10000, 55)
    events = cp.detect(stream.values)
    locations = [e.location for e in events]
    assert locations == [10000, 20000]
    assert cp.mae_with_penalty(stream.truth, locations, len(stream)).loss == 0.0


def test_streaming_detector_matches_batch_helper():
    stream = cp.generate.normal_switch(5000, 2500, 7)
    detector = cp.Detector()
    streamed = []
    for x in stream.values:
        result = detector.step(float(x))
        if result.event is not None:
            streamed.append(result.event.location)
    batch = [e.location for e in cp.detect(stream.values)]
    assert streamed == batch


def test_conjugate_update_formulas():
    p = cp.update(cp.NormalGammaParams(0.1, 0.01, 1.0, 0.0), 2.0)
    assert p.alpha == pytest.approx(0.6)
    assert p.beta == pytest.approx(1.01)
    assert p.kappa == 2.0
    assert p.mu == 1.0
    assert math.exp(cp.predictive_logpdf(cp.NormalGammaParams(1.0, 1.0, 1.0, 0.0), 0.0)) == pytest.approx(0.25)


def test_autotune_matches_warmup_moments():
    cfg = cp.AutotuneConfig()
    cfg.warmup_size = 2
    cfg.alpha0 = 0.1
    cfg.kappa0 = 1.0
    prior = cp.autotune([1.0, 3.0], cfg)
    assert prior.mu == pytest.approx(2.0)
    assert prior.beta == pytest.approx(0.1)


def test_snapshot_roundtrip_and_resume():
    stream = cp.generate.normal_switch(4000, 2000, 11)
    full = cp.Detector()
    half = cp.Detector()
    for i, x in enumerate(stream.values):
        full.step(float(x))
        if i < 1500:
            half.step(float(x))
    resumed = cp.Detector.from_snapshot(half.snapshot())
    for x in stream.values[1500:]:
        resumed.step(float(x))
    assert resumed.snapshot() == full.snapshot()


def test_multivariate_detector_sees_covariance_drift_posterior():
    stream = cp.generate.mv_covariance_drift(3)
    assert stream.values.shape == (2000, 2)
    detector = cp.MultivariateDetector()
    for row in stream.values[:200]:
        detector.step(row)
    posterior = detector.run_length_posterior()
    assert sum(mass for _, mass in posterior) == pytest.approx(1.0, abs=1e-9)


def test_metric_penalties():
    assert cp.mae_with_penalty([10], [10], 100).loss == 0.0
    assert cp.mae_with_penalty([10, 20], [12], 100).loss == 102.0
    assert cp.mae_with_penalty([10], [12, 90], 100).loss == 92.0
    assert cp.mae_with_penalty([10], [12, 90], 100, cp.PenaltyRule.LITERAL).loss == 104.0
    with pytest.raises(ValueError):
        cp.mae_with_penalty([100], [10], 100)


def test_generators_are_deterministic():
    a = cp.generate.gamma_alternating(2000, 4, 13)
    b = cp.generate.gamma_alternating(2000, 4, 13)
    assert np.array_equal(a.values, b.values)
    spiked = cp.generate.inject_outliers(a, 0.01, 8.0, 5)
    assert np.count_nonzero(a.values != spiked.values) == 20


def test_baselines_alarm_promptly_after_a_shift():
    rng = np.random.default_rng(3)
    data = np.concatenate([rng.normal(0, 1, 600), rng.normal(12, 1, 50)])

    cusum_cfg = cp.CusumConfig()
    cusum_cfg.burn_in = 200
    cusum_cfg.threshold = 8.0
    ewma_cfg = cp.EwmaConfig()
    ewma_cfg.burn_in = 200
    ewma_cfg.limit = 4.0

    for detector in (cp.CusumDetector(cusum_cfg), cp.EwmaDetector(ewma_cfg)):
        alarms = [a for a in map(detector.step, data) if a is not None]
        assert alarms and 600 <= alarms[0] <= 610


def test_bad_inputs_raise():
    detector = cp.Detector()
    with pytest.raises(ValueError):
        detector.step(float("nan"))
    cfg = cp.DetectorConfig()
    cfg.lambda_ = -1.0
    with pytest.raises(ValueError):
        cp.Detector(cfg)
