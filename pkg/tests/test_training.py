"""Training loop semantics and the detection pipeline."""
import numpy as np
import pytest

from inrad.data import DatasetBundle, SynthSpec, generate_synthetic, scale
from inrad.encodings import vanilla_encode
from inrad.errors import ConfigError, TrainingError
from inrad.model import SirenConfig, forward, init_model, loss_and_grads
from inrad.training import (
    ENCODERS,
    MODES,
    TrainConfig,
    detect_pipeline,
    encode_for_mode,
    fit,
)


def tiny_model(seed=0, input_dim=1, output_dim=1):
    return init_model(
        SirenConfig(
            input_dim=input_dim,
            output_dim=output_dim,
            hidden_dim=16,
            n_hidden_layers=2,
            omega0_first=30.0,
            seed=seed,
        )
    )


def tiny_problem(n=64, seed=1):
    rng = np.random.default_rng(seed)
    coords = vanilla_encode(n)
    targets = np.sin(3.0 * coords) + 0.01 * rng.normal(size=(n, 1))
    return coords, targets


def test_fit_reduces_loss():
    model = tiny_model()
    coords, targets = tiny_problem()
    report = fit(model, coords, targets, TrainConfig(max_epochs=300, patience=300))
    assert report.loss_trace[-1] < report.loss_trace[0]
    assert report.best_loss <= min(report.loss_trace)


def test_fit_restores_best_parameters():
    model = tiny_model()
    coords, targets = tiny_problem()
    report = fit(model, coords, targets, TrainConfig(max_epochs=200, patience=200))
    loss_now, _ = loss_and_grads(model, coords, targets)
    # the loss of the restored parameters is the recorded best
    assert loss_now == pytest.approx(report.best_loss, rel=1e-12)


def test_fit_is_deterministic():
    results = []
    for _ in range(2):
        model = tiny_model(seed=5)
        coords, targets = tiny_problem(seed=2)
        fit(model, coords, targets, TrainConfig(max_epochs=50, patience=50))
        results.append(forward(model, coords))
    np.testing.assert_array_equal(results[0], results[1])


def test_early_stopping_on_constant_loss():
    """A flat loss surface stops after exactly patience extra epochs.

    Duplicated coordinates with opposing targets make the best fit the
    midpoint; with a zeroed read-out layer the loss starts at its
    minimum and every gradient vanishes, so no epoch ever improves.
    """
    model = tiny_model()
    model.weights[-1] = np.zeros_like(model.weights[-1])
    coords = np.repeat(vanilla_encode(8), 2, axis=0)
    targets = np.tile([[1.0], [-1.0]], (8, 1))
    report = fit(model, coords, targets, TrainConfig(patience=30))
    assert report.loss_trace == [1.0] * 31
    assert report.stopping_epoch == 31
    assert report.best_epoch == 1
    assert not report.hit_max_epochs


def test_patience_counts_insufficient_relative_improvement():
    # huge threshold: even real improvements count as stalls
    model = tiny_model()
    coords, targets = tiny_problem()
    cfg = TrainConfig(patience=7, min_rel_improvement=0.999)
    report = fit(model, coords, targets, cfg)
    assert report.stopping_epoch == 8


def test_hit_max_epochs_flag():
    model = tiny_model()
    coords, targets = tiny_problem()
    report = fit(model, coords, targets, TrainConfig(max_epochs=12, patience=50))
    assert report.hit_max_epochs
    assert report.stopping_epoch == 12
    assert len(report.loss_trace) == 12


def test_minibatch_mode_trains():
    model = tiny_model()
    coords, targets = tiny_problem()
    report = fit(
        model, coords, targets, TrainConfig(max_epochs=60, patience=60, batch_size=16)
    )
    assert report.loss_trace[-1] < report.loss_trace[0]


def test_fresh_optimizer_state_per_fit():
    # two consecutive fits must equal one fit re-run from the same start
    model_a = tiny_model(seed=9)
    coords, targets = tiny_problem()
    cfg = TrainConfig(max_epochs=5, patience=50)
    fit(model_a, coords, targets, cfg)
    first_params = [p.copy() for p in model_a.parameters()]
    fit(model_a, coords, targets, cfg)

    model_b = tiny_model(seed=9)
    model_b.set_parameters([p.copy() for p in first_params])
    fit(model_b, coords, targets, cfg)
    for a, b in zip(model_a.parameters(), model_b.parameters()):
        np.testing.assert_array_equal(a, b)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_non_finite_loss_raises_training_error():
    # a step of ~lr pushes the read-out past 1e200, squaring overflows
    model = tiny_model()
    coords, targets = tiny_problem()
    with pytest.raises(TrainingError) as info:
        fit(model, coords, targets, TrainConfig(lr=1e200, max_epochs=10, patience=10))
    assert info.value.last_epoch >= 1


def test_train_config_validation():
    with pytest.raises(ConfigError):
        TrainConfig(lr=0.0)
    with pytest.raises(ConfigError):
        TrainConfig(beta1=1.0)
    with pytest.raises(ConfigError):
        TrainConfig(patience=0)
    with pytest.raises(ConfigError):
        TrainConfig(batch_size=0)
    with pytest.raises(ConfigError):
        TrainConfig(min_rel_improvement=-0.1)


def test_report_to_dict_round_trips_cleanly():
    model = tiny_model()
    coords, targets = tiny_problem()
    report = fit(model, coords, targets, TrainConfig(max_epochs=3, patience=30))
    entry = report.to_dict()
    assert entry["stopping_epoch"] == 3
    assert entry["loss_trace"] == report.loss_trace


# --- encoding / pipeline wiring ---

def small_bundle(seed=0):
    bundle, _ = generate_synthetic(
        SynthSpec(
            train_len=120,
            test_len=100,
            dim=2,
            segment_len_range=(3, 5),
            seed=seed,
        )
    )
    return bundle


def test_encode_for_mode_shapes():
    bundle = small_bundle()
    for encoder in ENCODERS:
        coords_train, coords_test, _ = encode_for_mode(
            bundle.train, bundle.test, "warm_start", encoder
        )
        width = 6 if encoder == "temporal" else 1
        assert coords_train.shape == (120, width)
        assert coords_test.shape == (100, width)
        coords_train, coords_test, _ = encode_for_mode(
            bundle.train, bundle.test, "cold_start", encoder
        )
        assert coords_train is None
        assert coords_test.shape == (100, width)


def test_cold_vanilla_star_degenerates_to_vanilla():
    bundle = small_bundle()
    _, star, _ = encode_for_mode(bundle.train, bundle.test, "cold_start", "vanilla_star")
    _, plain, _ = encode_for_mode(bundle.train, bundle.test, "cold_start", "vanilla")
    np.testing.assert_array_equal(star, plain)


def test_encode_for_mode_rejects_unknown_names():
    bundle = small_bundle()
    with pytest.raises(ConfigError):
        encode_for_mode(bundle.train, bundle.test, "tepid_start", "temporal")
    with pytest.raises(ConfigError):
        encode_for_mode(bundle.train, bundle.test, "warm_start", "fourier")


FAST = dict(
    siren=SirenConfig(
        input_dim=1, output_dim=1, hidden_dim=24, n_hidden_layers=2, omega0_first=300.0
    ),
    train_cfg=TrainConfig(max_epochs=150, patience=20),
)


def test_pipeline_warm_runs_two_phases():
    bundle = small_bundle()
    result = detect_pipeline(bundle, mode="warm_start", **FAST)
    assert set(result.reports) == {"pretrain", "retrain"}
    assert result.scores.shape == (bundle.test.n,)
    assert np.all(result.scores >= 0)
    assert result.encoder_config is not None


def test_pipeline_cold_runs_single_phase():
    bundle = small_bundle()
    result = detect_pipeline(bundle, mode="cold_start", **FAST)
    assert set(result.reports) == {"fit"}


def test_pipeline_scaling_source_depends_on_mode():
    bundle = small_bundle()
    warm = detect_pipeline(bundle, mode="warm_start", **FAST)
    cold = detect_pipeline(bundle, mode="cold_start", **FAST)
    np.testing.assert_array_equal(warm.scaling.minimum, bundle.train.values.min(axis=0))
    np.testing.assert_array_equal(cold.scaling.minimum, bundle.test.values.min(axis=0))


def test_pipeline_template_dims_are_replaced():
    bundle = small_bundle()
    template = SirenConfig(
        input_dim=99, output_dim=99, hidden_dim=24, n_hidden_layers=2, omega0_first=300.0
    )
    result = detect_pipeline(
        bundle, encoder="temporal", siren=template, train_cfg=FAST["train_cfg"]
    )
    assert result.model.config.input_dim == 6
    assert result.model.config.output_dim == bundle.test.dim
    assert result.model.config.hidden_dim == 24


def test_pipeline_scores_match_manual_recompute():
    from inrad.evaluation import score_series
    from inrad.training import encode_for_mode

    bundle = small_bundle()
    result = detect_pipeline(bundle, mode="warm_start", **FAST)
    _, coords_test, _ = encode_for_mode(
        bundle.train, bundle.test, "warm_start", "temporal"
    )
    expected = score_series(
        result.model, coords_test, scale(bundle.test.values, result.scaling)
    )
    np.testing.assert_array_equal(result.scores, expected)


def test_pipeline_detects_obvious_anomaly():
    from inrad.evaluation import best_f1_search

    bundle, _ = generate_synthetic(
        SynthSpec(
            train_len=300,
            test_len=200,
            dim=1,
            n_anomalies=2,
            segment_len_range=(4, 6),
            magnitude=8.0,
            seed=3,
        )
    )
    result = detect_pipeline(
        bundle,
        mode="warm_start",
        siren=SirenConfig(
            input_dim=1, output_dim=1, hidden_dim=32, n_hidden_layers=2, omega0_first=300.0
        ),
        train_cfg=TrainConfig(max_epochs=400, patience=30),
    )
    assert best_f1_search(result.scores, bundle.test.labels).f1 >= 0.9


def test_mode_constants():
    assert MODES == ("warm_start", "cold_start")
    assert ENCODERS == ("temporal", "vanilla", "vanilla_star")
