"""Recurrent cells, network assembly, builders, and checkpoint round-trips."""

import numpy as np
import pytest

from gradtools import check_gradients
from tsgan.errors import ConfigError, DataError, ShapeError
from tsgan.models import (NetSpec, Network, build_critic, build_discriminator,
                          build_forecaster, build_generator, build_network,
                          build_timegan, conv_out_len, gru_cell_forward,
                          init_gru_cell, init_lstm_cell, load_checkpoint,
                          lstm_cell_forward, min_discriminator_len,
                          save_checkpoint, scale_width)
from tsgan.models.builders import (DISC_CONV_FILTERS, DISC_DENSE_UNITS,
                                   GENERATOR_DENSE_UNITS, GENERATOR_GRU_UNITS)
from tsgan.numcore import RngStream, Tensor, mean


def _zeroed(cell):
    return {k: Tensor(np.zeros_like(v.data), requires_grad=True) for k, v in cell.items()}


def test_gru_zero_parameters_halve_the_state():
    # z = r = 1/2 and the candidate is tanh(0) = 0, so h' = h/2 exactly.
    cell = _zeroed(init_gru_cell(3, 4, RngStream(0, ("gru",))))
    h = Tensor(np.arange(8.0).reshape(2, 4))
    x = Tensor(np.ones((2, 3)))
    out = gru_cell_forward(cell, x, h)
    np.testing.assert_allclose(out.data, h.data / 2.0)


def test_lstm_zero_parameters_oracle():
    # Gates sigma(0) = 1/2, candidate tanh(0) = 0: c' = c/2, h' = tanh(c/2)/2.
    cell = _zeroed(init_lstm_cell(3, 4, RngStream(0, ("lstm",))))
    c = Tensor(np.linspace(-1.0, 1.0, 8).reshape(2, 4))
    h = Tensor(np.zeros((2, 4)))
    x = Tensor(np.ones((2, 3)))
    h2, c2 = lstm_cell_forward(cell, x, h, c)
    np.testing.assert_allclose(c2.data, c.data / 2.0)
    np.testing.assert_allclose(h2.data, np.tanh(c.data / 2.0) / 2.0)


def test_cell_initialization_is_seeded_and_bounded():
    a = init_gru_cell(5, 7, RngStream(1, ("cell",)))
    b = init_gru_cell(5, 7, RngStream(1, ("cell",)))
    bound = 1.0 / np.sqrt(5 + 7)
    for key in a:
        np.testing.assert_array_equal(a[key].data, b[key].data)
        assert np.max(np.abs(a[key].data)) <= bound
    for bias in ("bz", "br", "bh"):
        np.testing.assert_array_equal(a[bias].data, 0.0)


def test_gru_cell_gradients():
    cell = init_gru_cell(2, 3, RngStream(2, ("g",)))
    x = Tensor(np.random.default_rng(0).normal(size=(4, 2)))
    h = Tensor(np.zeros((4, 3)))
    tensors = list(cell.values())
    check_gradients(lambda: mean(gru_cell_forward(cell, x, h)), tensors)


def test_lstm_cell_gradients():
    cell = init_lstm_cell(2, 3, RngStream(3, ("l",)))
    x = Tensor(np.random.default_rng(1).normal(size=(4, 2)))
    h = Tensor(np.zeros((4, 3)))
    c = Tensor(np.zeros((4, 3)))
    check_gradients(lambda: mean(lstm_cell_forward(cell, x, h, c)[0]),
                    list(cell.values()))


def test_netspec_roundtrip_and_validation():
    spec = NetSpec("demo", 4, [{"kind": "gru", "units": 3},
                               {"kind": "last_step"},
                               {"kind": "dense", "units": 2, "activation": "linear"}])
    again = NetSpec.from_dict(spec.to_dict())
    assert again.to_dict() == spec.to_dict()
    with pytest.raises(ConfigError):
        NetSpec("bad", 4, [{"kind": "pooling"}])
    with pytest.raises(ConfigError):
        NetSpec("bad", 4, [{"kind": "dense", "units": 2, "activation": "swish"}])
    with pytest.raises(ConfigError):
        NetSpec("bad", 0, [])


def test_network_rejects_mismatched_parameters():
    spec = NetSpec("demo", 2, [{"kind": "dense", "units": 3, "activation": "linear"}],
                   input_rank=2)
    net = build_network(spec, RngStream(0, ("n",)))
    bad = dict(net.params)
    bad["L0.W"] = Tensor(np.zeros((2, 4)))
    with pytest.raises(ShapeError):
        Network(spec, bad)


def test_forward_validates_input_rank_and_width():
    net = build_forecaster("gru", 1, 4, 6, 2, 3, RngStream(0, ("f",)))
    with pytest.raises(ShapeError):
        net(Tensor(np.zeros((5, 3))))
    with pytest.raises(ShapeError):
        net(Tensor(np.zeros((5, 6, 7))))


def test_time_distributed_dense_applies_per_step():
    spec = NetSpec("td", 3, [{"kind": "dense", "units": 2, "activation": "linear"}])
    net = build_network(spec, RngStream(4, ("td",)))
    x = np.random.default_rng(2).normal(size=(5, 7, 3))
    out = net(Tensor(x)).data
    w = net.params["L0.W"].data
    b = net.params["L0.b"].data
    np.testing.assert_allclose(out, x @ w + b)


def test_last_step_selects_the_final_time_slice():
    spec = NetSpec("ls", 3, [{"kind": "last_step"}])
    net = Network(spec, {})
    x = np.random.default_rng(3).normal(size=(4, 6, 3))
    np.testing.assert_array_equal(net(Tensor(x)).data, x[:, -1, :])


def test_recurrent_stack_output_shape_and_determinism():
    net1 = build_forecaster("lstm", 2, 5, 9, 3, 4, RngStream(6, ("fx",)))
    net2 = build_forecaster("lstm", 2, 5, 9, 3, 4, RngStream(6, ("fx",)))
    x = Tensor(np.random.default_rng(4).normal(size=(2, 9, 4)))
    out1 = net1(x).data
    assert out1.shape == (2, 3)
    np.testing.assert_array_equal(out1, net2(x).data)


def test_forecaster_network_gradients():
    net = build_forecaster("gru", 1, 3, 4, 2, 2, RngStream(7, ("gc",)))
    x = Tensor(np.random.default_rng(5).normal(size=(3, 4, 2)))
    check_gradients(lambda: mean(net.forward(x)), list(net.params.values()))


def test_scale_width_and_conv_len_helpers():
    assert scale_width(1024, 1.0) == 1024
    assert scale_width(1024, 1 / 32) == 32
    assert scale_width(2, 1 / 32) == 1  # floor of 1 unit
    assert conv_out_len(90, 5, 4) == 22
    assert min_discriminator_len() == 85


def test_generator_architecture_at_full_and_desk_scale():
    full = build_generator(8, 12, 10, RngStream(0, ("g1",)), feature_dim=18)
    kinds = [l["kind"] for l in full.spec.layers]
    assert kinds == ["gru", "gru", "gru", "last_step", "dense", "dropout",
                     "dense", "dense"]
    gru_units = [l["units"] for l in full.spec.layers if l["kind"] == "gru"]
    assert tuple(gru_units) == GENERATOR_GRU_UNITS
    dense_units = [l["units"] for l in full.spec.layers if l["kind"] == "dense"]
    assert tuple(dense_units[:2]) == GENERATOR_DENSE_UNITS
    assert full.spec.layers[-1]["activation"] == "sigmoid"
    assert full.spec.input_dim == 26

    small = build_generator(8, 12, 10, RngStream(0, ("g2",)), feature_dim=18,
                            width_mult=1 / 32)
    small_gru = [l["units"] for l in small.spec.layers if l["kind"] == "gru"]
    assert small_gru == [32, 16, 8]


def test_discriminator_architecture_and_minimum_length():
    disc = build_discriminator(90, 1, RngStream(1, ("d",)))
    conv = [l for l in disc.spec.layers if l["kind"] == "conv1d"]
    assert [l["filters"] for l in conv] == list(DISC_CONV_FILTERS)
    assert all(l["kernel"] == 5 and l["stride"] == 4 for l in conv)
    dense = [l["units"] for l in disc.spec.layers if l["kind"] == "dense"]
    assert dense[:2] == list(DISC_DENSE_UNITS)
    assert disc.spec.layers[-1]["activation"] == "sigmoid"

    out = disc(Tensor(np.random.default_rng(6).normal(size=(3, 90, 1))))
    assert out.data.shape == (3, 1)
    assert np.all((out.data > 0) & (out.data < 1))

    with pytest.raises(ShapeError) as err:
        build_discriminator(84, 1, RngStream(1, ("d2",)))
    assert "85" in str(err.value)


def test_critic_has_a_linear_head():
    critic = build_critic(90, 1, RngStream(2, ("c",)), width_mult=0.25)
    assert critic.spec.layers[-1]["activation"] == "linear"


def test_timegan_bundle_wiring():
    nets = build_timegan(6, hidden_dim=8, rng=RngStream(3, ("tg",)))
    assert set(nets) == {"embedder", "recovery", "generator", "supervisor",
                         "discriminator"}
    assert nets["embedder"].spec.input_dim == 6
    assert nets["embedder"].spec.layers[-1]["units"] == 8
    assert nets["recovery"].spec.input_dim == 8
    assert nets["recovery"].spec.layers[-1]["units"] == 6
    assert nets["discriminator"].spec.layers[-1]["units"] == 1
    x = Tensor(np.random.default_rng(7).uniform(size=(2, 5, 6)))
    latent = nets["embedder"](x)
    assert latent.data.shape == (2, 5, 8)
    back = nets["recovery"](latent)
    assert back.data.shape == (2, 5, 6)


def test_checkpoint_roundtrip_is_bit_exact(tmp_path):
    net = build_forecaster("gru", 2, 4, 6, 3, 5, RngStream(9, ("ck",)))
    stem = tmp_path / "model"
    save_checkpoint(stem, net, seed=9, step=17)
    loaded, manifest = load_checkpoint(stem)
    assert manifest["seed"] == 9 and manifest["step"] == 17
    assert loaded.spec.to_dict() == net.spec.to_dict()
    for name in net.param_order():
        np.testing.assert_array_equal(loaded.params[name].data, net.params[name].data)
    x = Tensor(np.random.default_rng(8).normal(size=(2, 6, 5)))
    np.testing.assert_array_equal(loaded(x).data, net(x).data)


def test_checkpoint_detects_blob_corruption(tmp_path):
    net = build_forecaster("gru", 1, 2, 3, 1, 2, RngStream(10, ("ck2",)))
    stem = tmp_path / "model"
    save_checkpoint(stem, net)

    blob = (tmp_path / "model.bin").read_bytes()
    (tmp_path / "model.bin").write_bytes(blob[:-8])
    with pytest.raises(DataError):
        load_checkpoint(stem)
    (tmp_path / "model.bin").write_bytes(blob + b"\x00" * 8)
    with pytest.raises(DataError):
        load_checkpoint(stem)
    with pytest.raises(DataError):
        load_checkpoint(tmp_path / "absent")


def test_clone_is_independent():
    net = build_forecaster("gru", 1, 2, 3, 1, 2, RngStream(11, ("cl",)))
    twin = net.clone()
    twin.params["L0.Wz"].data = twin.params["L0.Wz"].data + 1.0
    assert not np.array_equal(net.params["L0.Wz"].data, twin.params["L0.Wz"].data)
