import numpy as np
import pytest

from swipenet.errors import ConfigError, ShapeError
from swipenet.model import (Checkpoint, Conv3x3, Flatten, FullyConnected,
                            MaxPool2x2, ModelSpec, ReLU, SoftmaxNLL,
                            build_preset, count_params, freeze_all_but_last_k,
                            infer_shapes, init_params, param_shapes,
                            spatial_chain)

ATTR_CHAIN = [250, 248, 124, 122, 61, 59, 30, 28, 14, 12, 6]
GENDER_CHAIN = [250, 248, 124, 122, 120, 60, 58, 56, 28, 26, 24, 12, 10, 8, 4]


class TestPresets:
    def test_attractiveness_chain(self):
        assert spatial_chain(build_preset("attractiveness")) == ATTR_CHAIN

    def test_gender_chain(self):
        assert spatial_chain(build_preset("gender")) == GENDER_CHAIN

    def test_attractiveness_param_count(self):
        assert count_params(build_preset("attractiveness")) == 870_522

    def test_gender_param_count(self):
        total = count_params(build_preset("gender"))
        assert total == 28_354_242
        assert total > 28_000_000

    def test_gender_last_k_counts(self):
        g = build_preset("gender")
        assert count_params(g, last_k=1) == 1_026
        assert count_params(g, last_k=2) == 525_826
        assert count_params(g, last_k=3) == 8_915_458

    def test_small_variant_chain_and_count(self):
        s = build_preset("attractiveness_small")
        assert s.input_shape == (3, 64, 64)
        assert spatial_chain(s) == [64, 62, 31, 29, 15]
        ckpt = init_params(s, seed=0)
        enumerated = sum(p["w"].size + p["b"].size for p in ckpt.params)
        assert count_params(s) == enumerated == 161_370

    def test_small_variant_head_matches_full(self):
        small = [l for l in build_preset("attractiveness_small").layers
                 if l.kind in ("fc", "dropout")]
        full = [l for l in build_preset("attractiveness").layers
                if l.kind in ("fc", "dropout")]
        assert small == full

    def test_logreg_head_count(self):
        assert count_params(build_preset("logreg_head", in_dim=4096)) == 8_194

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            build_preset("resnet")

    def test_last_k_too_large(self):
        with pytest.raises(ConfigError):
            count_params(build_preset("logreg_head", in_dim=8), last_k=2)

    def test_count_matches_enumeration_oracle(self):
        # oracle: allocate the actual arrays and count their elements
        for name in ("attractiveness", "gender"):
            spec = build_preset(name)
            ckpt = init_params(spec, seed=0)
            enumerated = sum(p["w"].size + p["b"].size for p in ckpt.params)
            assert count_params(spec) == enumerated


class TestInferShapes:
    def test_min_conv_input(self):
        spec = ModelSpec((1, 3, 3), [Conv3x3(1), Flatten(), FullyConnected(2),
                                     SoftmaxNLL()])
        table = infer_shapes(spec)
        assert table[0] == ((1, 3, 3), (1, 1, 1))

    def test_underflow_names_layer(self):
        with pytest.raises(ShapeError, match="layer 1"):
            ModelSpec((1, 4, 4), [Conv3x3(1), Conv3x3(1), Flatten(),
                                  FullyConnected(2), SoftmaxNLL()])

    def test_softmax_must_be_last(self):
        with pytest.raises(ConfigError):
            ModelSpec((1, 4, 4), [SoftmaxNLL(), Flatten(), FullyConnected(2),
                                  SoftmaxNLL()])

    def test_small_attractiveness_is_valid(self):
        spec = build_preset("attractiveness", input_size=64)
        assert spatial_chain(spec) == [64, 62, 31, 29, 15, 13, 7, 5, 3, 1, 1]


class TestInit:
    def test_deterministic(self):
        spec = build_preset("attractiveness", input_size=64)
        a = init_params(spec, seed=7)
        b = init_params(spec, seed=7)
        for p, q in zip(a.params, b.params):
            np.testing.assert_array_equal(p["w"], q["w"])
            np.testing.assert_array_equal(p["b"], q["b"])

    def test_biases_zero(self):
        ckpt = init_params(build_preset("attractiveness", input_size=64), seed=0)
        assert all(not p["b"].any() for p in ckpt.params)

    def test_weight_distribution(self):
        ckpt = init_params(build_preset("gender"), seed=1)
        w = np.concatenate([p["w"].ravel() for p in ckpt.params])
        assert w.size >= 10**5
        assert abs(w.mean()) < 0.002
        assert w.min() > -0.06 and w.max() < 0.06


class TestFreezeAndRoundTrip:
    def test_freeze_mask_shape(self):
        spec = build_preset("gender")
        mask = freeze_all_but_last_k(spec, 2)
        assert len(mask) == len(param_shapes(spec))
        assert mask[-2:] == [True, True] and not any(mask[:-2])

    def test_freeze_k_out_of_range(self):
        with pytest.raises(ConfigError):
            freeze_all_but_last_k(build_preset("logreg_head", in_dim=4), 2)

    def test_spec_dict_round_trip(self):
        spec = build_preset("gender")
        back = ModelSpec.from_dict(spec.to_dict())
        assert back.to_dict() == spec.to_dict()

    def test_checkpoint_copy_is_deep(self):
        ckpt = init_params(build_preset("logreg_head", in_dim=4), seed=0)
        dup = ckpt.copy()
        dup.params[0]["w"][:] = 99
        assert not (ckpt.params[0]["w"] == 99).any()
