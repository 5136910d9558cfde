import json
import pathlib

import numpy as np
import pytest

from model_server import ModelLoadError, load_served_model
from model_server.models import _words

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


class TestLoading:
    def test_linear_header(self, linear_model):
        assert linear_model.name == "tiny-linear"
        assert linear_model.kind == "builtin-linear"
        assert linear_model.num_classes == 2
        assert len(linear_model.vocab) == 15
        assert linear_model.coef.shape == (15, 2)
        assert linear_model.intercept.shape == (2,)

    def test_nb_header(self, nb_model):
        assert nb_model.name == "tiny-nb"
        assert nb_model.kind == "builtin-nb"
        assert nb_model.num_classes == 2
        assert nb_model.coef.shape == (len(nb_model.vocab), 2)

    def test_limits_are_recorded(self):
        model = load_served_model(
            FIXTURES / "tiny_linear.json", max_batch=3, device="cpu"
        )
        assert model.max_batch == 3
        assert model.device == "cpu"

    def test_vocab_maps_word_to_column(self, linear_model):
        indices = sorted(linear_model.vocab.values())
        assert indices == list(range(15))


class TestInference:
    def test_shapes_and_normalization(self, linear_model, nb_model):
        texts = ["good plot", "awful scene", "the the the"]
        for model in (linear_model, nb_model):
            probs = model.predict_proba(texts)
            assert probs.shape == (3, 2)
            assert np.all(probs >= 0.0)
            assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)

    def test_polarity_words_move_probability(self, linear_model):
        probs = linear_model.predict_proba(["good great bright", "bad awful bleak"])
        assert probs[0, 1] > 0.9
        assert probs[1, 0] > 0.9

    def test_unknown_words_score_as_empty(self, linear_model):
        probs = linear_model.predict_proba(["zzz qqq unseen", ""])
        assert np.array_equal(probs[0], probs[1])

    def test_repeated_words_accumulate(self, linear_model):
        once, twice = linear_model.predict_proba(["good", "good good"])
        assert twice[1] > once[1]

    def test_tokens_lowercased_and_stripped(self, linear_model):
        plain, shouted = linear_model.predict_proba(["good plot", '"GOOD" (plot!)'])
        assert np.array_equal(plain, shouted)

    def test_words_helper(self):
        assert _words('The "Plot"! -- was fine...') == ["the", "plot", "was", "fine"]
        assert _words("...") == []


class TestLoadErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelLoadError, match="cannot read"):
            load_served_model(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ModelLoadError, match="not valid JSON"):
            load_served_model(path)

    def test_non_object_payload(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ModelLoadError, match="JSON object"):
            load_served_model(path)

    def test_unknown_kind(self, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text(json.dumps({"kind": "transformer"}))
        with pytest.raises(ModelLoadError, match="unsupported model kind"):
            load_served_model(path)

    def test_missing_field(self, tmp_path):
        payload = json.loads((FIXTURES / "tiny_linear.json").read_text())
        del payload["bias"]
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelLoadError, match="missing field 'bias'"):
            load_served_model(path)

    def test_matrix_shape_mismatch(self, tmp_path):
        payload = json.loads((FIXTURES / "tiny_linear.json").read_text())
        payload["weights"] = payload["weights"][:-1]
        path = tmp_path / "short.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelLoadError, match="parameter matrix shape"):
            load_served_model(path)

    def test_offset_shape_mismatch(self, tmp_path):
        payload = json.loads((FIXTURES / "tiny_linear.json").read_text())
        payload["bias"] = payload["bias"] + [0.0]
        path = tmp_path / "wide.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelLoadError, match="offset shape"):
            load_served_model(path)
