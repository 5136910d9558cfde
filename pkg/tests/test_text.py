import numpy as np
import pytest

from sep_attack.errors import EmptyTextError, LengthMismatchError
from sep_attack.text import (
    TokenizedText,
    detokenize,
    is_punctuation,
    perturbation_distance,
    tokenize,
)


class TestTokenize:
    def test_contraction_and_comma(self):
        t = tokenize("It's weird, wonderful")
        assert t.tokens == ("it's", "weird", ",", "wonderful")
        assert t.origin == t.tokens

    def test_whitespace_split_length(self):
        assert len(tokenize("a b")) == 2

    def test_review_sentence_isolates_target_word(self):
        t = tokenize("it's weird, wonderful, and not necessarily for kids.")
        assert "wonderful" in t.tokens
        assert t.tokens.count("wonderful") == 1

    def test_lowercases(self):
        assert tokenize("Great MOVIE").tokens == ("great", "movie")

    def test_leading_and_trailing_punctuation_split_off(self):
        assert tokenize('"quoted!"').tokens == ('"', "quoted", "!", '"')

    def test_empty_input_rejected(self):
        with pytest.raises(EmptyTextError):
            tokenize("   ")
        with pytest.raises(EmptyTextError):
            tokenize("")

    def test_pure_punctuation_kept_as_tokens(self):
        assert tokenize("well ...").tokens == ("well", ".", ".", ".")


class TestTokenizedText:
    def test_origin_defaults_to_tokens(self):
        t = TokenizedText(("a", "b"))
        assert t.origin == ("a", "b")

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            TokenizedText(("a", "b"), ("a",))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            TokenizedText(())

    def test_replace_tracks_perturbed_positions(self):
        t = tokenize("a fine day").replace(1, "grand")
        assert t.tokens == ("a", "grand", "day")
        assert t.origin == ("a", "fine", "day")
        assert t.perturbed_positions() == (1,)

    def test_replace_with_origin_word_clears_perturbation(self):
        t = tokenize("a fine day").replace(1, "grand").replace(1, "fine")
        assert t.perturbed_positions() == ()

    def test_restore_single_position(self):
        t = tokenize("a fine day").replace(0, "the").replace(1, "grand")
        back = t.restore(1)
        assert back.tokens == ("the", "fine", "day")
        assert back.perturbed_positions() == (0,)

    def test_restore_all_round_trip(self):
        t = tokenize("one two three four")
        mutated = t.replace(0, "x").replace(2, "y").replace(3, "z")
        assert perturbation_distance(mutated.restore_all(), t) == 0.0


class TestDetokenize:
    def test_joins_with_spaces(self):
        assert detokenize(("a", "fine", "day")) == "a fine day"

    def test_punctuation_attaches_left(self):
        assert detokenize(("weird", ",", "wonderful", ".")) == "weird, wonderful."

    def test_round_trips_through_tokenize(self):
        raw = "it's weird, wonderful, and not necessarily for kids."
        assert detokenize(tokenize(raw).tokens) == raw


class TestPerturbationDistance:
    def test_identical_is_zero(self):
        t = tokenize("a b c")
        assert perturbation_distance(t, t) == 0.0

    def test_all_changed_is_one(self):
        a = tokenize("a b c")
        b = tokenize("x y z")
        assert perturbation_distance(a, b) == 1.0

    def test_three_of_twenty_hits_budget_exactly(self):
        words = [f"w{i}" for i in range(20)]
        a = tokenize(" ".join(words))
        changed = list(words)
        changed[3], changed[8], changed[15] = "x", "y", "z"
        b = tokenize(" ".join(changed))
        assert perturbation_distance(a, b) == pytest.approx(0.15)

    def test_length_mismatch_rejected(self):
        with pytest.raises(LengthMismatchError):
            perturbation_distance(tokenize("a b"), tokenize("a b c"))

    def test_symmetry_and_rational_values(self):
        rng = np.random.default_rng(7)
        vocab = ["alpha", "beta", "gamma", "delta"]
        for _ in range(50):
            L = int(rng.integers(1, 15))
            a = tokenize(" ".join(rng.choice(vocab, size=L)))
            b = tokenize(" ".join(rng.choice(vocab, size=L)))
            d_ab = perturbation_distance(a, b)
            assert d_ab == perturbation_distance(b, a)
            assert (d_ab * L) == pytest.approx(round(d_ab * L))
            assert 0.0 <= d_ab <= 1.0


def test_is_punctuation():
    assert is_punctuation(",")
    assert is_punctuation("...")
    assert not is_punctuation("a")
    assert not is_punctuation("it's")
