import pytest

from sep_attack.errors import LexiconFormatError
from sep_attack.lexicon import (
    SynonymEntry,
    SynonymLexicon,
    load_bundled_lexicon,
    load_lexicon,
    replaceable_positions,
    save_lexicon,
)
from sep_attack.text import TokenizedText, tokenize


def make_lexicon(*entries: SynonymEntry) -> SynonymLexicon:
    return SynonymLexicon({e.word: e for e in entries})


class TestSynonymEntry:
    def test_similarities_must_be_non_increasing(self):
        with pytest.raises(ValueError):
            SynonymEntry("fine", "adjective", (("nice", 0.5), ("grand", 0.9)))

    def test_similarity_range_enforced(self):
        with pytest.raises(ValueError):
            SynonymEntry("fine", "adjective", (("nice", 1.2),))

    def test_no_self_synonym(self):
        with pytest.raises(ValueError):
            SynonymEntry("fine", "adjective", (("fine", 0.9),))

    def test_unknown_pos_rejected(self):
        with pytest.raises(ValueError):
            SynonymEntry("fine", "interjection", ())

    def test_words_and_closest(self):
        e = SynonymEntry("fine", "adjective", (("grand", 0.9), ("nice", 0.5)))
        assert e.words == ("grand", "nice")
        assert e.closest() == "grand"


class TestLexiconLookup:
    def test_unknown_word_gets_empty_entry_with_pos_other(self):
        lex = make_lexicon()
        entry = lex.lookup("anything")
        assert entry.pos == "other"
        assert entry.synonyms == ()

    def test_contains_and_len(self):
        lex = make_lexicon(SynonymEntry("fine", "adjective", (("nice", 0.5),)))
        assert "fine" in lex
        assert "coarse" not in lex
        assert len(lex) == 1


class TestReplaceablePositions:
    def test_all_other_pos_gives_empty(self):
        lex = make_lexicon(SynonymEntry("fine", "other", (("nice", 0.5),)))
        assert replaceable_positions(tokenize("a fine day"), lex) == ()

    def test_single_qualifying_noun(self):
        lex = make_lexicon(SynonymEntry("day", "noun", tuple((f"s{i}", 0.9 - i / 10) for i in range(5))))
        assert replaceable_positions(tokenize("a fine day"), lex) == (2,)

    def test_noun_without_synonyms_excluded(self):
        lex = make_lexicon(
            SynonymEntry("cat", "noun", (("feline", 0.9),)),
            SynonymEntry("dog", "noun", ()),
            SynonymEntry("runs", "verb", (("jogs", 0.8),)),
        )
        t = tokenize("the cat runs past a dog")
        assert replaceable_positions(t, lex) == (1, 2)

    def test_filter_uses_origin_not_current_token(self):
        lex = make_lexicon(SynonymEntry("cat", "noun", (("feline", 0.9),)))
        t = tokenize("a cat").replace(1, "feline")
        # "feline" has no entry, but the origin word still qualifies
        assert replaceable_positions(t, lex) == (1,)

    def test_deterministic_and_in_range(self):
        lex = load_bundled_lexicon()
        t = tokenize("a wonderful and terrible day")
        first = replaceable_positions(t, lex)
        assert first == replaceable_positions(t, lex)
        assert all(0 <= i < len(t) for i in first)


class TestLexiconFiles:
    def test_round_trip(self, tmp_path):
        lex = make_lexicon(
            SynonymEntry("fine", "adjective", (("grand", 0.9), ("nice", 0.5))),
            SynonymEntry("day", "noun", ()),
        )
        path = tmp_path / "lex.tsv"
        save_lexicon(lex, path)
        loaded = load_lexicon(path)
        assert len(loaded) == 2
        assert loaded.lookup("fine").synonyms == (("grand", 0.9), ("nice", 0.5))
        assert loaded.lookup("day").pos == "noun"

    def test_bad_column_count_names_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("fine\tadjective\tnice:0.5\nbroken_line\n", encoding="utf-8")
        with pytest.raises(LexiconFormatError, match="line 2"):
            load_lexicon(path)

    def test_bad_similarity_names_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("fine\tadjective\tnice:high\n", encoding="utf-8")
        with pytest.raises(LexiconFormatError, match="line 1"):
            load_lexicon(path)

    def test_bundled_lexicon_is_valid_and_loaded_once(self):
        lex = load_bundled_lexicon()
        assert len(lex) > 30
        entry = lex.lookup("wonderful")
        assert entry.pos == "adjective"
        assert len(entry.synonyms) >= 3

    def test_bundled_matches_generator(self, tmp_path):
        from sep_attack.toy import build_lexicon

        regenerated = tmp_path / "regen.tsv"
        save_lexicon(build_lexicon(), regenerated)
        import importlib.resources as resources

        bundled = (
            resources.files("sep_attack").joinpath("data/toy_lexicon.tsv").read_text("utf-8")
        )
        assert regenerated.read_text("utf-8") == bundled
