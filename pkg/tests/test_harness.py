import json
import logging
from typing import Sequence

import numpy as np
import pytest
from support import PresetClassifier

from sep_attack.attack import AttackConfig, ScoredCandidate
from sep_attack.dpp import SelectedWeights
from sep_attack.errors import DatasetFormatError, RemoteModelError
from sep_attack.harness import (
    AttackRecord,
    RunSummary,
    equal_weights_baseline,
    load_dataset,
    run_attack,
    summarize,
    write_report,
)
from sep_attack.models import TextClassifier
from sep_attack.text import TokenizedText


class TestLoadJsonl:
    def write(self, tmp_path, raw):
        path = tmp_path / "data.jsonl"
        path.write_text(raw, encoding="utf-8")
        return path

    def test_round_trip(self, tmp_path):
        rows = [
            {"id": "a", "text": "fine movie", "label": 1},
            {"id": "b", "text": "dull movie", "label": 0},
        ]
        path = self.write(tmp_path, "\n".join(json.dumps(r) for r in rows) + "\n")
        assert load_dataset(path) == [("a", "fine movie", 1), ("b", "dull movie", 0)]

    def test_blank_lines_skipped_and_ids_coerced(self, tmp_path):
        raw = '{"id": 7, "text": "x y", "label": 0}\n\n{"id": "8", "text": "z", "label": 2}\n'
        path = self.write(tmp_path, raw)
        assert load_dataset(path) == [("7", "x y", 0), ("8", "z", 2)]

    def test_invalid_json_reports_line(self, tmp_path):
        path = self.write(tmp_path, '{"id": "a", "text": "x", "label": 0}\n{broken\n')
        with pytest.raises(DatasetFormatError, match="line 2"):
            load_dataset(path)

    @pytest.mark.parametrize(
        "row",
        [
            '{"id": "a", "text": "x"}',
            '{"id": "a", "text": "x", "label": true}',
            '{"id": "a", "text": "x", "label": -1}',
            '{"id": "a", "text": "x", "label": "0"}',
            '{"id": "a", "text": "", "label": 0}',
            '{"id": "a", "text": "   ", "label": 0}',
        ],
    )
    def test_bad_rows_rejected(self, tmp_path, row):
        with pytest.raises(DatasetFormatError):
            load_dataset(self.write(tmp_path, row + "\n"))

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="no examples"):
            load_dataset(self.write(tmp_path, "\n\n"))


class TestLoadCsv:
    def write(self, tmp_path, raw):
        path = tmp_path / "data.csv"
        path.write_text(raw, encoding="utf-8")
        return path

    def test_header_skipped_and_ids_assigned(self, tmp_path):
        path = self.write(tmp_path, "text,label\nfine movie,1\ndull movie,0\n")
        assert load_dataset(path) == [("ex-0000", "fine movie", 1), ("ex-0001", "dull movie", 0)]

    def test_headerless_first_row_kept(self, tmp_path):
        path = self.write(tmp_path, "fine movie,1\ndull movie,0\n")
        assert len(load_dataset(path)) == 2

    def test_quoted_text_with_comma(self, tmp_path):
        path = self.write(tmp_path, '"weird, wonderful",1\n')
        assert load_dataset(path) == [("ex-0000", "weird, wonderful", 1)]

    @pytest.mark.parametrize(
        "raw", ["text,label\na,b,c\n", "text,label\nfine,x\n", "text,label\nfine,-2\n", "text,label\n,1\n"]
    )
    def test_bad_rows_rejected(self, tmp_path, raw):
        with pytest.raises(DatasetFormatError):
            load_dataset(self.write(tmp_path, raw))

    def test_error_reports_line(self, tmp_path):
        path = self.write(tmp_path, "text,label\nfine,1\nbad,x\n")
        with pytest.raises(DatasetFormatError, match="line 3"):
            load_dataset(path)


def make_record(**kwargs) -> AttackRecord:
    base = dict(example_id="e", text="t", label=0, victim_correct=True)
    base.update(kwargs)
    return AttackRecord(**base)


def final_candidate(distance: float) -> ScoredCandidate:
    return ScoredCandidate(
        text=TokenizedText(("x",)), weight_index=0, iteration=0,
        confidence=-0.1, distance=distance, tau=0.1,
    )


class TestSummarize:
    def test_denominator_excludes_wrong_and_errored(self):
        records = [
            make_record(success=True, final=final_candidate(0.10), queries_used=1),
            make_record(success=True, final=final_candidate(0.14), queries_used=3),
            make_record(success=False, queries_used=10),
            make_record(victim_correct=False),
            make_record(errored=True),
        ]
        s = summarize(records, AttackConfig())
        assert s.evaluated == 3
        assert s.successes == 2
        assert s.asr == pytest.approx(2 / 3)
        assert s.errored == 1
        assert s.mean_queries == pytest.approx((1 + 3 + 10) / 3)
        assert s.mean_perturbation == pytest.approx(0.12)

    def test_no_active_examples_warns_and_reports_zero(self, caplog):
        records = [make_record(victim_correct=False)]
        with caplog.at_level(logging.WARNING):
            s = summarize(records, AttackConfig())
        assert s.asr == 0.0
        assert s.evaluated == 0
        assert any("no victim-correct" in m for m in caplog.messages)

    def test_config_is_serialized(self):
        cfg = AttackConfig(K=7)
        s = summarize([make_record()], cfg)
        assert s.config == cfg.to_dict()


class TestRunAttack:
    def test_rejects_empty_dataset(self, small_world, toy_cfg):
        with pytest.raises(ValueError, match="empty"):
            run_attack([], small_world.ensemble, small_world.victim, small_world.lexicon, toy_cfg)

    def test_rejects_class_count_mismatch(self, small_world, toy_cfg):
        victim = PresetClassifier({}, 3)
        with pytest.raises(ValueError, match="classes"):
            run_attack(
                small_world.dataset, small_world.ensemble, victim, small_world.lexicon, toy_cfg
            )

    def test_rejects_misshaped_weights(self, small_world, toy_cfg):
        bad = SelectedWeights(np.full((2, 3), 0.5))
        with pytest.raises(ValueError, match="submodels"):
            run_attack(
                small_world.dataset,
                small_world.ensemble,
                small_world.victim,
                small_world.lexicon,
                toy_cfg,
                weights=bad,
            )

    def test_records_in_input_order_with_invariants(self, small_world, toy_cfg):
        records, summary = run_attack(
            small_world.dataset,
            small_world.ensemble,
            small_world.victim,
            small_world.lexicon,
            toy_cfg,
        )
        assert [r.example_id for r in records] == [ex[0] for ex in small_world.dataset]
        for r in records:
            assert r.queries_used <= toy_cfg.K
            assert len(r.selected) <= toy_cfg.K
            if r.success:
                assert r.final is not None
                assert r.final.distance <= toy_cfg.epsilon + 1e-12
            if not r.victim_correct:
                assert r.queries_used == 0 and not r.success
            if r.victim_correct and not r.errored:
                assert r.surrogate_evals > 0
                assert all(c.tau is not None for c in r.selected)
        assert isinstance(summary, RunSummary)
        active = [r for r in records if r.victim_correct and not r.errored]
        assert summary.evaluated == len(active)
        assert summary.successes == sum(r.success for r in active)

    def test_parallel_matches_serial(self, small_world, toy_cfg):
        args = (
            small_world.dataset,
            small_world.ensemble,
            small_world.victim,
            small_world.lexicon,
            toy_cfg,
        )
        serial, s1 = run_attack(*args)
        parallel, s2 = run_attack(*args, max_workers=3)
        assert s1 == s2
        for a, b in zip(serial, parallel):
            assert a.example_id == b.example_id
            assert a.success == b.success
            assert a.queries_used == b.queries_used
            assert (a.final.text.tokens if a.final else None) == (
                b.final.text.tokens if b.final else None
            )


class TestBaseline:
    def test_returns_single_candidate_summary(self, small_world, toy_cfg):
        summary = equal_weights_baseline(
            small_world.dataset,
            small_world.ensemble,
            small_world.victim,
            small_world.lexicon,
            toy_cfg,
        )
        assert isinstance(summary, RunSummary)
        assert summary.config["T"] == 1
        assert summary.config["num_weights"] == 1
        # one candidate generated, so every active example spends exactly one query
        assert summary.mean_queries == pytest.approx(1.0)
        assert summary.mean_surrogate_evals < 200


class FailingVictim(TextClassifier):
    """Knows the original texts; any perturbed submission breaks the transport."""

    kind = "remote"

    def __init__(self, rows: dict[str, Sequence[float]], num_classes: int):
        self.rows = {k: np.asarray(v, dtype=float) for k, v in rows.items()}
        self.num_classes = num_classes
        self.name = "failing-victim"

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        out = []
        for t in texts:
            if t not in self.rows:
                raise RemoteModelError("connection reset")
            out.append(self.rows[t])
        return np.stack(out)


class TestErroredExamples:
    def test_transport_failure_marks_errored_not_failed(self, small_world, toy_cfg):
        subset = small_world.dataset[:4]
        rows = {}
        for _, text, label in subset:
            row = [0.0, 0.0]
            row[label] = 1.0
            rows[text.lower()] = row
        victim = FailingVictim(rows, 2)
        records, summary = run_attack(
            subset, small_world.ensemble, victim, small_world.lexicon, toy_cfg
        )
        assert all(r.errored for r in records)
        assert all(r.victim_correct for r in records)
        assert not any(r.success for r in records)
        assert summary.errored == len(subset)
        assert summary.evaluated == 0
        assert summary.asr == 0.0


@pytest.fixture(scope="module")
def small_run(small_world, toy_cfg):
    return run_attack(
        small_world.dataset,
        small_world.ensemble,
        small_world.victim,
        small_world.lexicon,
        toy_cfg,
        dataset_name="toy-small",
    )


class TestWriteReport:
    def test_files_and_contents(self, small_run, tmp_path):
        records, summary = small_run
        records_path, summary_path = write_report(records, summary, tmp_path / "report")
        assert records_path.name == "records.jsonl"
        assert summary_path.name == "summary.json"

        rows = [json.loads(line) for line in records_path.read_text().splitlines()]
        assert len(rows) == len(records)
        payload = json.loads(summary_path.read_text())
        assert payload["dataset_name"] == "toy-small"
        assert payload["evaluated"] == summary.evaluated
        assert payload["asr"] == pytest.approx(summary.asr)
        assert payload["config"] == summary.config

        active = [r for r in rows if r["victim_correct"] and not r["errored"]]
        successes = sum(r["success"] for r in active)
        assert payload["successes"] == successes
        assert payload["asr"] == pytest.approx(successes / len(active))

    def test_no_timing_fields_leak(self, small_run, tmp_path):
        records, summary = small_run
        records_path, summary_path = write_report(records, summary, tmp_path)
        blob = records_path.read_text() + summary_path.read_text()
        assert "wall_time" not in blob

    def test_rerun_is_byte_identical(self, small_world, toy_cfg, small_run, tmp_path):
        first_records, first_summary = small_run
        p1 = write_report(first_records, first_summary, tmp_path / "a")
        records, summary = run_attack(
            small_world.dataset,
            small_world.ensemble,
            small_world.victim,
            small_world.lexicon,
            toy_cfg,
            dataset_name="toy-small",
        )
        p2 = write_report(records, summary, tmp_path / "b")
        for a, b in zip(p1, p2):
            assert a.read_bytes() == b.read_bytes()
