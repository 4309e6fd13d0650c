import itertools
import tempfile
import unittest
from pathlib import Path

import pytest

from tempcr.services.candidates import (
    CANDIDATE_COLUMNS,
    Label,
    PairKind,
    build_rc_input,
    collate,
    dump_candidates,
    generate_candidates,
    recall_ceiling,
    token_distance,
)
from tempcr.services.corpus.models import Entity, EntityKind
from tempcr.services.corpus.vocab import A1_CLOSE, A1_OPEN, A2_CLOSE, A2_OPEN, INDICATOR_TAGS, Vocabulary
from tempcr.services.errors import CandidateError
from tempcr.tests.helpers import make_document


def _entity(start: int, end: int, kind: str = "EVENT") -> Entity:
    return Entity(id=f"x{start}", kind=EntityKind(kind), start=start, end=end)


class TokenDistanceTestCase(unittest.TestCase):
    def test_adjacent_spans(self) -> None:
        self.assertEqual(token_distance(_entity(2, 3), _entity(3, 4)), 0)

    def test_tokens_strictly_between(self) -> None:
        self.assertEqual(token_distance(_entity(0, 1), _entity(5, 6)), 4)
        self.assertEqual(token_distance(_entity(5, 6), _entity(0, 1)), 4)

    def test_overlap(self) -> None:
        self.assertEqual(token_distance(_entity(4, 6), _entity(5, 8)), 0)


class GenerateCandidatesTestCase(unittest.TestCase):
    def test_three_entity_document(self) -> None:
        surfaces = ["w"] * 40
        document = make_document(
            "d",
            surfaces,
            [("e1", "EVENT", 0, 1), ("e2", "EVENT", 5, 6), ("t1", "TIMEX3", 34, 36)],
            [("e1", "e2")],
        )

        pairs = generate_candidates(document)

        self.assertEqual(
            [(p.arg1, p.arg2, p.kind, p.label) for p in pairs],
            [
                ("e1", "e2", PairKind.EE, Label.CONTAINS),
                ("e2", "e1", PairKind.EE, Label.NONE),
                ("e2", "t1", PairKind.TE, Label.NONE),
                ("t1", "e2", PairKind.TE, Label.NONE),
            ],
        )

    def test_two_events_within_distance(self) -> None:
        document = make_document("d", ["a", "b", "c"], [("e1", "EVENT", 0, 1), ("e2", "EVENT", 2, 3)])

        self.assertEqual(len(generate_candidates(document)), 2)

    def test_distance_threshold(self) -> None:
        document = make_document("d", ["w"] * 33, [("e1", "EVENT", 0, 1), ("e2", "EVENT", 32, 33)])

        self.assertEqual(generate_candidates(document, max_dist=30), [])
        self.assertEqual(len(generate_candidates(document, max_dist=31)), 2)

    def test_event_and_adjacent_timex(self) -> None:
        document = make_document("d", ["a", "b"], [("e1", "EVENT", 0, 1), ("t1", "TIMEX3", 1, 2)])

        pairs = generate_candidates(document)
        self.assertEqual(len(pairs), 2)
        self.assertTrue(all(pair.kind is PairKind.TE for pair in pairs))

    def test_no_entities(self) -> None:
        self.assertEqual(generate_candidates(make_document("d", ["a"])), [])


@pytest.mark.parametrize("events, timexes", itertools.product(range(0, 5), range(0, 5)))
def test_dense_candidate_count_formula(events, timexes):
    entities = [(f"e{k}", "EVENT", k, k + 1) for k in range(events)]
    entities += [(f"t{k}", "TIMEX3", events + k, events + k + 1) for k in range(timexes)]
    document = make_document("d", ["w"] * (events + timexes), entities)

    pairs = generate_candidates(document)

    assert len(pairs) == events * (events - 1) + 2 * events * timexes
    assert all(token_distance(document.entity(p.arg1), document.entity(p.arg2)) <= 30 for p in pairs)


class BuildRcInputTestCase(unittest.TestCase):
    def setUp(self) -> None:
        surfaces = [f"w{k}" for k in range(9)]
        self.vocab = Vocabulary(surfaces, ["NN"])
        self.document = make_document(
            "d", surfaces, [("e1", "EVENT", 3, 4), ("e2", "EVENT", 5, 6)], [("e1", "e2")]
        )
        self.pairs = {(p.arg1, p.arg2): p for p in generate_candidates(self.document)}

    def _surfaces(self, item):
        return [self.vocab.token(index) for index in item.tokens]

    def test_window_covers_document_with_four_tags(self) -> None:
        item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab, context=10)

        self.assertEqual(len(item), 13)
        self.assertEqual(
            self._surfaces(item)[3:10],
            ["<a1>", "w3", "</a1>", "w4", "<a2>", "w5", "</a2>"],
        )
        self.assertEqual(len(item.pos), len(item.pf1))
        self.assertEqual(len(item.pf1), len(item.pf2))

    def test_arg1_follows_pair_order_not_text_order(self) -> None:
        item = build_rc_input(self.document, self.pairs[("e2", "e1")], self.vocab)

        self.assertEqual(self._surfaces(item)[3:6], ["<a2>", "w3", "</a2>"])
        self.assertEqual(self._surfaces(item)[7:10], ["<a1>", "w5", "</a1>"])

    def test_position_features_and_tag_pos(self) -> None:
        item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab)
        surfaces = self._surfaces(item)

        inside = surfaces.index("w3")
        self.assertEqual(item.pf1[inside], 0)
        self.assertEqual(item.pf2[inside], -2)
        self.assertEqual(item.pf1[surfaces.index("w0")], -3)
        for position, surface in enumerate(surfaces):
            if surface in INDICATOR_TAGS:
                self.assertEqual(item.pos[position], self.vocab.pos_tag_index)
        self.assertEqual(item.pf1[surfaces.index(A1_OPEN)], 0)
        self.assertEqual(item.pf2[surfaces.index(A2_CLOSE)], 0)

    def test_context_truncates_window(self) -> None:
        item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab, context=1)

        self.assertEqual(self._surfaces(item), ["w2", A1_OPEN, "w3", A1_CLOSE, "w4", A2_OPEN, "w5", A2_CLOSE, "w6"])

    def test_stripping_tags_recovers_contiguous_window(self) -> None:
        item = build_rc_input(self.document, self.pairs[("e2", "e1")], self.vocab, context=2)
        stripped = [s for s in self._surfaces(item) if s not in INDICATOR_TAGS]

        self.assertEqual(stripped, [f"w{k}" for k in range(1, 8)])

    def test_distances_are_clipped(self) -> None:
        surfaces = ["w"] * 60
        document = make_document("d", surfaces, [("e1", "EVENT", 55, 56), ("e2", "EVENT", 57, 58)])
        pair = generate_candidates(document)[0]

        item = build_rc_input(document, pair, Vocabulary(["w"]), context=60, d_clip=40)

        self.assertEqual(item.pf1[0], -40)
        self.assertTrue(all(-40 <= value <= 40 for value in item.pf1 + item.pf2))

    def test_pair_from_another_document_is_rejected(self) -> None:
        other = make_document("other", ["a"], [("e1", "EVENT", 0, 1)])
        with self.assertRaises(CandidateError):
            build_rc_input(other, self.pairs[("e1", "e2")], self.vocab)

    def test_collate_pads_and_shifts_position_features(self) -> None:
        long_item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab)
        short_item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab, context=0)

        batch = collate([long_item, short_item], [0, 1], d_clip=40, pad_index=self.vocab.pad_index)

        self.assertEqual(batch.tokens.shape, (2, 13))
        self.assertEqual(batch.lengths.tolist(), [13, 7])
        self.assertEqual(batch.tokens[1, 7:].tolist(), [self.vocab.pad_index] * 6)
        self.assertEqual(int(batch.pf1[0, 0]), long_item.pf1[0] + 40)
        self.assertEqual(batch.labels.tolist(), [0, 1])

    def test_collate_defaults_to_reserved_pad_entries(self) -> None:
        long_item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab)
        short_item = build_rc_input(self.document, self.pairs[("e1", "e2")], self.vocab, context=0)

        batch = collate([long_item, short_item])

        self.assertEqual(batch.tokens[1, 7:].tolist(), [self.vocab.pad_index] * 6)
        self.assertEqual(batch.pos[1, 7:].tolist(), [self.vocab.pos_pad_index] * 6)
        self.assertNotEqual(self.vocab.pad_index, self.vocab.unk_index)


def test_recall_ceiling_counts_generated_gold_pairs():
    near = make_document("a", ["w"] * 3, [("e1", "EVENT", 0, 1), ("e2", "EVENT", 2, 3)], [("e1", "e2")])
    far = make_document("b", ["w"] * 40, [("e1", "EVENT", 0, 1), ("e2", "EVENT", 39, 40)], [("e1", "e2")])
    candidates = generate_candidates(near) + generate_candidates(far)

    assert recall_ceiling([near, far], candidates) == 0.5


def test_recall_ceiling_on_default_synthetic_spec():
    from tempcr.services.corpus.synthetic import generate_synthetic, load_synth_spec

    generated = generate_synthetic(load_synth_spec(), seed=1)
    documents = generated.split("train").documents
    candidates = [pair for document in documents for pair in generate_candidates(document)]

    assert recall_ceiling(documents, candidates) >= 0.87


def test_dump_candidates_writes_header_and_rows():
    document = make_document("d", ["a", "b"], [("e1", "EVENT", 0, 1), ("e2", "EVENT", 1, 2)], [("e1", "e2")])
    with tempfile.TemporaryDirectory() as tmp:
        path = dump_candidates(generate_candidates(document), Path(tmp) / "c.csv")
        lines = path.read_text(encoding="utf-8").splitlines()

    assert lines[0] == ",".join(CANDIDATE_COLUMNS)
    assert lines[1] == "d,e1,e2,EE,0,CONTAINS"
    assert len(lines) == 3
