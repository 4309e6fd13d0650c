"""Containment scoring under temporal closure, with subset and significance helpers."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import stats

from .candidates import CONTAINS_CLASS, NONE_CLASS, CandidatePair, PairKind
from .corpus.models import Corpus, Document, EntityKind
from .errors import EvaluationError

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]

SUBSET_FILTERS: Tuple[str, ...] = ("EE", "TE", "f0_100", "f100_500", "f500p")
FREQUENCY_BUCKETS: Mapping[str, Tuple[float, float]] = {
    "f0_100": (0.0, 100.0),
    "f100_500": (100.0, 500.0),
    "f500p": (500.0, float("inf")),
}


@dataclass(frozen=True)
class RelationSet:
    """Per-document sets of directed CONTAINS edges."""

    edges: Mapping[str, FrozenSet[Edge]]

    def __post_init__(self) -> None:
        for document_id, edges in self.edges.items():
            for source, target in edges:
                if source == target:
                    raise EvaluationError(f"self-loop ({source}, {target}) in document '{document_id}'")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[Edge]]) -> "RelationSet":
        return cls({doc_id: frozenset(tuple(edge) for edge in edges) for doc_id, edges in mapping.items()})

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "RelationSet":
        return cls({document.id: document.gold_edges() for document in corpus.documents})

    def documents(self) -> List[str]:
        return sorted(self.edges)

    def get(self, document_id: str) -> FrozenSet[Edge]:
        return self.edges.get(document_id, frozenset())

    def __len__(self) -> int:
        return sum(len(edges) for edges in self.edges.values())


def closure_edges(edges: Iterable[Edge], document_id: str = "") -> FrozenSet[Edge]:
    """Transitive closure of one document's edges, self-loops excluded."""
    graph = nx.DiGraph()
    graph.add_edges_from(edges)
    if graph.number_of_edges() == 0:
        return frozenset()
    if not nx.is_directed_acyclic_graph(graph):
        logger.warning("containment cycle in document '%s'; self-loops dropped from the closure", document_id)
    closed = nx.transitive_closure(graph, reflexive=None)
    return frozenset((source, target) for source, target in closed.edges() if source != target)


def transitive_closure(relations: RelationSet) -> RelationSet:
    return RelationSet(
        {doc_id: closure_edges(edges, doc_id) for doc_id, edges in relations.edges.items()}
    )


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f_measure: float
    precision_hits: int
    predicted: int
    recall_hits: int
    gold: int
    precision_undefined: bool = False
    recall_undefined: bool = False

    @classmethod
    def from_counts(cls, precision_hits: int, predicted: int, recall_hits: int, gold: int) -> "Metrics":
        precision = precision_hits / predicted if predicted else 0.0
        recall = recall_hits / gold if gold else 0.0
        denominator = precision + recall
        f_measure = 2.0 * precision * recall / denominator if denominator > 0 else 0.0
        return cls(
            precision=precision,
            recall=recall,
            f_measure=f_measure,
            precision_hits=precision_hits,
            predicted=predicted,
            recall_hits=recall_hits,
            gold=gold,
            precision_undefined=predicted == 0,
            recall_undefined=gold == 0,
        )

    def as_report(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"P": self.precision, "R": self.recall, "F": self.f_measure}
        payload.update(
            {
                key: value
                for key, value in asdict(self).items()
                if key not in {"precision", "recall", "f_measure"}
            }
        )
        return payload


def _check_documents(gold: RelationSet, pred: RelationSet) -> List[str]:
    if set(gold.edges) != set(pred.edges):
        missing = sorted(set(gold.edges) ^ set(pred.edges))
        raise EvaluationError(f"gold and predicted relations cover different documents: {missing[:5]}")
    return gold.documents()


EdgeFilter = Callable[[str, Edge], bool]


def _count(
    gold: RelationSet,
    pred: RelationSet,
    keep: Optional[EdgeFilter] = None,
) -> Tuple[int, int, int, int]:
    precision_hits = predicted = recall_hits = gold_count = 0
    for doc_id in _check_documents(gold, pred):
        gold_edges = gold.get(doc_id)
        pred_edges = pred.get(doc_id)
        gold_closure = closure_edges(gold_edges, doc_id)
        pred_closure = closure_edges(pred_edges, doc_id)
        if keep is not None:
            gold_edges = frozenset(edge for edge in gold_edges if keep(doc_id, edge))
            pred_edges = frozenset(edge for edge in pred_edges if keep(doc_id, edge))
        precision_hits += len(pred_edges & gold_closure)
        predicted += len(pred_edges)
        recall_hits += len(gold_edges & pred_closure)
        gold_count += len(gold_edges)
    return precision_hits, predicted, recall_hits, gold_count


def closure_prf(gold: RelationSet, pred: RelationSet) -> Metrics:
    """Micro-averaged precision against closure(gold) and recall against closure(pred)."""
    return Metrics.from_counts(*_count(gold, pred))


class PairIndex:
    """Entity kinds and training frequencies needed to assign edges to subsets."""

    def __init__(self, corpus: Corpus, frequencies: Mapping[str, int]) -> None:
        self._documents: Dict[str, Document] = corpus.by_id()
        self._frequencies = frequencies

    def kind(self, doc_id: str, edge: Edge) -> Optional[PairKind]:
        document = self._documents[doc_id]
        timexes = sum(document.entity(entity_id).kind is EntityKind.TIMEX3 for entity_id in edge)
        if timexes == 0:
            return PairKind.EE
        if timexes == 1:
            return PairKind.TE
        return None

    def average_frequency(self, doc_id: str, edge: Edge) -> float:
        """Mean training frequency over every token of both argument spans."""
        document = self._documents[doc_id]
        counts = [
            self._frequencies.get(surface, 0)
            for entity_id in edge
            for surface in document.span_surfaces(document.entity(entity_id))
        ]
        return float(np.mean(counts)) if counts else 0.0

    def edge_filter(self, name: str) -> EdgeFilter:
        if name in ("EE", "TE"):
            wanted = PairKind(name)
            return lambda doc_id, edge: self.kind(doc_id, edge) is wanted
        if name in FREQUENCY_BUCKETS:
            low, high = FREQUENCY_BUCKETS[name]
            return lambda doc_id, edge: low <= self.average_frequency(doc_id, edge) < high
        raise EvaluationError(f"Unknown subset filter '{name}'; expected one of {', '.join(SUBSET_FILTERS)}")


def subset_metrics(gold: RelationSet, pred: RelationSet, index: PairIndex, filter_name: str) -> Metrics:
    """Metrics restricted to one subset; closures are taken over the unrestricted sets."""
    keep = index.edge_filter(filter_name)
    return Metrics.from_counts(*_count(gold, pred, keep))


def decide_from_probabilities(
    candidates: Sequence[CandidatePair],
    probs: np.ndarray,
    document_ids: Iterable[str] = (),
) -> RelationSet:
    """A candidate becomes an edge iff p(CONTAINS) > p(NONE)."""
    if probs.shape[0] != len(candidates):
        raise EvaluationError(f"{probs.shape[0]} probability rows for {len(candidates)} candidates")
    edges: Dict[str, set[Edge]] = {doc_id: set() for doc_id in document_ids}
    for pair in candidates:
        edges.setdefault(pair.doc_id, set())
    for pair, row in zip(candidates, probs):
        if row[CONTAINS_CLASS] > row[NONE_CLASS]:
            edges[pair.doc_id].add(pair.edge)
    return RelationSet({doc_id: frozenset(found) for doc_id, found in edges.items()})


def decide_labels(
    model: Any,
    candidates: Sequence[CandidatePair],
    inputs: Sequence[Any],
    document_ids: Iterable[str] = (),
) -> RelationSet:
    """Predicted relations from any model exposing ``predict_proba(inputs)``."""
    probs = np.asarray(model.predict_proba(inputs)) if candidates else np.zeros((0, 2))
    return decide_from_probabilities(candidates, probs, document_ids)


def metrics_report(gold: RelationSet, pred: RelationSet, index: Optional[PairIndex] = None) -> Dict[str, Any]:
    """``{"overall": ..., "subsets": {EE, TE, f0_100, f100_500, f500p}}`` with raw counts."""
    report: Dict[str, Any] = {"overall": closure_prf(gold, pred).as_report()}
    if index is not None:
        report["subsets"] = {
            name: subset_metrics(gold, pred, index, name).as_report() for name in SUBSET_FILTERS
        }
    return report


def aggregate_runs(runs: Sequence[Metrics | Mapping[str, Any]]) -> Dict[str, float]:
    """Mean P/R/F over repeated runs plus the population standard deviation of F."""
    if not runs:
        raise EvaluationError("no runs to aggregate")
    rows = []
    for run in runs:
        if isinstance(run, Metrics):
            rows.append((run.precision, run.recall, run.f_measure))
        else:
            overall = run.get("overall", run)
            rows.append((float(overall["P"]), float(overall["R"]), float(overall["F"])))
    table = np.asarray(rows, dtype=np.float64)
    return {
        "P": float(table[:, 0].mean()),
        "R": float(table[:, 1].mean()),
        "F": float(table[:, 2].mean()),
        "F_std": float(table[:, 2].std()),
        "runs": len(rows),
    }


def per_document_f(gold: RelationSet, pred: RelationSet) -> Dict[str, float]:
    scores: Dict[str, float] = {}
    for doc_id in _check_documents(gold, pred):
        single_gold = RelationSet({doc_id: gold.get(doc_id)})
        single_pred = RelationSet({doc_id: pred.get(doc_id)})
        scores[doc_id] = closure_prf(single_gold, single_pred).f_measure
    return scores


def paired_document_ttest(
    gold: RelationSet, pred_a: RelationSet, pred_b: RelationSet
) -> Tuple[float, float]:
    """Paired t-test over per-document closure F of two systems."""
    scores_a = per_document_f(gold, pred_a)
    scores_b = per_document_f(gold, pred_b)
    documents = sorted(scores_a)
    if len(documents) < 2:
        raise EvaluationError("a paired t-test needs at least two documents")
    result = stats.ttest_rel(
        [scores_a[doc_id] for doc_id in documents],
        [scores_b[doc_id] for doc_id in documents],
    )
    return float(result.statistic), float(result.pvalue)


__all__ = [
    "FREQUENCY_BUCKETS",
    "Metrics",
    "PairIndex",
    "RelationSet",
    "SUBSET_FILTERS",
    "aggregate_runs",
    "closure_edges",
    "closure_prf",
    "decide_from_probabilities",
    "decide_labels",
    "metrics_report",
    "paired_document_ttest",
    "per_document_f",
    "subset_metrics",
    "transitive_closure",
]
