"""Corpus model, IO, preprocessing, vocabularies and skip-gram data."""

from .io import load_corpus, load_raw_texts, save_corpus, save_raw_texts
from .models import Corpus, Document, Entity, EntityKind, Relation, RelationLabel, Split, Token
from .preprocess import PreprocessConfig, normalize_corpus, preprocess, tokenize_texts
from .sgdata import SgDataset, SgMode, build_sg_dataset
from .synthetic import SynthSpec, SyntheticCorpus, generate_synthetic, load_synth_spec
from .tagger import fallback_pos_tag
from .vocab import Vocabulary, build_vocab, encode_token, load_vocab, save_vocab

__all__ = [
    "Corpus",
    "Document",
    "Entity",
    "EntityKind",
    "PreprocessConfig",
    "Relation",
    "RelationLabel",
    "SgDataset",
    "SgMode",
    "Split",
    "SynthSpec",
    "SyntheticCorpus",
    "Token",
    "Vocabulary",
    "build_sg_dataset",
    "build_vocab",
    "encode_token",
    "fallback_pos_tag",
    "generate_synthetic",
    "load_corpus",
    "load_raw_texts",
    "load_synth_spec",
    "load_vocab",
    "normalize_corpus",
    "preprocess",
    "save_corpus",
    "save_raw_texts",
    "tokenize_texts",
]
