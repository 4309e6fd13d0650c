"""Model checkpoint directories."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np

from ..corpus.vocab import Vocabulary, load_vocab, save_vocab
from ..errors import CheckpointError
from ..neural.params import ParameterStore
from .pretrained import export_embeddings

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
EMBEDDINGS_NAME = "embeddings.txt"
VOCAB_NAME = "vocab.txt"
PARAMS_DIR = "params"


def save_checkpoint(
    directory: Union[str, Path],
    store: ParameterStore,
    vocab: Vocabulary,
    manifest: Mapping[str, Any],
) -> Path:
    """Write embeddings, one ``.npy`` per parameter, the vocabulary and a manifest."""
    target = Path(directory)
    (target / PARAMS_DIR).mkdir(parents=True, exist_ok=True)
    export_embeddings(store, vocab, target / EMBEDDINGS_NAME)
    save_vocab(vocab, target / VOCAB_NAME)

    parameters: Dict[str, Dict[str, Any]] = {}
    for parameter in store:
        np.save(target / PARAMS_DIR / f"{parameter.name}.npy", parameter.value, allow_pickle=False)
        parameters[parameter.name] = {
            "shape": list(parameter.shape),
            "trainable": parameter.trainable,
        }
    payload = dict(manifest)
    payload.update(
        {
            "dtype": store.dtype.name,
            "vocab_sha256": vocab.fingerprint(),
            "parameters": parameters,
        }
    )
    (target / MANIFEST_NAME).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    logger.info("Checkpoint written to %s (%d parameters)", target, len(parameters))
    return target


def load_checkpoint(
    directory: Union[str, Path],
) -> Tuple[ParameterStore, Vocabulary, Dict[str, Any]]:
    source = Path(directory)
    manifest_path = source / MANIFEST_NAME
    if not manifest_path.exists():
        raise CheckpointError(f"no checkpoint manifest at '{manifest_path}'")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"unreadable checkpoint manifest '{manifest_path}'") from exc

    vocab = load_vocab(source / VOCAB_NAME)
    if vocab.fingerprint() != manifest.get("vocab_sha256"):
        raise CheckpointError(f"vocabulary in '{source}' does not match the manifest hash")

    store = ParameterStore(manifest.get("dtype", "float64"))
    for name, meta in manifest.get("parameters", {}).items():
        path = source / PARAMS_DIR / f"{name}.npy"
        if not path.exists():
            raise CheckpointError(f"checkpoint parameter '{name}' missing at '{path}'")
        value = np.load(path, allow_pickle=False)
        if list(value.shape) != list(meta.get("shape", value.shape)):
            raise CheckpointError(f"checkpoint parameter '{name}' has an unexpected shape")
        store.register(name, value, trainable=bool(meta.get("trainable", True)))
    return store, vocab, manifest


__all__ = ["EMBEDDINGS_NAME", "MANIFEST_NAME", "load_checkpoint", "save_checkpoint"]
