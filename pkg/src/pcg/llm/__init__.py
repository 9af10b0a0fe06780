"""LLM bridge: retrieval, prompting, endpoint client, and metrics."""

from .corpus import (
    CorpusError,
    DETAIL_LEVELS,
    InstructionGraphPair,
    dump_corpus,
    load_corpus,
    load_corpus_file,
    validate_pair,
)
from .bm25 import Bm25Index, EmptyCorpus, build_index, idf, retrieve, tokenize
from .prompts import (
    DEFAULT_GRAMMAR_PRIMER,
    GenerationPrompt,
    NO_GRAPH_CODE,
    build_edit_prompt,
    build_generation_prompt,
    extract_graph,
)
from .metrics import (
    EmptyReferenceSet,
    MetricsRecord,
    chamfer_distance,
    compile_rate,
    export_ulip_pairs,
    normalize_mesh,
    response_compiles,
    sample_surface,
    similarity_measure,
)
from .client import (
    AuthError,
    HttpError,
    LlmEndpointConfig,
    LlmError,
    LlmTimeout,
    ReplayMiss,
    ReplayStore,
    call_llm,
    prompt_key,
)

__all__ = [
    "AuthError", "Bm25Index", "CorpusError", "DEFAULT_GRAMMAR_PRIMER",
    "DETAIL_LEVELS", "EmptyCorpus", "EmptyReferenceSet", "GenerationPrompt",
    "HttpError", "InstructionGraphPair", "LlmEndpointConfig", "LlmError",
    "LlmTimeout", "MetricsRecord", "NO_GRAPH_CODE", "ReplayMiss",
    "ReplayStore", "build_edit_prompt", "build_generation_prompt",
    "build_index", "call_llm", "chamfer_distance", "compile_rate",
    "dump_corpus", "export_ulip_pairs", "extract_graph", "idf",
    "load_corpus", "load_corpus_file", "normalize_mesh", "prompt_key",
    "response_compiles", "retrieve", "sample_surface", "similarity_measure",
    "tokenize", "validate_pair",
]
