"""Procedural compact graph toolkit.

Subpackages:
  lang      - textual graph language (parse / validate / print / tokens)
  kernel    - graph evaluator producing triangle meshes, with caching
  extract   - part-hierarchy to graph extraction (PCA box fitting)
  transpile - emitters to external formats and compactness reports
  llm       - retrieval, prompting, endpoint client, evaluation metrics
  service   - live editing sessions over HTTP/WebSocket
"""

__version__ = "0.1.0"
