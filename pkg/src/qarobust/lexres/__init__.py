from .glove import EmbeddingIndex, NeighborConstraint, is_number_literal, load_glove, nearest, top_neighbors
from .wordnet import AntonymLexicon, WordPos, load_wordnet

__all__ = [
    "AntonymLexicon",
    "EmbeddingIndex",
    "NeighborConstraint",
    "WordPos",
    "is_number_literal",
    "load_glove",
    "load_wordnet",
    "nearest",
    "top_neighbors",
]
