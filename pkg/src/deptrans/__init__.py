"""Syntactic transformations of Universal Dependencies trees.

The pipeline is unfold -> annotate -> evaluate; :func:`apply_transformation`
runs all three through the (optionally compiled) kernel.
"""
from .conllu import (ConllUError, DepTree, InvalidTreeError, Token, is_projective,
                     parse_conllu, read_conllu, serialize_conllu, validate_tree)
from .datagen import (DatasetInstance, GenConfig, generate_dataset, generate_depparse,
                      generate_simple, linearize_dep_tree, sample_transformation)
from .kernel import BACKEND
from .operations import (EdgewiseTransform, Operation, annotate,
                         apply_transformation, evaluate, parse_prefix,
                         serialize_prefix)
from .stats import (projectivity_rate, recursion_depth_histogram,
                    relation_frequencies)
from .unfold import Leaf, Node, leaf_sequence, to_sexpr, unfold

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConllUError", "DatasetInstance", "DepTree", "EdgewiseTransform",
    "GenConfig", "InvalidTreeError", "Leaf", "Node", "Operation", "Token",
    "annotate", "apply_transformation", "evaluate", "generate_dataset",
    "generate_depparse", "generate_simple", "is_projective", "leaf_sequence",
    "linearize_dep_tree", "parse_conllu", "parse_prefix", "projectivity_rate",
    "read_conllu", "recursion_depth_histogram", "relation_frequencies",
    "sample_transformation", "serialize_conllu", "serialize_prefix", "to_sexpr",
    "unfold", "validate_tree",
]
