"""Finite-group actions, equivariant-map monoids, relative rank, factorization.

The heavy lifting lives in the C++ extension ``equimaps._core``; this wrapper
adds dict-based conveniences over the JSON document formats used by the CLI.
"""

import json as _json

from ._core import (
    EquivariantMap,
    FiniteGroup,
    GSet,
    all_subgroups,
    build_gset,
    check_equivariance,
    collapse_type_count,
    compose,
    conj_classes_of_subgroups,
    count_end,
    enumerate_aut,
    enumerate_end,
    generator_names,
    kappa_classes,
    monoid_closure_size,
    n_conj_class,
    normalizer,
    relative_rank_bruteforce,
    relative_rank_formula,
    stab_classes,
    u_sizes,
)
from . import _core as _c

__all__ = [
    "EquivariantMap",
    "FiniteGroup",
    "GSet",
    "all_subgroups",
    "analyze",
    "build_gset",
    "check_equivariance",
    "collapse_type_count",
    "compose",
    "conj_classes_of_subgroups",
    "count_end",
    "enumerate_aut",
    "enumerate_end",
    "factorize",
    "generator_names",
    "gset_from_doc",
    "kappa_classes",
    "map_from_doc",
    "map_to_doc",
    "metrics",
    "monoid_closure_size",
    "n_conj_class",
    "normalizer",
    "relative_rank_bruteforce",
    "relative_rank_formula",
    "stab_classes",
    "u_sizes",
    "verify",
    "window_table",
]


def gset_from_doc(doc):
    """Builds a GSet from the CLI's g-set document (a dict)."""
    group = doc["group"]
    if "cayley" in group:
        g = FiniteGroup.from_cayley(group["cayley"])
    else:
        g = FiniteGroup.from_permutation_generators(group["degree"], group["generators"])
    orbits = []
    for entry in doc["orbits"]:
        count = entry["count"]
        orbits.append((entry["stabilizer"], None if count == "inf" else count))
    return build_gset(g, orbits)


def map_from_doc(gset, doc):
    return _c.map_from_json(gset, _json.dumps(doc))


def map_to_doc(f):
    return _json.loads(f.to_json())


def metrics(f):
    return _json.loads(_c.metrics_json(f))


def analyze(gset):
    return _json.loads(_c.analyze_json(gset))


def factorize(gset, map_doc):
    return _json.loads(_c.factorize_json(gset, _json.dumps(map_doc)))


def verify(gset, map_doc, word_doc):
    return _c.verify_json(gset, _json.dumps(map_doc), _json.dumps(word_doc))


def window_table(gset, map_doc, n):
    """Images of the infinite-stratum representatives x_0..x_{n-1}."""
    return _c.window_table(gset, _json.dumps(map_doc), n)
