"""One service layer behind both front ends.

Every function takes and returns JSON-compatible values; the HTTP handlers
and the CLI subcommands are thin shells around these, so the two transports
cannot drift apart. Raised CyclabError subclasses carry machine-readable
codes for the 400 mapping."""

import logging

from . import cluster, coxeter, loopgroup, preproj, word2quiver
from .foundation import LaurentPoly, canonical_json
from .quiver import MultiQuiver, fz_mutate, to_exchange_matrix

log = logging.getLogger("cyclab.service")


def named_graph(name):
    try:
        return coxeter.NAMED_GRAPHS[name]()
    except KeyError:
        raise ValueError(
            f"unknown graph {name!r}; known: {sorted(coxeter.NAMED_GRAPHS)}"
        ) from None


def parse_word(word):
    """Accept "0,1,0,1", [0,1,0,1], or (0,1,0,1)."""
    if isinstance(word, str):
        parts = [p for p in word.replace(" ", "").split(",") if p]
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise ValueError(f"word {word!r} is not a comma list of integers") from None
    return tuple(int(x) for x in word)


def _vertex(quiver, v):
    if v in quiver.vertices:
        return v
    by_label = {str(x): x for x in quiver.vertices}
    if str(v) in by_label:
        return by_label[str(v)]
    raise ValueError(f"{v!r} is not a vertex of the quiver")


# -- coxeter


def coxeter_reduce(graph_name, word):
    g = named_graph(graph_name)
    w = parse_word(word)
    return {
        "word": list(w),
        "reduced": coxeter.is_reduced(g, w),
        "length": coxeter.element_length(g, w),
    }


def coxeter_words(graph_name, length, cap=100000):
    g = named_graph(graph_name)
    return {
        "length": length,
        "words": [list(w) for w in coxeter.words_of_length(g, length, cap=cap)],
    }


def coxeter_rewrites(graph_name, word, cap=100000):
    g = named_graph(graph_name)
    w = parse_word(word)
    return {
        "word": list(w),
        "words": sorted(list(u) for u in coxeter.reduced_words(g, w, cap=cap)),
    }


def coxeter_longest(graph_name):
    g = named_graph(graph_name)
    w = coxeter.longest_element(g)
    return {"word": list(w), "length": len(w)}


# -- quivers


def quiver_from_word(graph_name, word, freeze_last=True, underline=False):
    g = named_graph(graph_name)
    w = parse_word(word)
    if underline:
        q = word2quiver.build_q_underline(g, w)
    else:
        q = word2quiver.build_q(g, w, freeze_last=freeze_last)
    return q.to_json()


def quiver_mutate(quiver_json, vertex):
    q = MultiQuiver.from_json(quiver_json)
    k = _vertex(q, vertex)
    return fz_mutate(q, k).to_json()


def quiver_matrix(quiver_json):
    q = MultiQuiver.from_json(quiver_json)
    b = to_exchange_matrix(q)
    return {"rows": [list(r) for r in b.rows], "exchangeable": b.n}


# -- seeds


def seed_initial(quiver_json, inverted=()):
    q = MultiQuiver.from_json(quiver_json)
    seed = cluster.initial_seed(q)
    if inverted:
        seed = cluster.Seed(
            q, seed.assignment, [_vertex(q, v) for v in inverted]
        )
    return seed.to_json()


def _poly_text(p):
    return repr(p)


def seed_mutate(seed_json, vertex):
    seed = cluster.Seed.from_json(seed_json)
    k = _vertex(seed.quiver, vertex)
    out = cluster.seed_mutate(seed, k)
    one = LaurentPoly.const(1)
    p_in = one
    p_out = one
    for (s, t), m in sorted(seed.quiver.arrows.items(), key=lambda kv: str(kv[0])):
        if t == k:
            p_in = p_in * seed.assignment[s] ** m
        elif s == k:
            p_out = p_out * seed.assignment[t] ** m
    relation = {
        "vertex": str(k),
        "before": _poly_text(seed.assignment[k]),
        "after": _poly_text(out.assignment[k]),
        "incoming": _poly_text(p_in),
        "outgoing": _poly_text(p_out),
        "text": "({}) * ({}) = ({}) + ({})".format(
            _poly_text(seed.assignment[k]),
            _poly_text(out.assignment[k]),
            _poly_text(p_in),
            _poly_text(p_out),
        ),
    }
    return {"seed": out.to_json(), "relation": relation}


def seed_explore_step(seed_json):
    """All one-step mutations of the seed, for the interactive frontier."""
    seed = cluster.Seed.from_json(seed_json)
    neighbors = []
    for k in seed.quiver.exchangeable():
        out = cluster.seed_mutate(seed, k)
        neighbors.append({"vertex": str(k), "seed": out.to_json()})
    return {"neighbors": neighbors}


def exchange_graph_json(g):
    return {
        "nodes": [s.to_json() for s in g.nodes],
        "edges": [
            {"from": i, "to": j, "vertex": str(k)} for (i, j, k) in g.edges
        ],
        "depths": list(g.depths),
        "complete": g.complete,
    }


def seed_explore(seed_json, depth=6, node_cap=10000):
    seed = cluster.Seed.from_json(seed_json)
    g = cluster.explore(seed, depth=depth, node_cap=node_cap)
    log.info("explore: %d seeds, complete=%s", len(g.nodes), g.complete)
    return exchange_graph_json(g)


def seed_type(seed_json, depth=16, node_cap=10000):
    seed = cluster.Seed.from_json(seed_json)
    t = cluster.classify_type(seed, depth=depth, node_cap=node_cap)
    if isinstance(t, cluster.FiniteType):
        return {
            "kind": "finite",
            "name": t.name,
            "clusters": t.clusters,
            "variables": t.variables,
        }
    return {
        "kind": "infinite_within_cap",
        "depth": t.depth,
        "node_cap": t.node_cap,
        "nodes_found": t.nodes_found,
    }


def subcluster_check(sub_json, ambient_json, embedding):
    sub = cluster.Seed.from_json(sub_json)
    ambient = cluster.Seed.from_json(ambient_json)
    emb = {
        _vertex(sub.quiver, k): _vertex(ambient.quiver, v)
        for k, v in dict(embedding).items()
    }
    ok, report = cluster.check_subcluster(sub, ambient, emb)
    return {"ok": ok, "report": report}


# -- loop group


def loopgroup_seed(cell):
    return loopgroup.initial_seed(cell).to_json()


def loopgroup_verify(cell, samples=100, rng=42):
    return loopgroup.verify_cell(cell, samples=samples, rng=rng, strict=False)


def loopgroup_sample(cell, rng=42):
    return loopgroup.sample_cell(cell, rng).to_json()


def loopgroup_phi(module_json, word, cap=4, primes=None):
    x = preproj.ModuleRep.from_json(module_json)
    w = parse_word(word)
    kwargs = {}
    if primes:
        kwargs["primes"] = tuple(primes)
    series = loopgroup.phi_series(x, w, cap=cap, **kwargs)
    return {
        "word": list(w),
        "cap": cap,
        "series": series.to_json(),
        "text": _poly_text(series),
    }


# -- preprojective algebra


def preproj_dims(graph_name, n):
    g = named_graph(graph_name)
    alg = preproj.build_truncated(g, n)
    return {"n": n, "dims": alg.dims()}


def preproj_chain(graph_name, word, n):
    g = named_graph(graph_name)
    w = parse_word(word)
    alg = preproj.build_truncated(g, n)
    chain = preproj.ideal_for_word(alg, w)
    return {
        "word": list(w),
        "ideal_dims": [t.dim() for t in chain],
        "quotient_dims": [preproj.quotient_dim(alg, t) for t in chain],
    }


def preproj_end_quiver(graph_name, word, n=None):
    g = named_graph(graph_name)
    w = parse_word(word)
    if n is None:
        n = len(w) + 2
    alg = preproj.build_truncated(g, n)
    family = preproj.chain_modules(alg, w)
    frozen = word2quiver.last_occurrences(w)
    q = preproj.end_quiver(family, frozen)
    return q.to_json()


# -- export


def _graph_dot(g):
    lines = ["graph {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for a, b, m in g.edges():
        label = f' [label="{m}"]' if m > 1 else ""
        lines.append(f'  "{a}" -- "{b}"{label};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _exchange_dot(obj):
    lines = ["graph exchange {"]
    for i in range(len(obj["nodes"])):
        shape = "doublecircle" if i == 0 else "circle"
        lines.append(f"  n{i} [shape={shape}];")
    for e in obj["edges"]:
        lines.append(f'  n{e["from"]} -- n{e["to"]} [label="{e["vertex"]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_entity(kind, fmt, obj):
    """Validate an entity document and re-render it byte-stably."""
    from .cluster import Seed
    from .coxeter import CoxeterGraph

    if kind == "quiver":
        q = MultiQuiver.from_json(obj)
        return q.to_dot() if fmt == "dot" else canonical_json(q.to_json())
    if kind == "seed":
        s = Seed.from_json(obj)
        return s.quiver.to_dot() if fmt == "dot" else canonical_json(s.to_json())
    if kind == "graph":
        g = CoxeterGraph.from_json(obj)
        return _graph_dot(g) if fmt == "dot" else canonical_json(g.to_json())
    if kind == "module":
        if fmt == "dot":
            raise ValueError("modules have no dot rendering")
        return canonical_json(preproj.ModuleRep.from_json(obj).to_json())
    if kind == "exchange":
        if fmt == "dot":
            return _exchange_dot(obj)
        nodes = [Seed.from_json(s).to_json() for s in obj["nodes"]]
        return canonical_json({**obj, "nodes": nodes})
    raise ValueError(f"unknown kind {kind!r}")


def preproj_exchange(graph_name, word, index, n=None):
    g = named_graph(graph_name)
    w = parse_word(word)
    if n is None:
        n = len(w) + 2
    alg = preproj.build_truncated(g, n)
    family = preproj.chain_modules(alg, w)
    frozen = word2quiver.last_occurrences(w)
    res = preproj.exchange_summand(family, index, frozen)
    return {
        "index": index,
        "replacement_dims": res["replacement"].dim_vector(),
        "right_middle": {str(k): v for k, v in res["right"]["middle"].items()},
        "left_middle": {str(k): v for k, v in res["left"]["middle"].items()},
    }
