"""Causality analysis over flow dependency graphs.

Edges are weighted by the minimal date delay (in time units) between a flow
and the flow that reads it: ``fby`` contributes one period of its operand,
``~> q`` contributes ``n*q``, every other operator contributes nothing.  An
equation system is causal iff every dependency cycle has a strictly positive
total delay, i.e. each value only depends on strictly earlier values of
itself.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Optional

Graph = Mapping[Hashable, Mapping[Hashable, int]]


def tarjan_scc(nodes: Iterable[Hashable], graph: Graph) -> list[list]:
    """Strongly connected components, in reverse topological order.

    Iterative so deep dependency chains do not hit the recursion limit.
    """
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    sccs: list[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(graph.get(root, {})))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph.get(w, {}))))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                lowlink[u] = min(lowlink[u], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _is_cyclic(comp: list, graph: Graph) -> bool:
    return len(comp) > 1 or comp[0] in graph.get(comp[0], {})


def find_nonpositive_cycle(comp: list, graph: Graph) -> Optional[list]:
    """Return a cycle inside ``comp`` whose total weight is <= 0, if any.

    Integer weights ``w`` are rescaled to ``w*L - 1`` with ``L`` larger than
    any simple cycle length, which turns "total <= 0" into "total < 0" so
    Bellman-Ford negative cycle detection applies.
    """
    members = set(comp)
    scale = len(comp) + 1
    edges = [
        (u, v, w * scale - 1)
        for u in comp
        for v, w in graph.get(u, {}).items()
        if v in members
    ]
    dist = {v: 0 for v in comp}
    pred: dict = {}
    last = None
    for _ in range(len(comp)):
        last = None
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                pred[v] = u
                last = v
        if last is None:
            return None
    # walk back far enough to land on the cycle itself
    v = last
    for _ in range(len(comp)):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.reverse()
    return cycle


def bad_cycles(nodes: Iterable[Hashable], graph: Graph) -> list[list]:
    """Every non-causal cycle, one per strongly connected component."""
    out = []
    for comp in tarjan_scc(list(nodes), graph):
        if not _is_cyclic(comp, graph):
            continue
        cycle = find_nonpositive_cycle(comp, graph)
        if cycle is not None:
            out.append(cycle)
    return out


def shortest_delays(sources: Iterable[Hashable], nodes: Iterable[Hashable], graph: Graph) -> dict:
    """Minimal total delay from each source to every reachable node.

    Only meaningful when :func:`bad_cycles` found nothing (no cycle of
    non-positive weight, hence no negative cycle).
    """
    nodes = list(nodes)
    result = {}
    for s in sources:
        dist = {s: 0}
        for _ in range(len(nodes)):
            changed = False
            for u in list(dist):
                for v, w in graph.get(u, {}).items():
                    if v not in dist or dist[u] + w < dist[v]:
                        dist[v] = dist[u] + w
                        changed = True
            if not changed:
                break
        result[s] = dist
    return result
