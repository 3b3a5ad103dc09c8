"""Baseline distributed subroutines.

* :func:`linial_coloring` -- O(Delta^2)-coloring in O(log* n) rounds by
  iterated polynomial color reduction.
* :func:`relative_defective_coloring` -- lambda-relative defective coloring
  with O(1/lambda^2) colors by the same polynomial step, tolerating
  collisions instead of forbidding them.
* :func:`low_degree_list_color` -- list coloring of the nodes of degree at
  most d in O(d + log* n) rounds.

One polynomial step turns an m-coloring into a q^2-coloring.  A color c is
read as the polynomial f_c over GF(q) whose coefficients are the base-q
digits of c (degree <= k, so q^(k+1) >= m).  Each node picks an evaluation
point t and becomes ``t*q + f_c(t)``.  Two distinct polynomials agree on at
most k points, which bounds the number of neighbors the node can collide with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .engine import PENDING, Broadcast, NodeProgram, Runner, ensure_runner
from .graph import Graph, induced_subgraph

#: palette_size <= LINIAL_K * max(Delta, 2)**2 for every Linial output
LINIAL_K = 25

Color = int
PartialColoring = list  # per-node color or None (uncolored)


@dataclass(frozen=True)
class ProperColoring:
    color: tuple[int, ...]
    palette_size: int


@dataclass(frozen=True)
class DefectiveColoring:
    bucket: tuple[int, ...]
    q: int
    lam: Fraction | tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    """Exact rational; floats are read by their shortest decimal repr (0.1 -> 1/10)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


# -- number theory helpers ------------------------------------------------------


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    f = 3
    while f * f <= x:
        if x % f == 0:
            return False
        f += 2
    return True


def next_prime(x: int) -> int:
    """Smallest prime >= x (trial division)."""
    x = max(x, 2)
    while not is_prime(x):
        x += 1
    return x


def iroot_ceil(m: int, e: int) -> int:
    """Smallest integer x >= 1 with x**e >= m."""
    if m <= 1:
        return 1
    x = max(1, int(round(m ** (1.0 / e))))
    while x**e < m:
        x += 1
    while x > 1 and (x - 1) ** e >= m:
        x -= 1
    return x


def iroot_floor(m: int, e: int) -> int:
    """Largest integer x >= 0 with x**e <= m."""
    if m <= 0:
        return 0
    x = max(1, int(round(m ** (1.0 / e))))
    while x**e > m:
        x -= 1
    while (x + 1) ** e <= m:
        x += 1
    return x


# -- polynomial step ------------------------------------------------------------


@dataclass(frozen=True)
class PolyStep:
    q: int
    k: int


def best_step(m: int, min_q) -> PolyStep | None:
    """Cheapest (q, k) with q prime, q^(k+1) >= m and q >= min_q(k).

    Returns None when no choice shrinks the palette below m.
    """
    best = None
    for k in range(1, max(1, m.bit_length()) + 1):
        q = next_prime(max(min_q(k), iroot_ceil(m, k + 1)))
        if best is None or q < best.q:
            best = PolyStep(q, k)
    if best is None or best.q * best.q >= m:
        return None
    return best


def linial_schedule(m: int, delta: int) -> tuple[PolyStep, ...]:
    """Steps reducing an m-coloring until no step helps; zero collisions each."""
    steps = []
    while True:
        step = best_step(m, lambda k: delta * k + 1)
        if step is None:
            return tuple(steps)
        steps.append(step)
        m = step.q * step.q


def schedule_palette(m: int, steps: Sequence[PolyStep]) -> int:
    return steps[-1].q ** 2 if steps else m


def defective_schedule(m: int, lam: Fraction) -> tuple[PolyStep, ...]:
    """Steps turning a proper m-coloring into a lam-relative defective one.

    With s steps, step i tolerates a ``lam / 2**(s-i+1)`` fraction of
    collisions, so the defects add up to less than ``lam * deg``.  The
    number of steps minimizing the final palette wins (fewest on ties).
    """
    best_palette, best_steps = m, ()
    for s in range(1, 7):
        cur, steps = m, []
        for i in range(1, s + 1):
            lam_i = lam / 2 ** (s - i + 1)
            step = best_step(cur, lambda k, lam_i=lam_i: math.ceil(k / lam_i))
            if step is None:
                break
            steps.append(step)
            cur = step.q * step.q
        else:
            if cur < best_palette:
                best_palette, best_steps = cur, tuple(steps)
    return best_steps


def _digits(c: int, q: int, k: int) -> list[int]:
    out = []
    for _ in range(k + 1):
        out.append(c % q)
        c //= q
    return out


def _poly_eval(coeffs: Sequence[int], t: int, q: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * t + a) % q
    return acc


def poly_pick(own: int, nbr_colors: Sequence[int], step: PolyStep, proper: bool) -> int:
    """New color of a node with color ``own`` whose neighbors hold ``nbr_colors``.

    Collisions are counted only against neighbors of a different color.
    ``proper`` demands zero collisions, otherwise the first point with the
    fewest collisions is taken.
    """
    q, k = step.q, step.k
    mine = _digits(own, q, k)
    others = [c for c in nbr_colors if c != own]
    if not others:
        t = 0
    else:
        d = np.array([_digits(c, q, k) for c in others], dtype=np.int64)
        d = (d - np.array(mine, dtype=np.int64)) % q
        ts = np.arange(q, dtype=np.int64)
        vals = np.zeros((len(others), q), dtype=np.int64)
        for j in range(k, -1, -1):
            vals = (vals * ts + d[:, j : j + 1]) % q
        hits = (vals == 0).sum(axis=0)
        if proper:
            free = np.flatnonzero(hits == 0)
            if free.size == 0:
                raise ArithmeticError(f"no collision-free point for color {own} with q={q}, k={k}")
            t = int(free[0])
        else:
            t = int(np.argmin(hits))
    return t * q + _poly_eval(mine, t, q)


class PolyReductionProgram(NodeProgram):
    """Runs a per-node schedule of polynomial steps.

    Local input: ``(initial_color, steps, proper)``.  Neighbors must share
    the schedule.  Round 1 announces the initial color, each further round
    applies one step; the node outputs after its last step.
    """

    def init(self, node, neighbors, local_input):
        color, steps, proper = local_input
        return (color, 0, tuple(steps), proper)

    def step(self, state, round_no, inbox):
        color, idx, steps, proper = state
        if not steps:
            return state, None, color
        if round_no == 1:
            return state, Broadcast((color,)), PENDING
        new = poly_pick(color, [m[0] for m in inbox.values()], steps[idx], proper)
        idx += 1
        if idx == len(steps):
            return (new, idx, steps, proper), None, new
        return (new, idx, steps, proper), Broadcast((new,)), PENDING


# -- Linial -------------------------------------------------------------------


def linial_coloring(
    g: Graph,
    runner: Runner | None = None,
    initial: ProperColoring | None = None,
    delta: int | Sequence[int] | None = None,
    label: str = "linial",
) -> ProperColoring:
    """Proper coloring with at most ``LINIAL_K * max(Delta, 2)**2`` colors.

    Starts from the node ids unless ``initial`` is given.  ``delta`` is the
    degree bound the nodes plan with (per node when components differ).
    """
    runner = ensure_runner(runner)
    if initial is None:
        start = tuple(range(g.n))
        m = max(g.n, 1)
    else:
        start, m = initial.color, initial.palette_size
    if delta is None:
        delta = g.max_degree()
    if isinstance(delta, int):
        sched = linial_schedule(m, delta)
        scheds = [sched] * g.n
        palette = schedule_palette(m, sched)
    else:
        cache: dict[int, tuple[PolyStep, ...]] = {}
        scheds = []
        for d in delta:
            if d not in cache:
                cache[d] = linial_schedule(m, d)
            scheds.append(cache[d])
        palette = max((schedule_palette(m, s) for s in scheds), default=m)
    inputs = [(start[v], scheds[v], True) for v in range(g.n)]
    out = runner.execute(PolyReductionProgram(), g, inputs, label)
    return ProperColoring(tuple(out), palette)


# -- relative defective coloring -------------------------------------------------


def relative_defective_coloring(
    g: Graph,
    lam,
    base: ProperColoring,
    runner: Runner | None = None,
    label: str = "defective",
) -> DefectiveColoring:
    """Coloring where each v has at most ``lam * deg(v)`` same-colored neighbors.

    ``lam`` is a number in (0, 1] or a per-node sequence (neighbors must
    agree).  The palette is O(1/lam^2); the run takes O(log*) rounds.
    """
    runner = ensure_runner(runner)
    per_node = isinstance(lam, (list, tuple))
    lams = [as_fraction(x) for x in lam] if per_node else [as_fraction(lam)] * g.n
    for x in lams:
        if x <= 0:
            raise ValueError(f"lambda must be positive, got {x}")
    m = base.palette_size
    cache: dict[Fraction, tuple[int, tuple[PolyStep, ...]]] = {}
    inputs = []
    palette = 1
    for v in range(g.n):
        x = lams[v]
        if x not in cache:
            if x >= 1:
                cache[x] = (1, ())
            else:
                steps = defective_schedule(m, x)
                cache[x] = (schedule_palette(m, steps), steps)
        pal, steps = cache[x]
        palette = max(palette, pal)
        start = 0 if pal == 1 else base.color[v]
        inputs.append((start, steps, False))
    out = runner.execute(PolyReductionProgram(), g, inputs, label)
    return DefectiveColoring(tuple(out), palette, tuple(lams) if per_node else as_fraction(lam))


def defects(g: Graph, colors: Sequence[int]) -> list[int]:
    return [sum(1 for u in g.adj[v] if colors[u] == colors[v]) for v in range(g.n)]


# -- low-degree list coloring ----------------------------------------------------


class AdditiveGroupProgram(NodeProgram):
    """q^2 -> q coloring for graphs of degree < q/2 in O(q) rounds.

    A color is a pair (a, b) with a in [1, q).  In round t >= 2 a moving
    node sits at b + (t-2)*a mod q and settles on that value once no
    neighbor holds it: settled neighbors block one round per period of q,
    moving neighbors with a different slope collide once per period.
    Local input: ``(a, b, q)``.
    """

    def init(self, node, neighbors, local_input):
        a, b, q = local_input
        return (a, b, q, (), ())

    def step(self, state, round_no, inbox):
        a, b, q, movers, finals = state
        if round_no == 1:
            return state, Broadcast((a, b)), PENDING
        if inbox:
            movers = dict(movers)
            finals = dict(finals)
            for u, msg in inbox.items():
                if len(msg) == 2:
                    movers[u] = msg
                else:
                    movers.pop(u, None)
                    finals[u] = msg[0]
            movers = tuple(sorted(movers.items()))
            finals = tuple(sorted(finals.items()))
        shift = round_no - 2
        here = (b + shift * a) % q
        blocked = any(fb == here for _, fb in finals) or any(
            (ub + shift * ua) % q == here for _, (ua, ub) in movers
        )
        if blocked:
            return (a, b, q, movers, finals), None, PENDING
        return (a, b, q, movers, finals), Broadcast((here,)), here


class ColorReductionProgram(NodeProgram):
    """Standard reduction of a q-coloring to ``target`` colors, one class per round.

    Local input: ``(color, q, target)`` with target > max degree.
    """

    def init(self, node, neighbors, local_input):
        color, q, target = local_input
        return (color, q, target, ())

    def step(self, state, round_no, inbox):
        color, q, target, taken = state
        if round_no == 1:
            if color < target:
                return state, Broadcast((color,)), color
            return state, Broadcast((color,)), PENDING
        if inbox:
            d = dict(taken)
            for u, msg in inbox.items():
                d[u] = msg[0]
            taken = tuple(sorted(d.items()))
        if round_no != self._slot(color, q):
            return (color, q, target, taken), None, PENDING
        used = {c for _, c in taken}
        new = next(c for c in range(target) if c not in used)
        return (new, q, target, taken), Broadcast((new,)), new

    @staticmethod
    def _slot(color: int, q: int) -> int:
        return 1 + (q - color)

    def next_wake(self, state, round_no):
        color, q, target, _ = state
        slot = self._slot(color, q)
        return slot if slot > round_no else None


class GreedyListProgram(NodeProgram):
    """Classes of a proper coloring take turns picking the smallest free list color.

    Local input: ``(class, list)``; class c acts in round c + 1.  Output is
    the color or None when the list is exhausted.
    """

    def init(self, node, neighbors, local_input):
        cls, lst = local_input
        return (cls, tuple(lst), frozenset())

    def step(self, state, round_no, inbox):
        cls, lst, taken = state
        if inbox:
            taken = taken | {m[0] for m in inbox.values()}
        if round_no < cls + 1:
            return (cls, lst, taken), None, PENDING
        pick = next((c for c in lst if c not in taken), None)
        if pick is None:
            return (cls, lst, taken), None, None
        return (cls, lst, taken), Broadcast((pick,)), pick

    def next_wake(self, state, round_no):
        slot = state[0] + 1
        return slot if slot > round_no else None


def low_degree_list_color(
    g: Graph,
    d: int | Sequence[int],
    lists: Sequence[Sequence[int]],
    base: ProperColoring,
    runner: Runner | None = None,
    label: str = "lowdeg",
    details: dict | None = None,
) -> PartialColoring:
    """List-color the nodes of degree <= d.

    Every node with ``deg_g(v) <= d`` and ``|L_v| > deg_g(v)`` gets a color
    from its list; other nodes may stay None.  The nodes of degree <= d are
    first (d+1)-colored (Linial from ``base``, additive-group reduction to
    O(d) colors, then one color class per round down to d+1), after which
    the d+1 classes pick list colors greedily.
    """
    runner = ensure_runner(runner)
    dv = [d] * g.n if isinstance(d, int) else list(d)
    low = [v for v in range(g.n) if g.degree(v) <= dv[v]]
    sub = induced_subgraph(g, low)
    h = sub.graph
    result: PartialColoring = [None] * g.n
    if h.n == 0:
        return result
    hd = [dv[v] for v in sub.to_parent]
    hbase = ProperColoring(tuple(base.color[v] for v in sub.to_parent), base.palette_size)
    lin = linial_coloring(h, runner, initial=hbase, delta=hd, label=f"{label}:linial")
    # additive-group step; q per degree bound, shared inside a component
    qs: dict[int, int] = {}
    for dd in set(hd):
        q = next_prime(2 * dd + 1)
        while q * (q - 1) < lin.palette_size:
            q = next_prime(q + 1)
        qs[dd] = q
    ag_inputs = []
    for i in range(h.n):
        q = qs[hd[i]]
        c = lin.color[i]
        ag_inputs.append((1 + c // q, c % q, q))
    small = runner.execute(AdditiveGroupProgram(), h, ag_inputs, f"{label}:additive")
    red_inputs = [(small[i], qs[hd[i]], hd[i] + 1) for i in range(h.n)]
    classes = runner.execute(ColorReductionProgram(), h, red_inputs, f"{label}:reduce")
    greedy_inputs = [(classes[i], lists[sub.to_parent[i]]) for i in range(h.n)]
    colors = runner.execute(GreedyListProgram(), h, greedy_inputs, f"{label}:greedy")
    for i, v in enumerate(sub.to_parent):
        result[v] = colors[i]
    if details is not None:
        details["classes"] = {sub.to_parent[i]: classes[i] for i in range(h.n)}
        details["subgraph"] = sub
    return result


class AnnounceProgram(NodeProgram):
    """Newly colored nodes announce their color; neighbors drop it from their lists.

    Local input: ``(new_color_or_None, list)``.  Output: the residual list.
    """

    def init(self, node, neighbors, local_input):
        return local_input

    def step(self, state, round_no, inbox):
        color, lst = state
        if round_no == 1:
            return state, (Broadcast((color,)) if color is not None else None), PENDING
        taken = {m[0] for m in inbox.values()}
        return state, None, tuple(c for c in lst if c not in taken)


def remove_taken_colors(
    g: Graph,
    new_colors: dict[int, int],
    lists: list,
    runner: Runner | None = None,
    label: str = "announce",
) -> None:
    """Two-round exchange; updates ``lists`` in place for neighbors of newly colored nodes.

    Only the newly colored nodes and their neighbors take part, the rest of
    the network idles.
    """
    if not new_colors:
        return
    runner = ensure_runner(runner)
    part = set(new_colors)
    for v in new_colors:
        part.update(g.adj[v])
    sub = induced_subgraph(g, part)
    inputs = [(new_colors.get(v), lists[v]) for v in sub.to_parent]
    out = runner.execute(AnnounceProgram(), sub.graph, inputs, label)
    for i, v in enumerate(sub.to_parent):
        if v not in new_colors:
            lists[v] = out[i]
