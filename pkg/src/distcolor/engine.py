"""Synchronous round-based message passing over a :class:`Graph`.

A :class:`NodeProgram` describes what every node does; :func:`run` executes
it round by round with per-edge message buffers and payload metering, and
:func:`run_emulated` executes the same program through a leaner delivery
path.  Both must agree exactly on outputs and round counts.

Messages are tuples of non-negative integers.  Their cost is the length of
the canonical encoding produced by :func:`encode_message`: the Elias-gamma
code of ``len+1`` followed by the Elias-gamma code of ``x+1`` for every
entry ``x``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .graph import Graph

LOCAL = "local"
CONGEST = "congest"


class _Pending:
    __slots__ = ()

    def __repr__(self) -> str:
        return "PENDING"


#: Returned as the output of :meth:`NodeProgram.step` while a node is still running.
PENDING = _Pending()


class EngineError(RuntimeError):
    pass


class CongestViolation(EngineError):
    def __init__(self, round_no: int, sender: int, receiver: int, bits: int, budget: int):
        super().__init__(
            f"round {round_no}: message {sender}->{receiver} needs {bits} bits, budget is {budget}"
        )
        self.round_no = round_no
        self.sender = sender
        self.receiver = receiver
        self.bits = bits
        self.budget = budget


class RoundLimitExceeded(EngineError):
    """Raised when nodes are still running at ``max_rounds`` or can never finish."""

    def __init__(self, message: str, partial_outputs: list, rounds: int):
        super().__init__(message)
        self.partial_outputs = partial_outputs
        self.rounds = rounds


@dataclass(frozen=True)
class Broadcast:
    """Outbox sending the same message to every neighbor."""

    message: tuple[int, ...]


class NodeProgram:
    """Per-node behaviour.  Instances hold only globally known parameters.

    ``step`` must be a pure function of its arguments.  ``next_wake`` tells
    the executor the next round in which the node has to run even if no
    message arrives; returning ``None`` means "only on message".  A node that
    is not woken must be idle, i.e. stepping it would change nothing.
    """

    def init(self, node: int, neighbors: tuple[int, ...], local_input: Any) -> Any:
        raise NotImplementedError

    def step(self, state: Any, round_no: int, inbox: dict[int, tuple[int, ...]]):
        """Return ``(state, outbox, output)``; ``output`` is PENDING until done."""
        raise NotImplementedError

    def next_wake(self, state: Any, round_no: int) -> int | None:
        return round_no + 1


# -- metrics ------------------------------------------------------------------


@dataclass
class RunMetrics:
    rounds: int = 0
    messages_sent: int = 0
    max_payload_bits: int | None = 0
    per_phase: list[tuple[str, int]] = field(default_factory=list)

    def absorb(self, other: "RunMetrics", label: str | None = None) -> None:
        """Append a sequentially executed run."""
        self.rounds += other.rounds
        self.messages_sent += other.messages_sent
        if self.max_payload_bits is None or other.max_payload_bits is None:
            self.max_payload_bits = None
        else:
            self.max_payload_bits = max(self.max_payload_bits, other.max_payload_bits)
        if label is not None:
            self.per_phase.append((label, other.rounds))
        else:
            self.per_phase.extend(other.per_phase)

    def phase_rounds(self, prefix: str) -> int:
        return sum(r for label, r in self.per_phase if label == prefix or label.startswith(prefix + ":"))

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "messages_sent": self.messages_sent,
            "max_payload_bits": self.max_payload_bits,
            "per_phase": [{"label": lab, "rounds": r} for lab, r in self.per_phase],
        }


# -- canonical encoding ---------------------------------------------------------


def _gamma_len(y: int) -> int:
    return 2 * (y.bit_length() - 1) + 1


def payload_bits(message: Sequence[int]) -> int:
    bits = _gamma_len(len(message) + 1)
    for x in message:
        bits += _gamma_len(x + 1)
    return bits


def _gamma(y: int) -> str:
    b = bin(y)[2:]
    return "0" * (len(b) - 1) + b


def encode_message(message: Sequence[int]) -> str:
    """Bit string of the canonical encoding (for tests and inspection)."""
    for x in message:
        if not isinstance(x, int) or x < 0:
            raise EngineError(f"message entries must be non-negative ints, got {x!r}")
    return _gamma(len(message) + 1) + "".join(_gamma(x + 1) for x in message)


def decode_message(bits: str) -> tuple[int, ...]:
    pos = 0

    def read() -> int:
        nonlocal pos
        zeros = 0
        while bits[pos] == "0":
            zeros += 1
            pos += 1
        value = int(bits[pos : pos + zeros + 1], 2)
        pos += zeros + 1
        return value

    length = read() - 1
    out = tuple(read() - 1 for _ in range(length))
    if pos != len(bits):
        raise EngineError("trailing bits after message")
    return out


def congest_budget(n: int, space: int = 1) -> int:
    """Default CONGEST budget ``32 * (ceil(log2 n) + ceil(log2 C) + 8)``."""
    lg = lambda x: math.ceil(math.log2(x)) if x > 1 else 0  # noqa: E731
    return 32 * (lg(n) + lg(space) + 8)


# -- executors ------------------------------------------------------------------


def _check_message(msg, round_no: int, sender: int) -> None:
    if not isinstance(msg, tuple):
        raise EngineError(f"round {round_no}: node {sender} sent a non-tuple message {msg!r}")
    for x in msg:
        if type(x) is not int or x < 0:
            raise EngineError(f"round {round_no}: node {sender} sent non-integer payload {msg!r}")


def run(
    program: NodeProgram,
    g: Graph,
    inputs: Sequence[Any] | None = None,
    mode: str = LOCAL,
    budget_bits: int | None = None,
    max_rounds: int = 10**9,
    strict: bool = False,
) -> tuple[list, RunMetrics]:
    """Execute ``program`` on ``g`` with buffered per-edge channels.

    Every message is type-checked and metered.  In CONGEST mode a message
    longer than ``budget_bits`` raises :class:`CongestViolation`.  With
    ``strict=True`` every unfinished node is stepped in every round and
    nodes that claimed to be idle are checked to really be idle.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if mode not in (LOCAL, CONGEST):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == CONGEST and budget_bits is None:
        raise ValueError("CONGEST mode needs budget_bits")
    n = g.n
    if inputs is None:
        inputs = [None] * n
    adj = g.adj
    adj_sets = [frozenset(a) for a in adj]
    states = [program.init(v, adj[v], inputs[v]) for v in range(n)]
    outputs: list = [PENDING] * n
    done = [False] * n
    remaining = n
    metrics = RunMetrics()
    wake_at: list[int | None] = [1] * n
    heap = [(1, v) for v in range(n)]
    # channels[(u, v)] holds the message u sent to v in the previous round
    channels: dict[tuple[int, int], tuple[int, ...]] = {}
    round_no = 0
    while remaining:
        while heap and (done[heap[0][1]] or wake_at[heap[0][1]] != heap[0][0]):
            heapq.heappop(heap)
        if not channels and not heap:
            raise RoundLimitExceeded(
                f"{remaining} nodes can never finish (no messages, no wake-ups)",
                list(outputs),
                round_no,
            )
        nxt = round_no + 1 if (channels or strict) else heap[0][0]
        if nxt > max_rounds:
            raise RoundLimitExceeded(
                f"max_rounds={max_rounds} reached with {remaining} unfinished nodes",
                list(outputs),
                max_rounds,
            )
        round_no = nxt
        inboxes: dict[int, dict[int, tuple[int, ...]]] = {}
        for (u, v), msg in channels.items():
            inboxes.setdefault(v, {})[u] = msg
        channels = {}
        active = set(inboxes)
        while heap and heap[0][0] <= round_no:
            _, v = heapq.heappop(heap)
            if not done[v] and wake_at[v] == round_no:
                active.add(v)
        if strict:
            idle_check = [v for v in range(n) if not done[v] and v not in active]
        else:
            idle_check = []
        for v in sorted(active):
            if done[v]:
                continue
            state, outbox, out = program.step(states[v], round_no, inboxes.get(v, {}))
            states[v] = state
            if outbox is not None:
                if isinstance(outbox, Broadcast):
                    msg = outbox.message
                    _check_message(msg, round_no, v)
                    targets = [(u, msg) for u in adj[v]]
                else:
                    targets = sorted(outbox.items())
                for u, msg in targets:
                    if u not in adj_sets[v]:
                        raise EngineError(f"round {round_no}: node {v} sent to non-neighbor {u}")
                    _check_message(msg, round_no, v)
                    bits = payload_bits(msg)
                    if mode == CONGEST and bits > budget_bits:
                        raise CongestViolation(round_no, v, u, bits, budget_bits)
                    if bits > metrics.max_payload_bits:
                        metrics.max_payload_bits = bits
                    metrics.messages_sent += 1
                    channels[(v, u)] = msg
            if out is not PENDING:
                outputs[v] = out
                done[v] = True
                remaining -= 1
                wake_at[v] = None
                metrics.rounds = round_no
            else:
                w = program.next_wake(state, round_no)
                wake_at[v] = w
                if w is not None:
                    if w <= round_no:
                        raise EngineError(f"node {v} asked to wake in the past ({w} <= {round_no})")
                    heapq.heappush(heap, (w, v))
        for v in idle_check:
            state, outbox, out = program.step(states[v], round_no, {})
            if outbox is not None or out is not PENDING or state != states[v]:
                raise EngineError(f"round {round_no}: node {v} claimed idle but acted")
        # messages addressed to finished nodes are dropped
        if channels:
            channels = {k: m for k, m in channels.items() if not done[k[1]]}
    return outputs, metrics


def run_emulated(
    program: NodeProgram,
    g: Graph,
    inputs: Sequence[Any] | None = None,
    max_rounds: int = 10**9,
) -> tuple[list, RunMetrics]:
    """Centralized fast path: LOCAL semantics, no channel buffers or metering.

    Broadcasts are stored once per sender and read by the receivers;
    ``max_payload_bits`` is reported as ``None``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    n = g.n
    if inputs is None:
        inputs = [None] * n
    adj = g.adj
    step = program.step
    next_wake = program.next_wake
    states = [program.init(v, adj[v], inputs[v]) for v in range(n)]
    outputs: list = [PENDING] * n
    done = [False] * n
    remaining = n
    rounds = 0
    sent = 0
    wake_at: list[int | None] = [1] * n
    heap = [(1, v) for v in range(n)]
    bcast: dict[int, tuple[int, ...]] = {}
    direct: dict[int, dict[int, tuple[int, ...]]] = {}
    round_no = 0
    while remaining:
        if bcast or direct:
            nxt = round_no + 1
        else:
            while heap and (done[heap[0][1]] or wake_at[heap[0][1]] != heap[0][0]):
                heapq.heappop(heap)
            if not heap:
                raise RoundLimitExceeded(
                    f"{remaining} nodes can never finish (no messages, no wake-ups)",
                    list(outputs),
                    round_no,
                )
            nxt = heap[0][0]
        if nxt > max_rounds:
            raise RoundLimitExceeded(
                f"max_rounds={max_rounds} reached with {remaining} unfinished nodes",
                list(outputs),
                max_rounds,
            )
        round_no = nxt
        prev_bcast, prev_direct = bcast, direct
        bcast, direct = {}, {}
        active = set(prev_direct)
        for u in prev_bcast:
            active.update(adj[u])
        while heap and heap[0][0] <= round_no:
            _, v = heapq.heappop(heap)
            if not done[v] and wake_at[v] == round_no:
                active.add(v)
        for v in sorted(active):
            if done[v]:
                continue
            inbox = {u: prev_bcast[u] for u in adj[v] if u in prev_bcast} if prev_bcast else {}
            if v in prev_direct:
                inbox.update(prev_direct[v])
            state, outbox, out = step(states[v], round_no, inbox)
            states[v] = state
            if outbox is not None:
                if isinstance(outbox, Broadcast):
                    if adj[v]:
                        bcast[v] = outbox.message
                        sent += len(adj[v])
                else:
                    for u, msg in outbox.items():
                        direct.setdefault(u, {})[v] = msg
                        sent += 1
            if out is not PENDING:
                outputs[v] = out
                done[v] = True
                remaining -= 1
                wake_at[v] = None
                rounds = round_no
            else:
                w = next_wake(state, round_no)
                wake_at[v] = w
                if w is not None:
                    heapq.heappush(heap, (w, v))
        if direct:
            direct = {v: box for v, box in direct.items() if not done[v]}
    return outputs, RunMetrics(rounds=rounds, messages_sent=sent, max_payload_bits=None)


class Runner:
    """Execution context threaded through the algorithm drivers.

    Holds the model (LOCAL or CONGEST with a bit budget), chooses between
    :func:`run` and :func:`run_emulated`, and accumulates :class:`RunMetrics`
    over the sequence of programs a driver launches.
    """

    def __init__(
        self,
        mode: str = LOCAL,
        budget_bits: int | None = None,
        emulated: bool = False,
        max_rounds: int = 10**9,
        strict: bool = False,
        space: int = 1,
        network_size: int = 0,
    ):
        if emulated and mode == CONGEST:
            raise ValueError("the emulated executor only supports LOCAL mode")
        self.mode = mode
        self.budget_bits = budget_bits
        self.emulated = emulated
        self.max_rounds = max_rounds
        self.strict = strict
        # used for the default CONGEST budget when budget_bits is None
        self.space = space
        self.network_size = network_size
        self.metrics = RunMetrics(max_payload_bits=None if emulated else 0)
        self.runs = 0

    def execute(self, program: NodeProgram, g: Graph, inputs: Sequence[Any] | None, label: str) -> list:
        if self.emulated:
            outputs, m = run_emulated(program, g, inputs, max_rounds=self.max_rounds)
        else:
            outputs, m = run(
                program,
                g,
                inputs,
                mode=self.mode,
                budget_bits=self.budget_for(g),
                max_rounds=self.max_rounds,
                strict=self.strict,
            )
        self.runs += 1
        self.metrics.absorb(m, label)
        return outputs

    def budget_for(self, g: Graph) -> int | None:
        if self.mode != CONGEST:
            return self.budget_bits
        if self.budget_bits is not None:
            return self.budget_bits
        return congest_budget(max(g.n, self.network_size), self.space)

    def child(self) -> "Runner":
        """Fresh runner with the same configuration and empty metrics."""
        return Runner(
            self.mode,
            self.budget_bits,
            self.emulated,
            self.max_rounds,
            self.strict,
            self.space,
            self.network_size,
        )


def ensure_runner(runner: Runner | None) -> Runner:
    return runner if runner is not None else Runner()


def simple_program(
    init: Callable[[int, tuple[int, ...], Any], Any],
    step: Callable[[Any, int, dict], tuple],
    next_wake: Callable[[Any, int], int | None] | None = None,
) -> NodeProgram:
    """Build a NodeProgram from plain functions (handy in tests and demos)."""

    class _Program(NodeProgram):
        pass

    prog = _Program()
    prog.init = init  # type: ignore[method-assign]
    prog.step = step  # type: ignore[method-assign]
    if next_wake is not None:
        prog.next_wake = next_wake  # type: ignore[method-assign]
    return prog
