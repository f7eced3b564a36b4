"""Cycle-driven simulation of handshaked streaming pipelines.

The model mirrors registered valid/ready hardware.  A Channel is a bounded
FIFO; at the start of every cycle it latches what its two endpoints may
observe (head beat for the consumer, free slot for the producer).  All
decisions in a cycle are made against those latched views, so the order in
which elements tick never matters and a transfer committed in cycle t is
first visible in cycle t+1.  With the default capacity of 2 a channel
behaves like a skid buffer: full throughput with registered ready, one
stall cycle absorbed without a bubble.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

PAYLOAD_WIDTHS = (8, 24, 32)


class Beat(NamedTuple):
    """One transfer on a stream: a payload word plus an end-of-frame flag."""

    data: int
    last: bool = False


class ProtocolError(RuntimeError):
    """An element broke the handshake contract (take from empty / put to full)."""


class WidthMismatchError(ValueError):
    """Adjacent elements in a pipeline disagree on payload width."""


class DeadlockError(RuntimeError):
    """No beat moved anywhere for longer than the watchdog allows."""


@dataclass(frozen=True)
class StallModel:
    """Sink-side ready behaviour.

    probability 0.0 means the sink is ready every cycle.  Otherwise one
    uniform draw per cycle from a private RNG seeded with `seed` deasserts
    ready with the given probability, so a run is reproducible from
    (probability, seed) alone.
    """

    probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("stall probability must be within [0, 1]")


NO_STALLS = StallModel()


@dataclass(frozen=True)
class CycleStats:
    """Timing summary of one frame through one pipeline.

    Cycle numbers are 0-based indices of scheduler cycles; total_cycles is
    the index of the cycle in which the sink accepted the last-flagged beat.
    """

    total_cycles: int
    first_output_cycle: int
    output_beats: int
    sink_stall_cycles: int


class Channel:
    """Bounded FIFO between two pipeline elements.

    Consumers use head/take, producers use free/put.  Both views are latched
    by begin_cycle(), and each side may act at most once per cycle; the
    latch is cleared as the action happens, which makes a double take or a
    put into an already-claimed slot a ProtocolError.
    """

    __slots__ = ("payload_width", "capacity", "_max", "_q", "_head", "_free",
                 "pushed", "popped", "ops")

    def __init__(self, payload_width: int, capacity: int = 2):
        if payload_width not in PAYLOAD_WIDTHS:
            raise ValueError(f"payload width must be one of {PAYLOAD_WIDTHS}")
        if capacity < 1:
            raise ValueError("channel capacity must be at least 1")
        self.payload_width = payload_width
        self.capacity = capacity
        self._max = 1 << payload_width
        self._q: list = []
        self._head: Optional[Beat] = None
        self._free = True
        self.pushed = 0  # lifetime counters for flow-conservation checks
        self.popped = 0
        self.ops = 0

    def __len__(self):
        return len(self._q)

    @property
    def valid(self) -> bool:
        """Latched consumer view: a beat was available at the cycle start."""
        return self._head is not None

    @property
    def ready(self) -> bool:
        """Latched producer view: a slot was open at the cycle start."""
        return self._free

    def begin_cycle(self):
        q = self._q
        self._head = q[0] if q else None
        self._free = len(q) < self.capacity

    # -- consumer side -------------------------------------------------
    @property
    def head(self) -> Optional[Beat]:
        return self._head

    def take(self) -> Beat:
        beat = self._head
        if beat is None:
            raise ProtocolError("take on a channel with no visible beat")
        self._head = None
        del self._q[0]
        self.popped += 1
        self.ops += 1
        return beat

    # -- producer side -------------------------------------------------
    @property
    def free(self) -> bool:
        return self._free

    def put(self, beat: Beat):
        if not self._free:
            raise ProtocolError("put on a channel with no free slot")
        if not 0 <= beat.data < self._max:
            raise ValueError(
                f"beat data {beat.data:#x} exceeds {self.payload_width}-bit payload"
            )
        self._free = False
        self._q.append(beat)
        self.pushed += 1
        self.ops += 1


class ProcessingElement:
    """Base class for pipeline stages.

    Subclasses declare in_width/out_width and implement tick(pin, pout),
    which is called exactly once per cycle with the upstream and downstream
    channels.  A tick may take at most one beat and put at most one beat,
    judged against the cycle-start channel views.  reset() must restore the
    element to its power-on state so a pipeline can run several frames.
    """

    name = "pe"
    in_width: int = 8
    out_width: int = 8

    def tick(self, pin: Channel, pout: Channel):
        raise NotImplementedError

    def reset(self):
        pass


class Pipeline:
    """A linear chain source -> elements -> sink with one channel per hop."""

    def __init__(self, elements, channels):
        self.elements = list(elements)
        self.channels = list(channels)
        self.source_channel = self.channels[0]
        self.sink_channel = self.channels[-1]
        self.wiring = list(zip(self.elements, self.channels[:-1], self.channels[1:]))

    def reset(self):
        for ch in self.channels:
            ch._q.clear()
            ch._head = None
            ch._free = True
            ch.pushed = ch.popped = ch.ops = 0
        for pe in self.elements:
            pe.reset()


def build_pipeline(elements, channel_capacity: int = 2) -> Pipeline:
    """Wire elements into a linear pipeline, checking port widths agree."""
    elements = list(elements)
    if not elements:
        raise ValueError("a pipeline needs at least one element")
    for left, right in zip(elements, elements[1:]):
        if left.out_width != right.in_width:
            raise WidthMismatchError(
                f"{left.name} drives {left.out_width}-bit beats but "
                f"{right.name} expects {right.in_width}-bit beats"
            )
    channels = [Channel(elements[0].in_width, channel_capacity)]
    for pe in elements:
        channels.append(Channel(pe.out_width, channel_capacity))
    return Pipeline(elements, channels)


def _validate_frame(frame, payload_width: int):
    if not frame:
        raise ValueError("frame must contain at least one beat")
    limit = 1 << payload_width
    for beat in frame:
        if not 0 <= beat.data < limit:
            raise ValueError(
                f"frame beat {beat.data:#x} exceeds {payload_width}-bit payload"
            )
    for beat in frame[:-1]:
        if beat.last:
            raise ValueError("last flag set before the final beat")
    if not frame[-1].last:
        raise ValueError("final beat must carry the last flag")


def run_frame(pipeline: Pipeline, frame, stalls: StallModel = NO_STALLS,
              watchdog: Optional[int] = None):
    """Drive one frame through a pipeline and collect the sink's beats.

    The frame is offered beat by beat at the head channel; the sink pops
    whatever reaches the tail channel whenever the stall model leaves ready
    asserted.  Returns (received beats, CycleStats).  The pipeline is reset
    first, so the same object can run any number of frames.

    The run aborts with DeadlockError if no channel moves a beat for more
    than `watchdog` consecutive cycles (default: 10x the frame length).
    """
    pipeline.reset()
    _validate_frame(frame, pipeline.source_channel.payload_width)
    if watchdog is None:
        watchdog = 10 * len(frame)

    channels = pipeline.channels
    wiring = pipeline.wiring
    src = pipeline.source_channel
    snk = pipeline.sink_channel
    probability = stalls.probability
    rng = random.Random(stalls.seed) if probability > 0.0 else None

    received = []
    frame_len = len(frame)
    src_idx = 0
    cycle = 0
    stall_cycles = 0
    first_output = -1
    idle = 0
    prev_ops = 0

    while True:
        for ch in channels:
            ch.begin_cycle()

        if src_idx < frame_len and src._free:
            src.put(frame[src_idx])
            src_idx += 1

        for pe, cin, cout in wiring:
            pe.tick(cin, cout)

        done = False
        if rng is not None and rng.random() < probability:
            stall_cycles += 1
        elif snk._head is not None:
            beat = snk.take()
            received.append(beat)
            if first_output < 0:
                first_output = cycle
            done = beat.last

        total_ops = 0
        for ch in channels:
            total_ops += ch.ops
        if total_ops == prev_ops:
            idle += 1
            if idle > watchdog:
                raise DeadlockError(
                    f"no beat moved for {idle} cycles (watchdog {watchdog}, "
                    f"cycle {cycle}, {len(received)} beats received)"
                )
        else:
            idle = 0
            prev_ops = total_ops

        if done:
            break
        cycle += 1

    stats = CycleStats(
        total_cycles=cycle,
        first_output_cycle=first_output,
        output_beats=len(received),
        sink_stall_cycles=stall_cycles,
    )
    return received, stats
